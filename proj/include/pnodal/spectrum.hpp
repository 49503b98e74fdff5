#ifndef PNODAL_SPECTRUM_HPP
#define PNODAL_SPECTRUM_HPP

#include <Eigen/Core>

#include "pnodal/asymptotics.hpp"
#include "pnodal/gentrig.hpp"
#include "pnodal/potentials.hpp"
#include "pnodal/pruefer.hpp"

namespace pnodal {

struct SpectrumOptions {
    PhaseOptions phase;
    double root_tol = 1e-10;   // on |lambda^{2/p} theta(1) - n pi_p|
    int n_min = 3;             // below this the seed is checked for positivity
    int max_iterations = 100;
    Variant seed_variant = Variant::printed;
    int polish_substeps = 10;  // stretched sub-steps used to polish a node
    double node_tol = 1e-10;   // on the phase residual at a node
};

struct NodalData {
    int n = 0;
    double lambda_n = 0.0;
    Eigen::VectorXd nodal_points;    // x_1 < ... < x_{n-1}
    Eigen::VectorXd nodal_lengths;   // l_0 .. l_{n-1}, with x_0 = 0, x_n = 1
    Eigen::VectorXd phase_residuals; // lambda^{2/p} theta(x_j) - j pi_p, x-form check
    double mismatch = 0.0;           // boundary mismatch at lambda_n
    int steps_per_quarter = 0;

    // x_j for 0 <= j <= n
    double point(int j) const;
};

// lambda^{2/p} theta(1; lambda) - n pi_p with the resolution fixed by
// steps_per_quarter; when steps_per_quarter <= 0 the ladder of
// integrate_phase picks it.
double boundary_mismatch(const SpTable& table, const CoefficientPair& pair, double lambda, int n,
                         int steps_per_quarter = 0, const PhaseOptions& opts = {});

// lambda^2 > sup|q| + 2 lambda sup|r|, which keeps theta' > 0.
bool phase_is_monotone(const CoefficientPair& pair, double lambda);

struct EigenSolve {
    double lambda = 0.0;
    double mismatch = 0.0;
    int steps_per_quarter = 0;
    int evaluations = 0;
};

// Safeguarded secant on boundary_mismatch, seeded by the eigenvalue
// expansion. Throws Error(no_bracket) when no sign change turns up in
// [seed/4, 4 seed], Error(domain) when n < n_min and the seed fails the
// positivity check, Error(out_of_range) for n < 1.
EigenSolve solve_eigenvalue(const SpTable& table, const CoefficientPair& pair, int n,
                            const SpectrumOptions& opts = {});

double find_eigenvalue(const SpTable& table, const CoefficientPair& pair, int n,
                       const SpectrumOptions& opts = {});

// Nodes x_j with lambda^{2/p} theta(x_j) = j pi_p, j = 1..n-1, bracketed on
// the dense trajectory and polished by re-integrating from the bracket's
// left end. Throws Error(missing_node) when the trajectory does not hold
// exactly n - 1 interior nodes.
NodalData extract_nodes(const SpTable& table, const CoefficientPair& pair,
                        const PhaseSolution& phase, int n, const SpectrumOptions& opts = {});

// Eigenvalue, dense phase at lambda_n and nodal data in one go.
struct Mode {
    NodalData nodal;
    PhaseSolution phase;
};
Mode solve_mode(const SpTable& table, const CoefficientPair& pair, int n,
                const SpectrumOptions& opts = {});

// int_0^{x_end} f(t) |S_p(lambda^{2/p} theta(t))|^p dt for f = q and f = r
// along a computed trajectory (Gauss points inside every step).
struct WeightedIntegrals {
    double q = 0.0;
    double r = 0.0;
};
WeightedIntegrals weighted_integrals(const SpTable& table, const CoefficientPair& pair,
                                     const PhaseSolution& phase, double x_end);

}  // namespace pnodal

#endif
