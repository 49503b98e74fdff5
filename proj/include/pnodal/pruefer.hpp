#ifndef PNODAL_PRUEFER_HPP
#define PNODAL_PRUEFER_HPP

#include <Eigen/Core>

#include "pnodal/gentrig.hpp"
#include "pnodal/potentials.hpp"

namespace pnodal {

struct PhaseOptions {
    // Upper bound on the phase lambda^{2/p} theta advanced per step.
    double max_phase_step = 0.1;
    // Step-halving tolerance on theta(1); the ladder refines until it holds.
    double ode_tol = 1e-12;
    // When positive, integrate with exactly this many steps per quarter
    // period and skip the ladder.
    int fixed_steps_per_quarter = 0;
    // Record |theta_h(1) - theta_{h/2}(1)| in PhaseSolution::tol.
    bool verify = true;
};

// Dense trajectory of the Pruefer phase theta(x; lambda) on [0, 1].
//
// The integrator advances x as a function of the phase psi = lambda^{2/p}
// theta. Each quarter period of S_p is covered by the same number of steps
// on the stretched variable u, psi = Q (m + u - sin(2 pi u) / (2 pi)), so
// the points where |S_p|^p loses smoothness (psi a multiple of Q) are always
// step boundaries and the Runge-Kutta stages never straddle them.
struct PhaseSolution {
    double lambda = 0.0;
    PParameters params;
    Eigen::VectorXd x;      // 0 = x_0 < ... < x_N = 1
    Eigen::VectorXd theta;  // theta(x_i); theta(0) = 0
    int steps_per_quarter = 0;
    double step_size = 0.0; // mean x-step, (pi_p / 2) / (steps_per_quarter * lambda^{2/p})
    double tol = 0.0;       // step-halving change of theta(1); NaN when not verified

    double wavenumber() const;  // lambda^{2/p}
    double end_phase() const { return wavenumber() * theta[theta.size() - 1]; }
};

// theta' = 1 - (q(x)/lambda^2 + 2 r(x)/lambda) |S_p(lambda^{2/p} theta)|^p.
// Throws Error(domain) for lambda <= 0.
double phase_rhs(const SpTable& table, const CoefficientPair& pair, double lambda, double x,
                 double theta);

// Classical fourth-order Runge-Kutta with dense output at every step.
// Throws Error(non_monotone_phase) if theta' <= 0 at any stage and
// Error(step_underflow) if the ladder drives the x-step below 1e-12.
PhaseSolution integrate_phase(const SpTable& table, const CoefficientPair& pair, double lambda,
                              const PhaseOptions& opts = {});

// theta(1) only, with a fixed number of steps per quarter period.
double integrate_phase_end(const SpTable& table, const CoefficientPair& pair, double lambda,
                           int steps_per_quarter);

// Starting resolution of the ladder: ceil(2 Q / max_phase_step), since the
// stretched steps advance at most 2 Q / M in phase.
int initial_steps_per_quarter(const SpTable& table, const PhaseOptions& opts);

// Moves along the phase from (psi_from, x_from) to psi_to using `substeps`
// stretched sub-steps per quarter period crossed; returns x(psi_to).
double advance_to_phase(const SpTable& table, const CoefficientPair& pair, double lambda,
                        double psi_from, double x_from, double psi_to, int substeps);

// x-form counterpart: integrates theta' from (x0, theta0) over `steps`
// uniform steps to x1 and returns theta(x1). Used to cross-check nodes.
double advance_phase(const SpTable& table, const CoefficientPair& pair, double lambda, double x0,
                     double theta0, double x1, int steps);

}  // namespace pnodal

#endif
