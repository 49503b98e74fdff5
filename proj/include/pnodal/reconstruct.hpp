#ifndef PNODAL_RECONSTRUCT_HPP
#define PNODAL_RECONSTRUCT_HPP

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pnodal/asymptotics.hpp"
#include "pnodal/gentrig.hpp"
#include "pnodal/potentials.hpp"
#include "pnodal/spectrum.hpp"

namespace pnodal {

struct ReconstructionResult {
    int n = 0;
    double lambda_n = 0.0;
    Variant variant = Variant::printed;
    Eigen::VectorXd grid;
    Eigen::VectorXd q_hat;
    Eigen::VectorXd q_true;   // empty unless error_metrics has been applied
    Eigen::VectorXi j_map;    // j_n(x) = max{j : x_j <= x}, x_0 = 0
    double sup_error = 0.0;
    double l2_error = 0.0;
    double noise_floor = 0.0; // p lambda_n^2 * root_tol
};

// j_n(x) for every grid point.
Eigen::VectorXi nodal_index_map(const NodalData& nodal, const Eigen::VectorXd& grid);

// Finite-n value of the limit formula for q.
//  printed:          p lambda^2 (lambda^{2/p} l_j / pi_p - 2 r(x) / (p lambda) - 1)
//  proof_consistent: p lambda^2 (1 - 2 rbar_j / (p lambda) - pi_p / (lambda^{2/p} l_j))
//                    - 2 (p-1)/p r(x)^2
// where rbar_j is the mean of r over the nodal interval. The printed form
// keeps an O(1) bias 2(p+1)/p r^2 and a pointwise r(x) - rbar_j term that
// the factor p lambda^2 blows up, so it converges only for r = 0.
// Throws Error(domain) for an empty grid or points outside (0, 1).
ReconstructionResult reconstruct_q(const PParameters& params, const NodalData& nodal,
                                   const Potential& r, const Eigen::VectorXd& grid,
                                   Variant variant = Variant::printed, double root_tol = 1e-10);

// Leading-order rearrangement of the nodal-length expansion:
// r_hat = (p lambda / 2)(lambda^{2/p} l_j / pi_p - 1). Returned in q_hat.
ReconstructionResult reconstruct_r_leading(const PParameters& params, const NodalData& nodal,
                                           const Eigen::VectorXd& grid, double root_tol = 1e-10);

// Sup and trapezoid L2 norms of q_hat - truth on the grid; also fills
// result.q_true and the two error fields.
std::pair<double, double> error_metrics(ReconstructionResult& result, const Potential& truth);

// Uniform grid of `size` midpoints (i + 1/2)/size.
Eigen::VectorXd midpoint_grid(int size);

// First-order Richardson over a doubling ladder n, 2n, 4n, ...:
// out[i] = 2 q_hat(2n) - q_hat(n) for consecutive pairs sharing the grid.
std::vector<Eigen::VectorXd> extrapolate_ladder(const std::vector<ReconstructionResult>& ladder);

}  // namespace pnodal

#endif
