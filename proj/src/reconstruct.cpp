#include "pnodal/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pnodal/error.hpp"

namespace pnodal {
namespace {

void check_grid(const Eigen::VectorXd& grid)
{
    if (grid.size() == 0) throw Error(ErrorKind::domain, "empty reconstruction grid");
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0 && grid[i] < 1.0)) {
            std::ostringstream msg;
            msg << "grid point " << grid[i] << " outside (0, 1)";
            throw Error(ErrorKind::domain, msg.str());
        }
    }
}

ReconstructionResult start(const PParameters& params, const NodalData& nodal,
                           const Eigen::VectorXd& grid, double root_tol)
{
    check_grid(grid);
    ReconstructionResult res;
    res.n = nodal.n;
    res.lambda_n = nodal.lambda_n;
    res.grid = grid;
    res.j_map = nodal_index_map(nodal, grid);
    res.q_hat.resize(grid.size());
    res.noise_floor = params.p * nodal.lambda_n * nodal.lambda_n * root_tol;
    return res;
}

}  // namespace

Eigen::VectorXi nodal_index_map(const NodalData& nodal, const Eigen::VectorXd& grid)
{
    Eigen::VectorXi out(grid.size());
    const double* first = nodal.nodal_points.data();
    const double* last = first + nodal.nodal_points.size();
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        // count of x_j (j >= 1) with x_j <= x
        out[i] = static_cast<int>(std::upper_bound(first, last, grid[i]) - first);
    }
    return out;
}

ReconstructionResult reconstruct_q(const PParameters& params, const NodalData& nodal,
                                   const Potential& r, const Eigen::VectorXd& grid, Variant variant,
                                   double root_tol)
{
    ReconstructionResult res = start(params, nodal, grid, root_tol);
    res.variant = variant;
    const double p = params.p;
    const double lambda = nodal.lambda_n;
    const double k = std::pow(lambda, 2.0 / p);
    const double scale = p * lambda * lambda;
    std::vector<double> rbar;
    if (variant == Variant::proof_consistent) {
        rbar.resize(nodal.n);
        for (int j = 0; j < nodal.n; ++j)
            rbar[j] = r.is_zero() ? 0.0 : r.integral(nodal.point(j), nodal.point(j + 1)) / nodal.nodal_lengths[j];
    }
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const int j = res.j_map[i];
        const double l = nodal.nodal_lengths[j];
        const double rx = r(grid[i]);
        if (variant == Variant::printed) {
            res.q_hat[i] = scale * (k * l / params.pi_p - 2.0 * rx / (p * lambda) - 1.0);
        } else {
            res.q_hat[i] = scale * (1.0 - 2.0 * rbar[j] / (p * lambda) - params.pi_p / (k * l)) -
                           2.0 * (p - 1.0) / p * rx * rx;
        }
    }
    return res;
}

ReconstructionResult reconstruct_r_leading(const PParameters& params, const NodalData& nodal,
                                           const Eigen::VectorXd& grid, double root_tol)
{
    ReconstructionResult res = start(params, nodal, grid, root_tol);
    const double p = params.p;
    const double lambda = nodal.lambda_n;
    const double k = std::pow(lambda, 2.0 / p);
    res.noise_floor = 0.5 * p * lambda * root_tol;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const double l = nodal.nodal_lengths[res.j_map[i]];
        res.q_hat[i] = 0.5 * p * lambda * (k * l / params.pi_p - 1.0);
    }
    return res;
}

std::pair<double, double> error_metrics(ReconstructionResult& result, const Potential& truth)
{
    const Eigen::Index m = result.grid.size();
    if (m == 0) throw Error(ErrorKind::domain, "empty reconstruction grid");
    result.q_true.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) result.q_true[i] = truth(result.grid[i]);
    const Eigen::VectorXd err = (result.q_hat - result.q_true).cwiseAbs();
    result.sup_error = err.maxCoeff();
    if (m == 1) {
        result.l2_error = err[0];
    } else {
        double acc = 0.0;
        for (Eigen::Index i = 0; i + 1 < m; ++i)
            acc += 0.5 * (result.grid[i + 1] - result.grid[i]) * (err[i] * err[i] + err[i + 1] * err[i + 1]);
        result.l2_error = std::sqrt(acc);
    }
    return {result.sup_error, result.l2_error};
}

Eigen::VectorXd midpoint_grid(int size)
{
    if (size < 1) throw Error(ErrorKind::domain, "grid size must be positive");
    Eigen::VectorXd g(size);
    for (int i = 0; i < size; ++i) g[i] = (i + 0.5) / size;
    return g;
}

std::vector<Eigen::VectorXd> extrapolate_ladder(const std::vector<ReconstructionResult>& ladder)
{
    std::vector<Eigen::VectorXd> out;
    for (std::size_t i = 0; i + 1 < ladder.size(); ++i) {
        const auto& a = ladder[i];
        const auto& b = ladder[i + 1];
        if (b.n != 2 * a.n || a.grid.size() != b.grid.size() || a.grid != b.grid)
            throw Error(ErrorKind::domain, "extrapolation needs a doubling n-ladder on a shared grid");
        out.push_back(2.0 * b.q_hat - a.q_hat);
    }
    return out;
}

}  // namespace pnodal
