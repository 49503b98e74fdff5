#include "pnodal/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "pnodal/error.hpp"

namespace pnodal {

double NodalData::point(int j) const
{
    if (j < 0 || j > n) throw Error(ErrorKind::out_of_range, "nodal point index out of range");
    if (j == 0) return 0.0;
    if (j == n) return 1.0;
    return nodal_points[j - 1];
}

double boundary_mismatch(const SpTable& table, const CoefficientPair& pair, double lambda, int n,
                         int steps_per_quarter, const PhaseOptions& opts)
{
    const double k = std::pow(lambda, 2.0 / table.params().p);
    double theta1;
    if (steps_per_quarter > 0) {
        theta1 = integrate_phase_end(table, pair, lambda, steps_per_quarter);
    } else {
        const PhaseSolution sol = integrate_phase(table, pair, lambda, opts);
        theta1 = sol.theta[sol.theta.size() - 1];
    }
    return k * theta1 - n * table.params().pi_p;
}

bool phase_is_monotone(const CoefficientPair& pair, double lambda)
{
    return lambda * lambda > pair.q.sup_abs() + 2.0 * lambda * pair.r.sup_abs();
}

namespace {

struct Sample {
    double lambda;
    double f;  // mismatch; -inf where the phase was not monotone (lambda too small)
};

}  // namespace

EigenSolve solve_eigenvalue(const SpTable& table, const CoefficientPair& pair, int n,
                            const SpectrumOptions& opts)
{
    if (n < 1) throw Error(ErrorKind::out_of_range, "eigenvalue index must be >= 1");
    const PParameters& pp = table.params();
    const double seed = eigenvalue_prediction(pp, pair, n, opts.seed_variant);
    if (!(seed > 0.0) || !std::isfinite(seed)) {
        std::ostringstream msg;
        msg << "eigenvalue seed for n = " << n << " is not positive (" << seed << ")";
        throw Error(ErrorKind::domain, msg.str());
    }
    if (n < opts.n_min && !phase_is_monotone(pair, seed)) {
        std::ostringstream msg;
        msg << "n = " << n << " is below n_min = " << opts.n_min
            << " and lambda^2 > sup|q| + 2 lambda sup|r| fails at the seed " << seed;
        throw Error(ErrorKind::domain, msg.str());
    }

    EigenSolve out;
    // resolution chosen once, at the seed
    {
        const PhaseSolution sol = integrate_phase(table, pair, seed, opts.phase);
        out.steps_per_quarter = sol.steps_per_quarter;
    }
    const int m = out.steps_per_quarter;
    auto eval = [&](double lambda) -> Sample {
        ++out.evaluations;
        try {
            return {lambda, boundary_mismatch(table, pair, lambda, n, m)};
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::non_monotone_phase) throw;
            return {lambda, -std::numeric_limits<double>::infinity()};
        }
    };

    const double lo_guard = 0.25 * seed, hi_guard = 4.0 * seed;
    Sample cur = eval(seed);
    if (std::abs(cur.f) < opts.root_tol) {
        out.lambda = seed;
        out.mismatch = cur.f;
        return out;
    }
    if (!std::isfinite(cur.f)) {
        std::ostringstream msg;
        msg << "phase is not monotone at the seed lambda = " << seed << " for n = " << n;
        throw Error(ErrorKind::non_monotone_phase, msg.str());
    }

    // d(mismatch)/d(lambda) ~ (2/p) n pi_p / lambda
    const double slope0 = 2.0 / pp.p * n * pp.pi_p / seed;
    std::optional<Sample> below, above;
    auto record = [&](const Sample& s) {
        if (s.f < 0.0 && (!below || s.lambda > below->lambda)) below = s;
        if (s.f > 0.0 && (!above || s.lambda < above->lambda)) above = s;
    };
    record(cur);

    // bracket expansion: Newton-sized steps, overshooting and doubling
    double step = -cur.f / slope0 * 1.1;
    Sample probe = cur;
    while (!(below && above)) {
        const double min_step = 16.0 * std::numeric_limits<double>::epsilon() * probe.lambda;
        if (std::abs(step) < min_step) step = std::copysign(min_step, step);
        double next = probe.lambda + step;
        // never jump past the guard window; approach its edge geometrically
        if (next <= lo_guard) next = 0.5 * (probe.lambda + lo_guard);
        if (next >= hi_guard) next = 0.5 * (probe.lambda + hi_guard);
        const bool at_edge = next - lo_guard <= 1e-9 * seed || hi_guard - next <= 1e-9 * seed;
        if (at_edge || out.evaluations > opts.max_iterations) {
            std::ostringstream msg;
            msg << "no sign change of the boundary mismatch for n = " << n << " in [" << lo_guard << ", "
                << hi_guard << "] around the seed " << seed;
            throw Error(ErrorKind::no_bracket, msg.str());
        }
        probe = eval(next);
        record(probe);
        if (std::abs(probe.f) < opts.root_tol) {
            out.lambda = probe.lambda;
            out.mismatch = probe.f;
            return out;
        }
        step *= 2.0;
    }

    // safeguarded secant inside [below, above]
    Sample prev = *below, last = *above;
    double best_abs = std::min(std::abs(below->f), std::abs(above->f));
    while (out.evaluations <= opts.max_iterations) {
        const double a = below->lambda, b = above->lambda;
        double next;
        if (std::isfinite(prev.f) && std::isfinite(last.f) && last.f != prev.f)
            next = last.lambda - last.f * (last.lambda - prev.lambda) / (last.f - prev.f);
        else
            next = 0.5 * (a + b);
        if (!(next > a && next < b)) next = 0.5 * (a + b);
        const Sample s = eval(next);
        record(s);
        if (std::abs(s.f) < opts.root_tol) {
            out.lambda = s.lambda;
            out.mismatch = s.f;
            return out;
        }
        // force a bisection when the secant stalls
        if (!(std::abs(s.f) < 0.5 * best_abs)) {
            const Sample mid = eval(0.5 * (below->lambda + above->lambda));
            record(mid);
            if (std::abs(mid.f) < opts.root_tol) {
                out.lambda = mid.lambda;
                out.mismatch = mid.f;
                return out;
            }
            prev = s;
            last = mid;
        } else {
            prev = last;
            last = s;
        }
        best_abs = std::min(best_abs, std::abs(last.f));
        if (above->lambda - below->lambda <= 4.0 * std::numeric_limits<double>::epsilon() * above->lambda) {
            const Sample& closer = (std::abs(below->f) < std::abs(above->f)) ? *below : *above;
            std::ostringstream msg;
            msg << "bracket for n = " << n << " collapsed at lambda = " << closer.lambda
                << " with mismatch " << closer.f << " > root_tol = " << opts.root_tol;
            throw Error(ErrorKind::ode_tolerance, msg.str());
        }
    }
    std::ostringstream msg;
    msg << "eigenvalue search for n = " << n << " did not converge in " << opts.max_iterations
        << " evaluations";
    throw Error(ErrorKind::no_bracket, msg.str());
}

double find_eigenvalue(const SpTable& table, const CoefficientPair& pair, int n,
                       const SpectrumOptions& opts)
{
    return solve_eigenvalue(table, pair, n, opts).lambda;
}

NodalData extract_nodes(const SpTable& table, const CoefficientPair& pair,
                        const PhaseSolution& phase, int n, const SpectrumOptions& opts)
{
    if (n < 1) throw Error(ErrorKind::out_of_range, "eigenvalue index must be >= 1");
    const double pi_p = table.params().pi_p;
    const double k = phase.wavenumber();
    const double lambda = phase.lambda;
    const Eigen::Index last = phase.x.size() - 1;
    const double end_phase = k * phase.theta[last];
    if (!(std::abs(end_phase - n * pi_p) < 0.5 * pi_p)) {
        std::ostringstream msg;
        msg << "trajectory ends at phase " << end_phase / pi_p << " pi_p; expected n = " << n
            << " (lambda = " << lambda << " is not the n-th eigenvalue)";
        throw Error(ErrorKind::missing_node, msg.str());
    }

    NodalData out;
    out.n = n;
    out.lambda_n = lambda;
    out.nodal_points.resize(n - 1);
    out.phase_residuals.resize(n - 1);
    out.mismatch = end_phase - n * pi_p;
    out.steps_per_quarter = phase.steps_per_quarter;

    Eigen::Index i = 0;
    for (int j = 1; j < n; ++j) {
        const double target = j * pi_p;
        while (i < last && k * phase.theta[i + 1] <= target) ++i;
        if (i >= last) {
            std::ostringstream msg;
            msg << "no bracket for nodal point j = " << j << " of n = " << n;
            throw Error(ErrorKind::missing_node, msg.str());
        }
        const double psi_from = std::min(k * phase.theta[i], target);
        const double x = advance_to_phase(table, pair, lambda, psi_from, phase.x[i], target,
                                          opts.polish_substeps);
        // independent check in the x-form of the phase equation
        const double theta_x = advance_phase(table, pair, lambda, phase.x[i], phase.theta[i], x,
                                             opts.polish_substeps);
        const double residual = k * theta_x - target;
        if (!(std::abs(residual) < opts.node_tol)) {
            std::ostringstream msg;
            msg << "phase residual " << residual << " at nodal point j = " << j << " of n = " << n
                << " exceeds " << opts.node_tol;
            throw Error(ErrorKind::missing_node, msg.str());
        }
        if (j > 1 && !(x > out.nodal_points[j - 2])) {
            throw Error(ErrorKind::missing_node, "nodal points are not increasing");
        }
        out.nodal_points[j - 1] = x;
        out.phase_residuals[j - 1] = residual;
    }

    out.nodal_lengths.resize(n);
    for (int j = 0; j < n; ++j) out.nodal_lengths[j] = out.point(j + 1) - out.point(j);
    const double total = out.nodal_lengths.sum();
    if (std::abs(total - 1.0) > 1e-10) {
        std::ostringstream msg;
        msg << "nodal lengths sum to " << total;
        throw Error(ErrorKind::missing_node, msg.str());
    }
    return out;
}

Mode solve_mode(const SpTable& table, const CoefficientPair& pair, int n, const SpectrumOptions& opts)
{
    const EigenSolve eig = solve_eigenvalue(table, pair, n, opts);
    PhaseOptions po = opts.phase;
    po.fixed_steps_per_quarter = eig.steps_per_quarter;
    po.verify = false;
    Mode mode;
    mode.phase = integrate_phase(table, pair, eig.lambda, po);
    mode.nodal = extract_nodes(table, pair, mode.phase, n, opts);
    return mode;
}

WeightedIntegrals weighted_integrals(const SpTable& table, const CoefficientPair& pair,
                                     const PhaseSolution& phase, double x_end)
{
    static constexpr double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                     0.8611363115940526};
    static constexpr double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                     0.3478548451374538};
    const double k = phase.wavenumber();
    const double lambda = phase.lambda;
    WeightedIntegrals acc;
    for (Eigen::Index i = 0; i + 1 < phase.x.size(); ++i) {
        const double x0 = phase.x[i];
        if (x0 >= x_end) break;
        const double x1 = std::min(phase.x[i + 1], x_end);
        const double H = phase.x[i + 1] - x0;
        if (H <= 0.0) continue;
        const double t0 = phase.theta[i], t1 = phase.theta[i + 1];
        const double d0 = phase_rhs(table, pair, lambda, x0, t0) * H;
        const double d1 = phase_rhs(table, pair, lambda, phase.x[i + 1], t1) * H;
        const double h = x1 - x0;
        for (int g = 0; g < 4; ++g) {
            const double x = x0 + 0.5 * h * (1.0 + gx[g]);
            const double s = (x - x0) / H;
            // cubic Hermite for theta on the step
            const double s2 = s * s, s3 = s2 * s;
            const double th = (2 * s3 - 3 * s2 + 1) * t0 + (s3 - 2 * s2 + s) * d0 + (-2 * s3 + 3 * s2) * t1 +
                              (s3 - s2) * d1;
            const double w = sp_abs_pow(table, k * th) * 0.5 * h * gw[g];
            acc.q += pair.q(x) * w;
            acc.r += pair.r(x) * w;
        }
    }
    return acc;
}

}  // namespace pnodal
