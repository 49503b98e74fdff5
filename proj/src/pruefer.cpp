#include "pnodal/pruefer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "pnodal/error.hpp"

namespace pnodal {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr int max_steps_per_quarter = 1 << 16;

void require_lambda(double lambda)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        std::ostringstream msg;
        msg << "eigen-parameter lambda must be positive, got " << lambda;
        throw Error(ErrorKind::domain, msg.str());
    }
}

// Stretching of one quarter period: sigma(0) = 0, sigma(1) = 1 and
// sigma'(0) = sigma'(1) = 0, so steps cluster at both ends of the quarter.
double stretch(double u) { return u - std::sin(two_pi * u) / two_pi; }
double stretch_rate(double u) { return 1.0 - std::cos(two_pi * u); }

double unstretch(double y)
{
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    double u = std::min(0.5, std::cbrt(6.0 * y / (two_pi * two_pi)));
    for (int it = 0; it < 200; ++it) {
        const double f = stretch(u) - y;
        if (f > 0.0) hi = u; else lo = u;
        const double d = stretch_rate(u);
        double next = (d > 0.0) ? u - f / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - u) <= 1e-17) return next;
        u = next;
    }
    return u;
}

// Position on the phase axis in units of quarter periods.
struct QuarterPoint {
    long m;    // quarter index
    double u;  // stretched coordinate inside the quarter, [0, 1]
};

QuarterPoint locate(double psi, double quarter)
{
    const double t = psi / quarter;
    long m = static_cast<long>(std::floor(t));
    double y = t - static_cast<double>(m);
    if (y >= 1.0) {
        ++m;
        y = 0.0;
    }
    return {m, unstretch(y)};
}

// x = psi / k + chi along the phase. With A = q/lambda^2 + 2 r/lambda and
// W = |S_p(psi)|^p the perturbation obeys
//   d chi / d u = (Q sigma'(u) / k) * A W / (1 - A W).
class PhaseMap {
public:
    PhaseMap(const SpTable& table, const CoefficientPair& pair, double lambda)
        : table_(table), pair_(pair), lambda_(lambda), quarter_(table.params().quarter),
          k_(std::pow(lambda, 2.0 / table.params().p)), inv_l2_(1.0 / (lambda * lambda)),
          two_inv_l_(2.0 / lambda), trivial_(pair.q.is_zero() && pair.r.is_zero())
    {
    }

    double k() const { return k_; }
    double quarter() const { return quarter_; }
    bool trivial() const { return trivial_; }

    double psi(long m, double u) const { return quarter_ * (static_cast<double>(m) + stretch(u)); }

    double weight(long m, double u) const
    {
        const double z = (m % 2 == 0) ? quarter_ * stretch(u) : quarter_ * stretch(1.0 - u);
        return table_.quarter_value(z).s_pow;
    }

    double coefficient(double x) const
    {
        x = std::clamp(x, 0.0, 1.0);
        return pair_.q(x) * inv_l2_ + pair_.r(x) * two_inv_l_;
    }

    double dchi(long m, double u, double chi) const
    {
        const double x = psi(m, u) / k_ + chi;
        const double drop = coefficient(x) * weight(m, u);
        if (!(drop < 1.0)) {
            std::ostringstream msg;
            msg << "theta' = " << 1.0 - drop << " <= 0 at x = " << x << " for lambda = " << lambda_
                << " (lambda below the admissible range)";
            throw Error(ErrorKind::non_monotone_phase, msg.str());
        }
        return quarter_ * stretch_rate(u) / k_ * drop / (1.0 - drop);
    }

    // RK4 step of length du inside quarter m, starting at u.
    double step(long m, double u, double chi, double du) const
    {
        if (trivial_) return chi;
        const double half = 0.5 * du;
        const double k1 = dchi(m, u, chi);
        const double k2 = dchi(m, u + half, chi + half * k1);
        const double k3 = dchi(m, u + half, chi + half * k2);
        const double k4 = dchi(m, u + du, chi + du * k3);
        return chi + du / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    double rate_x(long m, double u, double chi) const
    {
        const double x = psi(m, u) / k_ + chi;
        const double drop = trivial_ ? 0.0 : coefficient(x) * weight(m, u);
        return quarter_ * stretch_rate(u) / (k_ * (1.0 - drop));
    }

private:
    const SpTable& table_;
    const CoefficientPair& pair_;
    double lambda_;
    double quarter_;
    double k_;
    double inv_l2_;
    double two_inv_l_;
    bool trivial_;
};

// Solves x(u0 + s) = 1 for s in (0, du] with one partial RK4 step from u0.
double final_partial_step(const PhaseMap& map, long m, double u0, double chi0, double du)
{
    auto x_at = [&](double s) { return map.psi(m, u0 + s) / map.k() + map.step(m, u0, chi0, s); };
    double lo = 0.0, hi = du;
    double s = du;
    for (int it = 0; it < 100; ++it) {
        const double f = x_at(s) - 1.0;
        if (f == 0.0) return s;
        if (f > 0.0) hi = s; else lo = s;
        const double rate = map.rate_x(m, u0 + s, map.step(m, u0, chi0, s));
        double next = s - f / rate;
        if (!(next > lo && next < hi) || rate <= 0.0) next = 0.5 * (lo + hi);
        if (std::abs(next - s) <= 4.0 * std::numeric_limits<double>::epsilon() * du) return next;
        s = next;
    }
    return s;
}

// Runs the stepping from x = 0 to x = 1 and returns theta(1). The sink sees
// every accepted step as (x, theta).
template <class Sink>
double run(const PhaseMap& map, int steps_per_quarter, Sink&& sink)
{
    const double du = 1.0 / steps_per_quarter;
    const double k = map.k();
    if (map.trivial()) {
        // theta = x; keep the stepping pattern for the dense output
        sink(0.0, 0.0);
        for (long i = 1;; ++i) {
            const long m = i / steps_per_quarter;
            const double u = static_cast<double>(i % steps_per_quarter) * du;
            const double x = map.psi(m, u) / k;
            if (x >= 1.0) break;
            sink(x, x);
        }
        sink(1.0, 1.0);
        return 1.0;
    }
    double chi = 0.0;
    sink(0.0, 0.0);
    for (long i = 0;; ++i) {
        const long m = i / steps_per_quarter;
        const double u = static_cast<double>(i % steps_per_quarter) * du;
        const double chi_next = map.step(m, u, chi, du);
        const double psi_next = map.psi(m, u + du);
        const double x_next = psi_next / k + chi_next;
        if (x_next >= 1.0) {
            const double s = final_partial_step(map, m, u, chi, du);
            const double theta_end = map.psi(m, u + s) / k;
            sink(1.0, theta_end);
            return theta_end;
        }
        chi = chi_next;
        sink(x_next, psi_next / k);
    }
}

}  // namespace

double PhaseSolution::wavenumber() const { return std::pow(lambda, 2.0 / params.p); }

double phase_rhs(const SpTable& table, const CoefficientPair& pair, double lambda, double x,
                 double theta)
{
    require_lambda(lambda);
    const double k = std::pow(lambda, 2.0 / table.params().p);
    const double a = pair.q(x) / (lambda * lambda) + 2.0 * pair.r(x) / lambda;
    return 1.0 - a * sp_abs_pow(table, k * theta);
}

int initial_steps_per_quarter(const SpTable& table, const PhaseOptions& opts)
{
    return std::max(4, static_cast<int>(std::ceil(2.0 * table.params().quarter / opts.max_phase_step)));
}

double integrate_phase_end(const SpTable& table, const CoefficientPair& pair, double lambda,
                           int steps_per_quarter)
{
    require_lambda(lambda);
    const PhaseMap map(table, pair, lambda);
    return run(map, steps_per_quarter, [](double, double) {});
}

PhaseSolution integrate_phase(const SpTable& table, const CoefficientPair& pair, double lambda,
                              const PhaseOptions& opts)
{
    require_lambda(lambda);
    const PhaseMap map(table, pair, lambda);

    auto solve = [&](int m) {
        const double mean_step = map.quarter() / (m * map.k());
        if (mean_step < 1e-12) {
            std::ostringstream msg;
            msg << "x-step " << mean_step << " below 1e-12 for lambda = " << lambda;
            throw Error(ErrorKind::step_underflow, msg.str());
        }
        std::vector<double> xs, thetas;
        xs.reserve(static_cast<std::size_t>(4.0 * m * map.k() / table.params().pi_p) + 8);
        thetas.reserve(xs.capacity());
        run(map, m, [&](double x, double th) {
            xs.push_back(x);
            thetas.push_back(th);
        });
        PhaseSolution sol;
        sol.lambda = lambda;
        sol.params = table.params();
        sol.x = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
        sol.theta = Eigen::Map<Eigen::VectorXd>(thetas.data(), static_cast<Eigen::Index>(thetas.size()));
        sol.steps_per_quarter = m;
        sol.step_size = mean_step;
        sol.tol = std::numeric_limits<double>::quiet_NaN();
        return sol;
    };

    if (opts.fixed_steps_per_quarter > 0) {
        PhaseSolution sol = solve(opts.fixed_steps_per_quarter);
        if (opts.verify) {
            const double fine = run(map, 2 * opts.fixed_steps_per_quarter, [](double, double) {});
            sol.tol = std::abs(sol.theta[sol.theta.size() - 1] - fine);
        }
        return sol;
    }

    int m = initial_steps_per_quarter(table, opts);
    double coarse = run(map, m, [](double, double) {});
    for (;;) {
        PhaseSolution sol = solve(2 * m);
        const double end = sol.theta[sol.theta.size() - 1];
        sol.tol = std::abs(coarse - end);
        // below ~32 ulp the differences are round-off, not truncation
        const double floor = 32.0 * std::numeric_limits<double>::epsilon() * std::abs(end);
        if (sol.tol <= std::max(opts.ode_tol, floor) || map.trivial()) return sol;
        if (m >= max_steps_per_quarter) {
            std::ostringstream msg;
            msg << "step halving did not reach ode_tol = " << opts.ode_tol << " (last change " << sol.tol
                << ") for lambda = " << lambda;
            throw Error(ErrorKind::ode_tolerance, msg.str());
        }
        m *= 2;
        coarse = sol.theta[sol.theta.size() - 1];
    }
}

double advance_to_phase(const SpTable& table, const CoefficientPair& pair, double lambda,
                        double psi_from, double x_from, double psi_to, int substeps)
{
    require_lambda(lambda);
    if (psi_to < psi_from) throw Error(ErrorKind::domain, "advance_to_phase needs psi_to >= psi_from");
    const PhaseMap map(table, pair, lambda);
    double chi = x_from - psi_from / map.k();
    QuarterPoint a = locate(psi_from, map.quarter());
    const QuarterPoint b = locate(psi_to, map.quarter());
    while (a.m < b.m || (a.m == b.m && a.u < b.u)) {
        const double u_end = (a.m < b.m) ? 1.0 : b.u;
        const double du = (u_end - a.u) / substeps;
        double u = a.u;
        for (int i = 0; i < substeps; ++i, u += du) chi = map.step(a.m, u, chi, du);
        if (a.m == b.m) break;
        a = {a.m + 1, 0.0};
    }
    return psi_to / map.k() + chi;
}

double advance_phase(const SpTable& table, const CoefficientPair& pair, double lambda, double x0,
                     double theta0, double x1, int steps)
{
    double theta = theta0;
    const double h = (x1 - x0) / steps;
    for (int i = 0; i < steps; ++i) {
        const double x = x0 + i * h;
        const double k1 = phase_rhs(table, pair, lambda, x, theta);
        const double k2 = phase_rhs(table, pair, lambda, std::min(x + 0.5 * h, 1.0), theta + 0.5 * h * k1);
        const double k3 = phase_rhs(table, pair, lambda, std::min(x + 0.5 * h, 1.0), theta + 0.5 * h * k2);
        const double k4 = phase_rhs(table, pair, lambda, std::min(x + h, 1.0), theta + h * k3);
        theta += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return theta;
}

}  // namespace pnodal
