#include "pnodal/gentrig.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pnodal/error.hpp"
#include "pnodal/quadrature.hpp"

namespace pnodal {
namespace {

void require_exponent(double p)
{
    if (!(p > 1.0) || !std::isfinite(p)) {
        std::ostringstream msg;
        msg << "exponent p must be finite and > 1, got " << p;
        throw Error(ErrorKind::domain, msg.str());
    }
}

// Integrand of sp_inverse in the variable u = (1 - t)^{(p-1)/p}; bounded and
// smooth at u = 0, where the original integrand blows up.
double substituted_integrand(double p, double u)
{
    const double g = p / (p - 1.0);
    if (u <= 0.0) return g * std::pow(p, -1.0 / p);
    const double ug = std::pow(u, g);
    const double one_minus_tp = -std::expm1(p * std::log1p(-ug));
    return g * std::pow(u, g - 1.0) * std::pow(one_minus_tp, -1.0 / p);
}

double integrate_u(double p, double u_lo, double u_hi)
{
    QuadratureOptions opts;
    opts.abs_tol = 1e-16;
    opts.rel_tol = 1e-15;
    return integrate_adaptive([p](double u) { return substituted_integrand(p, u); }, u_lo, u_hi,
                              opts);
}

double hermite(double x0, double x1, double y0, double y1, double d0, double d1, double x)
{
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double omt = 1.0 - t;
    return y0 * (1.0 + 2.0 * t) * omt * omt + d0 * h * t * omt * omt + y1 * t * t * (3.0 - 2.0 * t)
           - d1 * h * t * t * omt;
}

// Fritsch-Carlson limiter over nodes [first, last].
void limit_slopes(const std::vector<double>& x, const std::vector<double>& y,
                  std::vector<double>& d, std::size_t first, std::size_t last)
{
    for (std::size_t k = first; k < last; ++k) {
        const double delta = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
        if (delta == 0.0) {
            d[k] = 0.0;
            d[k + 1] = 0.0;
            continue;
        }
        double alpha = d[k] / delta;
        double beta = d[k + 1] / delta;
        if (alpha < 0.0) d[k] = alpha = 0.0;
        if (beta < 0.0) d[k + 1] = beta = 0.0;
        const double r2 = alpha * alpha + beta * beta;
        if (r2 > 9.0) {
            const double tau = 3.0 / std::sqrt(r2);
            d[k] = tau * alpha * delta;
            d[k + 1] = tau * beta * delta;
        }
    }
}

struct Reduced {
    double z;       // quarter-period phase in [0, pi_p/2]
    double sign_s;  // sign of S_p
    double sign_ds; // sign of S_p'
};

Reduced reduce(const PParameters& pp, double phase)
{
    const double period = 2.0 * pp.pi_p;
    double y = std::fmod(phase, period);
    if (y < 0.0) y += period;
    if (y >= period) y = 0.0;
    double sign_s = 1.0;
    if (y >= pp.pi_p) {
        y -= pp.pi_p;
        sign_s = -1.0;
    }
    double sign_ds = sign_s;
    if (y > pp.quarter) {
        y = pp.pi_p - y;
        sign_ds = -sign_s;
    }
    return {std::clamp(y, 0.0, pp.quarter), sign_s, sign_ds};
}

}  // namespace

double compute_pi_p(double p)
{
    require_exponent(p);
    return 2.0 * std::numbers::pi / (p * std::sin(std::numbers::pi / p));
}

double pi_p_by_quadrature(double p)
{
    require_exponent(p);
    return 2.0 * integrate_u(p, 0.0, 1.0);
}

double sp_inverse(double p, double s)
{
    require_exponent(p);
    if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorKind::domain, "sp_inverse needs s in [0, 1]");
    const double u = std::pow(1.0 - s, (p - 1.0) / p);
    return integrate_u(p, u, 1.0);
}

PParameters make_parameters(double p, int table_size)
{
    PParameters pp;
    pp.p = p;
    pp.pi_p = compute_pi_p(p);
    pp.quarter = 0.5 * pp.pi_p;
    pp.table_size = table_size;
    return pp;
}

double signed_pow(double w, double e)
{
    if (w == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(w), e), w);
}

SpTable build_table(const PParameters& params)
{
    require_exponent(params.p);
    if (params.table_size < 256) {
        std::ostringstream msg;
        msg << "table_size must be >= 256, got " << params.table_size;
        throw Error(ErrorKind::domain, msg.str());
    }
    const double p = params.p;
    const std::size_t n = static_cast<std::size_t>(params.table_size);

    // s(tau) = 1 - (1 - tau^a)^b. Exponent a clusters nodes at 0 for p < 3,
    // where S_p carries a |phase|^{p+1} term; b clusters them at s = 1.
    const double a = std::max(1.0, 4.0 / (p + 1.0));
    const double b = 4.0 * p / (2.0 * p - 1.0);

    SpTable table;
    table.params_ = params;
    table.built_by_ = "gauss-legendre-20/adaptive, t=1-u^(p/(p-1)) substitution";
    table.nodes_.resize(n + 1);
    table.values_.resize(n + 1);
    table.flux_.resize(n + 1);
    table.s_slope_.resize(n + 1);
    table.flux_slope_.resize(n + 1);

    std::vector<double> w(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double tau = static_cast<double>(i) / static_cast<double>(n);
        const double log_w = b * std::log1p(-std::pow(tau, a));
        w[i] = (i == n) ? 0.0 : std::exp(log_w);
        table.values_[i] = (i == n) ? 1.0 : -std::expm1(log_w);
    }

    const double u_exp = (p - 1.0) / p;
    double psi = 0.0;
    double u_prev = 1.0;
    table.nodes_[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const double u = std::pow(w[i], u_exp);
        try {
            psi += integrate_u(p, u, u_prev);
        } catch (const Error& e) {
            std::ostringstream msg;
            msg << "table node " << i << " (s in [" << table.values_[i - 1] << ", "
                << table.values_[i] << "]): " << e.what();
            throw Error(ErrorKind::quadrature, msg.str());
        }
        table.nodes_[i] = psi;
        u_prev = u;
    }
    if (std::abs(table.nodes_[n] - params.quarter) > 1e-10) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "final node " << table.nodes_[n] << " misses pi_p/2 = " << params.quarter;
        throw Error(ErrorKind::quadrature, msg.str());
    }
    table.nodes_[n] = params.quarter;

    table.split_ = n - 1;
    for (std::size_t i = 0; i <= n; ++i) {
        const double s = table.values_[i];
        // 1 - s^p from the complement w = 1 - s, free of cancellation near s = 1
        const double one_minus_sp = (i == 0) ? 1.0 : -std::expm1(p * std::log1p(-w[i]));
        const double ds = std::pow(one_minus_sp, 1.0 / p);
        table.flux_[i] = std::pow(ds, p - 1.0);
        table.s_slope_[i] = ds;
        table.flux_slope_[i] = -(p - 1.0) * std::pow(s, p - 1.0);
        if (table.split_ == n - 1 && i > 0 && std::pow(s, p) >= 0.5) table.split_ = i;
    }
    limit_slopes(table.nodes_, table.values_, table.s_slope_, 0, table.split_);
    limit_slopes(table.nodes_, table.flux_, table.flux_slope_, table.split_, n);
    return table;
}

SpTable::QuarterValue SpTable::quarter_value(double z) const
{
    const double p = params_.p;
    const std::size_t last = nodes_.size() - 1;
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), z);
    std::size_t k = (it == nodes_.begin()) ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
    k = std::min(k, last - 1);

    QuarterValue out{};
    if (k < split_) {
        const double s = std::clamp(hermite(nodes_[k], nodes_[k + 1], values_[k], values_[k + 1],
                                            s_slope_[k], s_slope_[k + 1], z),
                                    0.0, 1.0);
        out.s = s;
        out.s_pow = std::pow(s, p);
        out.ds = std::pow(1.0 - out.s_pow, 1.0 / p);
    } else {
        const double v = std::clamp(hermite(nodes_[k], nodes_[k + 1], flux_[k], flux_[k + 1],
                                            flux_slope_[k], flux_slope_[k + 1], z),
                                    0.0, 1.0);
        out.ds = std::pow(v, 1.0 / (p - 1.0));
        out.s_pow = 1.0 - std::pow(v, p / (p - 1.0));
        out.s = std::pow(out.s_pow, 1.0 / p);
    }
    return out;
}

SpPair sp_pair(const SpTable& table, double phase)
{
    const Reduced r = reduce(table.params(), phase);
    const auto q = table.quarter_value(r.z);
    return {r.sign_s * q.s, r.sign_ds * q.ds};
}

double sp(const SpTable& table, double phase) { return sp_pair(table, phase).s; }

double sp_prime(const SpTable& table, double phase) { return sp_pair(table, phase).ds; }

double sp_abs_pow(const SpTable& table, double phase)
{
    return table.quarter_value(reduce(table.params(), phase).z).s_pow;
}

double g_product(const SpTable& table, double phase)
{
    const SpPair v = sp_pair(table, phase);
    return v.s * signed_pow(v.ds, table.params().p - 1.0);
}

}  // namespace pnodal
