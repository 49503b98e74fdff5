#include "pnodal/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pnodal/error.hpp"

namespace pnodal {
namespace {

constexpr int kPoints = 20;

struct Rule {
    std::array<double, kPoints> nodes{};
    std::array<double, kPoints> weights{};
};

// Legendre roots by Newton iteration from the Chebyshev-like initial guess.
Rule make_rule()
{
    Rule rule;
    const int n = kPoints;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

const Rule& rule()
{
    static const Rule r = make_rule();
    return r;
}

double refine(const std::function<double(double)>& f, double a, double b, double whole,
              const QuadratureOptions& opts, int depth)
{
    const double mid = 0.5 * (a + b);
    const double left = gauss_legendre(f, a, mid);
    const double right = gauss_legendre(f, mid, b);
    const double sum = left + right;
    if (std::abs(sum - whole) <= std::max(opts.abs_tol, opts.rel_tol * std::abs(sum))) return sum;
    if (depth >= opts.max_depth) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "subinterval [" << a << ", " << b << "] did not converge (estimate " << sum
            << ", change " << std::abs(sum - whole) << ")";
        throw Error(ErrorKind::quadrature, msg.str());
    }
    return refine(f, a, mid, left, opts, depth + 1) + refine(f, mid, b, right, opts, depth + 1);
}

}  // namespace

double gauss_legendre(const std::function<double(double)>& f, double a, double b)
{
    const Rule& r = rule();
    const double half = 0.5 * (b - a);
    const double centre = 0.5 * (a + b);
    double sum = 0.0;
    for (int i = 0; i < kPoints; ++i) sum += r.weights[i] * f(centre + half * r.nodes[i]);
    return half * sum;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureOptions& opts)
{
    if (a == b) return 0.0;
    return refine(f, a, b, gauss_legendre(f, a, b), opts, 0);
}

}  // namespace pnodal
