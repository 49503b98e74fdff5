#ifndef PNODAL_QUADRATURE_HPP
#define PNODAL_QUADRATURE_HPP

#include <functional>

namespace pnodal {

struct QuadratureOptions {
    double abs_tol = 1e-15;
    double rel_tol = 1e-14;
    int max_depth = 40;
};

// 20-point Gauss-Legendre rule on [a, b].
double gauss_legendre(const std::function<double(double)>& f, double a, double b);

// Recursive bisection of Gauss-Legendre panels; a panel is accepted when the
// 20-point value and the sum over its two halves agree to tolerance. Throws
// Error(quadrature) naming the offending subinterval when max_depth is hit.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureOptions& opts = {});

}  // namespace pnodal

#endif
