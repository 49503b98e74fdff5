#ifndef PNODAL_POTENTIALS_HPP
#define PNODAL_POTENTIALS_HPP

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace pnodal {

// A coefficient function on [0, 1]: either a closed-form catalog entry or a
// sampled uniform-or-not grid with piecewise-linear interpolation.
class Potential {
public:
    struct Zero {};
    struct Constant {
        double value;
    };
    struct Polynomial {
        std::vector<double> coeffs;  // c0 + c1 x + c2 x^2 + ...
    };
    struct Cosine {
        double amplitude;
        double k;  // amplitude * cos(2 pi k x)
    };
    struct Bump {
        double amplitude;  // peak value, reached at the centre
        double centre;
        double width;      // half-width of the support
    };
    struct Sampled {
        Eigen::VectorXd x;
        Eigen::VectorXd y;
    };
    using Form = std::variant<Zero, Constant, Polynomial, Cosine, Bump, Sampled>;

    Potential() : Potential(Zero{}) {}
    explicit Potential(Form form);

    static Potential zero() { return Potential(Zero{}); }
    static Potential constant(double c) { return Potential(Constant{c}); }
    static Potential polynomial(std::vector<double> coeffs) { return Potential(Polynomial{std::move(coeffs)}); }
    static Potential cosine(double amplitude, double k) { return Potential(Cosine{amplitude, k}); }
    static Potential bump(double amplitude, double centre, double width) { return Potential(Bump{amplitude, centre, width}); }
    // x strictly increasing from 0 to 1, at least two finite samples.
    static Potential sampled(Eigen::VectorXd x, Eigen::VectorXd y);
    // Two-column CSV "x,value" with a header row.
    static Potential from_csv(const std::string& path);

    // Throws Error(domain) outside [0, 1].
    double operator()(double x) const;
    // Exact for catalog entries with a closed-form antiderivative and for
    // sampled data (trapezoid on the linear interpolant); adaptive
    // Gauss-Legendre for the bump. Throws Error(domain) unless 0 <= a <= b <= 1.
    double integral(double a, double b) const;

    // int_0^1 f^2; exact for sampled data.
    double integral_of_square() const;

    double sup_abs() const { return sup_abs_; }
    bool is_zero() const { return std::holds_alternative<Zero>(form_); }
    const Form& form() const { return form_; }
    std::string describe() const;

    // Samples on a uniform grid of `points` values including both ends.
    Potential resampled(int points) const;

private:
    Form form_;
    double sup_abs_ = 0.0;
};

enum class Which { q, r };

// The potentials q (quadratic in lambda) and r (linear in lambda), with their
// integrals over [0, 1] computed once.
struct CoefficientPair {
    Potential q;
    Potential r;
    double integral_q = 0.0;
    double integral_r = 0.0;
    double integral_r2 = 0.0;  // int_0^1 r^2, used by the second-order expansions
};

CoefficientPair make_pair(Potential q, Potential r);

double eval(const CoefficientPair& pair, Which which, double x);
double integrate(const CoefficientPair& pair, Which which, double a, double b);

}  // namespace pnodal

#endif
