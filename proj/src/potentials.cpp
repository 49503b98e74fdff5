#include "pnodal/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "pnodal/error.hpp"
#include "pnodal/quadrature.hpp"

namespace pnodal {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double bump_value(const Potential::Bump& b, double x)
{
    const double xi = (x - b.centre) / b.width;
    if (std::abs(xi) >= 1.0) return 0.0;
    return b.amplitude * std::exp(1.0 - 1.0 / (1.0 - xi * xi));
}

double evaluate(const Potential::Form& form, double x)
{
    return std::visit(
        overloaded{
            [](const Potential::Zero&) { return 0.0; },
            [](const Potential::Constant& c) { return c.value; },
            [x](const Potential::Polynomial& p) {
                double acc = 0.0;
                for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) acc = acc * x + *it;
                return acc;
            },
            [x](const Potential::Cosine& c) { return c.amplitude * std::cos(two_pi * c.k * x); },
            [x](const Potential::Bump& b) { return bump_value(b, x); },
            [x](const Potential::Sampled& s) {
                const auto n = s.x.size();
                const double* begin = s.x.data();
                auto k = static_cast<Eigen::Index>(std::upper_bound(begin, begin + n, x) - begin) - 1;
                k = std::clamp<Eigen::Index>(k, 0, n - 2);
                const double t = (x - s.x[k]) / (s.x[k + 1] - s.x[k]);
                return (1.0 - t) * s.y[k] + t * s.y[k + 1];
            },
        },
        form);
}

// Integral of the linear interpolant from 0 to x.
double sampled_primitive(const Potential::Sampled& s, double x)
{
    double acc = 0.0;
    for (Eigen::Index k = 0; k + 1 < s.x.size(); ++k) {
        const double x0 = s.x[k];
        const double x1 = s.x[k + 1];
        if (x <= x0) break;
        const double hi = std::min(x, x1);
        const double y_hi = s.y[k] + (s.y[k + 1] - s.y[k]) * (hi - x0) / (x1 - x0);
        acc += 0.5 * (s.y[k] + y_hi) * (hi - x0);
    }
    return acc;
}

void require_interval(double a, double b)
{
    if (!(a >= 0.0 && b <= 1.0 && a <= b)) {
        std::ostringstream msg;
        msg << "integration bounds must satisfy 0 <= a <= b <= 1, got [" << a << ", " << b << "]";
        throw Error(ErrorKind::domain, msg.str());
    }
}

}  // namespace

Potential::Potential(Form form) : form_(std::move(form))
{
    if (const auto* b = std::get_if<Bump>(&form_); b && !(b->width > 0.0))
        throw Error(ErrorKind::domain, "bump width must be positive");
    sup_abs_ = std::visit(
        overloaded{
            [](const Zero&) { return 0.0; },
            [](const Constant& c) { return std::abs(c.value); },
            [](const Cosine& c) { return std::abs(c.amplitude); },
            [](const Bump& b) { return std::abs(b.amplitude); },
            [](const Sampled& s) { return s.y.cwiseAbs().maxCoeff(); },
            [this](const Polynomial&) {
                double m = 0.0;
                for (int i = 0; i <= 8192; ++i) m = std::max(m, std::abs(evaluate(form_, i / 8192.0)));
                return m;
            },
        },
        form_);
}

Potential Potential::sampled(Eigen::VectorXd x, Eigen::VectorXd y)
{
    if (x.size() != y.size()) throw Error(ErrorKind::domain, "sampled potential: x and y differ in length");
    if (x.size() < 2) throw Error(ErrorKind::domain, "sampled potential needs at least 2 points");
    if (!x.allFinite() || !y.allFinite()) throw Error(ErrorKind::domain, "sampled potential has non-finite values");
    for (Eigen::Index i = 1; i < x.size(); ++i) {
        if (!(x[i] > x[i - 1])) {
            std::ostringstream msg;
            msg << "sampled potential: x must be strictly increasing (row " << i + 1 << ")";
            throw Error(ErrorKind::domain, msg.str());
        }
    }
    if (std::abs(x[0]) > 1e-12 || std::abs(x[x.size() - 1] - 1.0) > 1e-12)
        throw Error(ErrorKind::domain, "sampled potential: x must span [0, 1]");
    x[0] = 0.0;
    x[x.size() - 1] = 1.0;
    return Potential(Sampled{std::move(x), std::move(y)});
}

Potential Potential::from_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open potential file '" + path + "'");
    std::string line;
    std::vector<double> xs, ys;
    int line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (header) {
            header = false;
            continue;
        }
        const auto comma = line.find(',');
        try {
            if (comma == std::string::npos) throw std::invalid_argument("missing comma");
            std::size_t used = 0;
            const double x = std::stod(line.substr(0, comma), &used);
            const double y = std::stod(line.substr(comma + 1));
            xs.push_back(x);
            ys.push_back(y);
        } catch (const std::exception&) {
            std::ostringstream msg;
            msg << path << ":" << line_no << ": expected 'x,value', got '" << line << "'";
            throw Error(ErrorKind::io, msg.str());
        }
    }
    return sampled(Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size())),
                   Eigen::Map<Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size())));
}

double Potential::operator()(double x) const
{
    if (!(x >= 0.0 && x <= 1.0)) {
        std::ostringstream msg;
        msg << "potential evaluated at x = " << x << " outside [0, 1]";
        throw Error(ErrorKind::domain, msg.str());
    }
    return evaluate(form_, x);
}

double Potential::integral(double a, double b) const
{
    require_interval(a, b);
    return std::visit(
        overloaded{
            [](const Zero&) { return 0.0; },
            [a, b](const Constant& c) { return c.value * (b - a); },
            [a, b](const Polynomial& p) {
                double fa = 0.0, fb = 0.0;
                for (std::size_t i = p.coeffs.size(); i-- > 0;) {
                    const double c = p.coeffs[i] / static_cast<double>(i + 1);
                    fa = fa * a + c;
                    fb = fb * b + c;
                }
                return fb * b - fa * a;
            },
            [a, b](const Cosine& c) {
                if (c.k == 0.0) return c.amplitude * (b - a);
                const double w = two_pi * c.k;
                return c.amplitude * (std::sin(w * b) - std::sin(w * a)) / w;
            },
            [a, b](const Bump& bp) {
                const double lo = std::max(a, bp.centre - bp.width);
                const double hi = std::min(b, bp.centre + bp.width);
                if (lo >= hi) return 0.0;
                return integrate_adaptive([&bp](double x) { return bump_value(bp, x); }, lo, hi);
            },
            [a, b](const Sampled& s) { return sampled_primitive(s, b) - sampled_primitive(s, a); },
        },
        form_);
}

double Potential::integral_of_square() const
{
    if (is_zero()) return 0.0;
    if (const auto* s = std::get_if<Sampled>(&form_)) {
        double acc = 0.0;
        for (Eigen::Index k = 0; k + 1 < s->x.size(); ++k) {
            const double y0 = s->y[k];
            const double y1 = s->y[k + 1];
            acc += (s->x[k + 1] - s->x[k]) * (y0 * y0 + y0 * y1 + y1 * y1) / 3.0;
        }
        return acc;
    }
    return integrate_adaptive(
        [this](double x) {
            const double v = evaluate(form_, x);
            return v * v;
        },
        0.0, 1.0, {1e-15, 1e-13, 30});
}

std::string Potential::describe() const
{
    std::ostringstream out;
    out.precision(12);
    std::visit(overloaded{
                   [&](const Zero&) { out << "zero"; },
                   [&](const Constant& c) { out << "constant(" << c.value << ")"; },
                   [&](const Polynomial& p) {
                       out << "polynomial(";
                       for (std::size_t i = 0; i < p.coeffs.size(); ++i) out << (i ? "," : "") << p.coeffs[i];
                       out << ")";
                   },
                   [&](const Cosine& c) { out << "cosine(a=" << c.amplitude << ",k=" << c.k << ")"; },
                   [&](const Bump& b) {
                       out << "bump(a=" << b.amplitude << ",centre=" << b.centre << ",width=" << b.width << ")";
                   },
                   [&](const Sampled& s) { out << "sampled(" << s.x.size() << " points)"; },
               },
               form_);
    return out.str();
}

Potential Potential::resampled(int points) const
{
    if (points < 2) throw Error(ErrorKind::domain, "resampling needs at least 2 points");
    Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(points, 0.0, 1.0);
    Eigen::VectorXd y = x.unaryExpr([this](double v) { return evaluate(form_, v); });
    return sampled(std::move(x), std::move(y));
}

CoefficientPair make_pair(Potential q, Potential r)
{
    CoefficientPair pair{std::move(q), std::move(r)};
    pair.integral_q = pair.q.integral(0.0, 1.0);
    pair.integral_r = pair.r.integral(0.0, 1.0);
    pair.integral_r2 = pair.r.integral_of_square();
    return pair;
}

double eval(const CoefficientPair& pair, Which which, double x)
{
    return which == Which::q ? pair.q(x) : pair.r(x);
}

double integrate(const CoefficientPair& pair, Which which, double a, double b)
{
    return which == Which::q ? pair.q.integral(a, b) : pair.r.integral(a, b);
}

}  // namespace pnodal
