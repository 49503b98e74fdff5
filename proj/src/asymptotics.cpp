#include "pnodal/asymptotics.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "pnodal/error.hpp"
#include "pnodal/quadrature.hpp"
#include "pnodal/spectrum.hpp"

namespace pnodal {

std::string to_string(Variant v)
{
    return v == Variant::printed ? "printed" : "proof-consistent";
}

Variant variant_from_string(const std::string& s)
{
    if (s == "printed") return Variant::printed;
    if (s == "proof-consistent" || s == "proof_consistent") return Variant::proof_consistent;
    throw Error(ErrorKind::config, "unknown expansion variant '" + s + "' (printed | proof-consistent)");
}

EigenvalueTerms eigenvalue_terms(const PParameters& params, const CoefficientPair& pair, int n,
                                 Variant variant)
{
    if (n < 1) throw Error(ErrorKind::out_of_range, "eigenvalue index must be >= 1");
    const double p = params.p;
    const double N = n * params.pi_p;
    EigenvalueTerms t;
    t.leading = N;
    t.q_term = pair.integral_q / (p * std::pow(N, p - 1.0));
    if (pair.r.is_zero()) return t;
    const double R = pair.integral_r;
    if (variant == Variant::printed) {
        t.r_term = 2.0 * R / (p * std::pow(N, (p - 2.0) / p));
    } else {
        t.r_term = 2.0 * R / (p * std::pow(N, (p - 2.0) / 2.0));
        // (p-1)/(2p^2) int A^2 + (int A)^2/p^2 with A ~ 2r/lambda, and the
        // shift of lambda inside the first-order r-term
        t.second_order = (2.0 * (p - 1.0) / (p * p) * pair.integral_r2 + 4.0 * R * R / (p * p) -
                          2.0 * R * R / p) /
                         std::pow(N, p - 1.0);
    }
    return t;
}

double eigenvalue_expansion(const PParameters& params, const CoefficientPair& pair, int n,
                            Variant variant)
{
    return eigenvalue_terms(params, pair, n, variant).value();
}

double eigenvalue_prediction(const PParameters& params, const CoefficientPair& pair, int n,
                             Variant variant)
{
    const double k = eigenvalue_expansion(params, pair, n, variant);
    if (!(k > 0.0)) return k;
    return std::pow(k, params.p / 2.0);
}

NodalPointTerms nodal_point_terms(const PParameters& params, const CoefficientPair& pair, int n,
                                  int j, Variant variant)
{
    if (n < 2 || j < 1 || j > n - 1) {
        std::ostringstream msg;
        msg << "nodal point index j = " << j << " outside 1.." << n - 1;
        throw Error(ErrorKind::out_of_range, msg.str());
    }
    const double p = params.p;
    const double pi_p = params.pi_p;
    const double N = n * pi_p;
    const double x = static_cast<double>(j) / n;
    const double Qx = pair.q.integral(0.0, x);
    const double Rx = pair.r.is_zero() ? 0.0 : pair.r.integral(0.0, x);
    NodalPointTerms t;
    t.leading = x;
    if (variant == Variant::printed) {
        t.q_global = j * pair.integral_q / (p * std::pow(n, p + 1.0) * std::pow(pi_p, p));
        if (!pair.r.is_zero()) {
            const double e = (2.0 * p - 2.0) / p;
            t.r_global = 2.0 * j * pair.integral_r / (p * std::pow(n, e) * std::pow(pi_p, e));
            t.r_local = 2.0 / std::pow(N, p / 2.0) * Rx / p;
        }
        t.q_local = 1.0 / std::pow(N, p) * Qx / p;
        return t;
    }
    // j pi_p / lambda^{2/p} + int_0^{x_j} A |S_p|^p with the predicted lambda
    const EigenvalueTerms ev = eigenvalue_terms(params, pair, n, Variant::proof_consistent);
    const double k = ev.value();
    const double lambda = std::pow(k, p / 2.0);
    t.q_global = -j * pi_p * ev.q_term / (N * N);
    t.r_global = -j * pi_p * ev.r_term / (N * N);
    t.higher = j * pi_p / k - (x + t.q_global + t.r_global);
    t.q_local = Qx / (p * lambda * lambda);
    if (!pair.r.is_zero()) {
        const double r2 = integrate_adaptive([&](double s) { const double v = pair.r(s); return v * v; }, 0.0, x,
                                             QuadratureOptions{1e-13, 1e-12, 30});
        t.r_local = 2.0 * Rx / (p * lambda) + 2.0 * (p - 1.0) / (p * p) * r2 / (lambda * lambda);
    }
    return t;
}

double nodal_point_expansion(const PParameters& params, const CoefficientPair& pair, int n, int j,
                             Variant variant)
{
    return nodal_point_terms(params, pair, n, j, variant).value();
}

NodalLengthTerms nodal_length_terms(const PParameters& params, const CoefficientPair& pair,
                                    const NodalData& nodal, int j, LambdaSource source,
                                    Variant variant)
{
    if (j < 0 || j > nodal.n - 1) {
        std::ostringstream msg;
        msg << "nodal length index j = " << j << " outside 0.." << nodal.n - 1;
        throw Error(ErrorKind::out_of_range, msg.str());
    }
    const double p = params.p;
    const double lambda = source == LambdaSource::numeric
                              ? nodal.lambda_n
                              : eigenvalue_prediction(params, pair, nodal.n, variant);
    const double a = nodal.point(j), b = nodal.point(j + 1);
    NodalLengthTerms t;
    t.leading = params.pi_p / std::pow(lambda, 2.0 / p);
    t.r_term = pair.r.is_zero() ? 0.0 : 2.0 / (p * lambda) * pair.r.integral(a, b);
    t.q_term = 1.0 / (p * lambda * lambda) * pair.q.integral(a, b);
    return t;
}

double nodal_length_expansion(const PParameters& params, const CoefficientPair& pair,
                              const NodalData& nodal, int j, LambdaSource source, Variant variant)
{
    return nodal_length_terms(params, pair, nodal, j, source, variant).value();
}

double fit_slope(const Eigen::VectorXd& x, const Eigen::VectorXd& y)
{
    Eigen::MatrixXd A(x.size(), 2);
    A.col(0).setOnes();
    A.col(1) = x;
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
    return c[1];
}

ExpansionReport residual_report(std::vector<int> n_range, Eigen::VectorXd lambda,
                                Eigen::VectorXd predicted, Eigen::VectorXd computed,
                                double noise_floor)
{
    const auto m = static_cast<Eigen::Index>(n_range.size());
    if (m < 4) throw Error(ErrorKind::out_of_range, "decay fit needs at least 4 indices");
    if (lambda.size() != m || predicted.size() != m || computed.size() != m)
        throw Error(ErrorKind::out_of_range, "residual report arrays differ in length");

    ExpansionReport rep;
    rep.n_range = std::move(n_range);
    rep.lambda = std::move(lambda);
    rep.predicted = std::move(predicted);
    rep.computed = std::move(computed);
    rep.residual = rep.predicted - rep.computed;
    rep.noise_floor = noise_floor;
    if (!rep.residual.allFinite()) throw Error(ErrorKind::domain, "non-finite residual");

    std::vector<double> ln, ll, lr;
    for (Eigen::Index i = 0; i < m; ++i) {
        const double r = std::abs(rep.residual[i]);
        if (r > noise_floor && r > 0.0) {
            ln.push_back(std::log(static_cast<double>(rep.n_range[i])));
            ll.push_back(std::log(rep.lambda[i]));
            lr.push_back(std::log(r));
        }
    }
    if (lr.size() < 2) {
        rep.degenerate = true;
        rep.decay_exponent_fit = rep.decay_exponent_fit_lambda = std::nan("");
        rep.note = "degenerate: at noise floor";
        return rep;
    }
    const auto k = static_cast<Eigen::Index>(lr.size());
    const Eigen::VectorXd y = Eigen::Map<Eigen::VectorXd>(lr.data(), k);
    rep.decay_exponent_fit = fit_slope(Eigen::Map<Eigen::VectorXd>(ln.data(), k), y);
    rep.decay_exponent_fit_lambda = fit_slope(Eigen::Map<Eigen::VectorXd>(ll.data(), k), y);
    if (k < m) rep.note = "points at the noise floor left out of the fit";
    return rep;
}

}  // namespace pnodal
