#ifndef PNODAL_ASYMPTOTICS_HPP
#define PNODAL_ASYMPTOTICS_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

#include "pnodal/gentrig.hpp"
#include "pnodal/potentials.hpp"

namespace pnodal {

struct NodalData;

// Which reading of the closed-form expansions to evaluate.
//  printed          - the formulas exactly as typeset: r-term of the
//                     eigenvalue expansion divided by (n pi_p)^{(p-2)/p},
//                     first order only.
//  proof_consistent - what the integrated phase equation actually gives:
//                     r-term over (n pi_p)^{(p-2)/2}, plus the second-order
//                     r^2 terms that are of the same size as the q-term.
// At p = 2 the first-order terms of both coincide.
enum class Variant { printed, proof_consistent };

std::string to_string(Variant v);
// Accepts "printed", "proof-consistent" and "proof_consistent".
Variant variant_from_string(const std::string& s);

// Pieces of the predicted lambda_n^{2/p}; value() is their sum.
struct EigenvalueTerms {
    double leading = 0.0;  // n pi_p
    double q_term = 0.0;
    double r_term = 0.0;
    double second_order = 0.0;  // zero for Variant::printed
    double value() const { return leading + q_term + r_term + second_order; }
};

EigenvalueTerms eigenvalue_terms(const PParameters& params, const CoefficientPair& pair, int n,
                                 Variant variant = Variant::printed);

// Predicted lambda_n^{2/p}.
double eigenvalue_expansion(const PParameters& params, const CoefficientPair& pair, int n,
                            Variant variant = Variant::printed);

// Predicted lambda_n itself, (lambda_n^{2/p})^{p/2}.
double eigenvalue_prediction(const PParameters& params, const CoefficientPair& pair, int n,
                             Variant variant = Variant::printed);

struct NodalPointTerms {
    double leading = 0.0;        // j / n
    double q_global = 0.0;       // from the int_0^1 q correction of 1/lambda^{2/p}
    double r_global = 0.0;
    double q_local = 0.0;        // (1/lambda^2) int_0^{x_j} q S_p^p, averaged
    double r_local = 0.0;        // (2/lambda) int_0^{x_j} r S_p^p, averaged
    double higher = 0.0;         // proof_consistent: the rest of 1/lambda^{2/p}
    double value() const { return leading + q_global + r_global + q_local + r_local + higher; }
};

// The trailing weighted integrals use the mean 1/p of |S_p|^p and the upper
// limit j/n.
NodalPointTerms nodal_point_terms(const PParameters& params, const CoefficientPair& pair, int n,
                                  int j, Variant variant = Variant::printed);
double nodal_point_expansion(const PParameters& params, const CoefficientPair& pair, int n, int j,
                             Variant variant = Variant::printed);

enum class LambdaSource { numeric, predicted };

struct NodalLengthTerms {
    double leading = 0.0;  // pi_p / lambda^{2/p}
    double r_term = 0.0;   // (2 / (p lambda)) int_I r
    double q_term = 0.0;   // (1 / (p lambda^2)) int_I q
    double value() const { return leading + r_term + q_term; }
};

// Local form on I = [x_j, x_{j+1}] taken from `nodal`. With
// LambdaSource::predicted lambda comes from eigenvalue_prediction(variant).
NodalLengthTerms nodal_length_terms(const PParameters& params, const CoefficientPair& pair,
                                    const NodalData& nodal, int j,
                                    LambdaSource source = LambdaSource::numeric,
                                    Variant variant = Variant::printed);
double nodal_length_expansion(const PParameters& params, const CoefficientPair& pair,
                              const NodalData& nodal, int j,
                              LambdaSource source = LambdaSource::numeric,
                              Variant variant = Variant::printed);

// Predicted-versus-computed over a range of indices, with least-squares
// slopes of log|residual| against log n and against log lambda_n.
struct ExpansionReport {
    std::vector<int> n_range;
    Eigen::VectorXd lambda;     // lambda_n used as the second abscissa
    Eigen::VectorXd predicted;
    Eigen::VectorXd computed;
    Eigen::VectorXd residual;   // predicted - computed
    double decay_exponent_fit = 0.0;         // slope vs log n
    double decay_exponent_fit_lambda = 0.0;  // slope vs log lambda_n
    double noise_floor = 0.0;
    bool degenerate = false;  // every |residual| at or below the noise floor
    std::string note;
};

// Throws Error(out_of_range) for fewer than 4 indices or mismatched sizes.
ExpansionReport residual_report(std::vector<int> n_range, Eigen::VectorXd lambda,
                                Eigen::VectorXd predicted, Eigen::VectorXd computed,
                                double noise_floor = 0.0);

// Slope of the least-squares line through (x_i, y_i).
double fit_slope(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace pnodal

#endif
