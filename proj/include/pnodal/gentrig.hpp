#ifndef PNODAL_GENTRIG_HPP
#define PNODAL_GENTRIG_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace pnodal {

// Exponent p > 1 of the p-Laplacian together with its half-period constant.
struct PParameters {
    double p = 2.0;
    double pi_p = 0.0;    // 2 pi / (p sin(pi/p))
    double quarter = 0.0; // pi_p / 2
    int table_size = 4096;
};

// Closed form 2 pi / (p sin(pi/p)). Throws Error(domain) unless p > 1.
double compute_pi_p(double p);

// 2 * int_0^1 (1 - t^p)^{-1/p} dt by adaptive Gauss-Legendre after the
// substitution t = 1 - u^{p/(p-1)}, which removes the endpoint singularity.
double pi_p_by_quadrature(double p);

// x(s) = int_0^s (1 - t^p)^{-1/p} dt for 0 <= s <= 1; the inverse of S_p on
// the quarter period.
double sp_inverse(double p, double s);

PParameters make_parameters(double p, int table_size = 4096);

// w^{(e)} := |w|^{e-1} w, the sign-preserving power used for u'^{(p-1)}.
double signed_pow(double w, double e);

// Quarter-period table of the generalized sine. Nodes are the images of a
// graded s-grid under sp_inverse. Below the node where S_p^p = 1/2 the table
// interpolates S_p itself; above it interpolates the flux S_p'^{p-1}, which
// stays smooth where S_p' -> 0. Both use cubic Hermite interpolation with the
// exact node slopes, passed through a Fritsch-Carlson limiter.
class SpTable {
public:
    const PParameters& params() const { return params_; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }
    const std::string& built_by() const { return built_by_; }

    // S_p and S_p' on the reduced quarter phase z in [0, pi_p/2].
    struct QuarterValue {
        double s;      // S_p(z) in [0, 1]
        double ds;     // S_p'(z) in [0, 1]
        double s_pow;  // S_p(z)^p, computed without cancellation
    };
    QuarterValue quarter_value(double z) const;

private:
    friend SpTable build_table(const PParameters& params);

    PParameters params_;
    std::vector<double> nodes_;
    std::vector<double> values_;   // S_p at nodes
    std::vector<double> flux_;     // S_p'^{p-1} at nodes
    std::vector<double> s_slope_;
    std::vector<double> flux_slope_;
    std::size_t split_ = 0;        // first node with S_p^p >= 1/2
    std::string built_by_;
};

// Throws Error(domain) for table_size < 256 and Error(quadrature) when the
// final node misses pi_p/2 by more than 1e-10.
SpTable build_table(const PParameters& params);

double sp(const SpTable& table, double phase);
double sp_prime(const SpTable& table, double phase);

// |S_p(phase)|^p, the weight appearing in the phase equation.
double sp_abs_pow(const SpTable& table, double phase);

// S_p * S_p'^{(p-1)}
double g_product(const SpTable& table, double phase);

struct SpPair {
    double s;
    double ds;
};
SpPair sp_pair(const SpTable& table, double phase);

}  // namespace pnodal

#endif
