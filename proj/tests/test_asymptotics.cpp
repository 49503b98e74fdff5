#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "pnodal/error.hpp"
#include "pnodal/spectrum.hpp"

using namespace pnodal;

namespace {

const SpTable& table_for(double p)
{
    static std::map<double, SpTable> cache;
    auto it = cache.find(p);
    if (it == cache.end()) it = cache.emplace(p, build_table(make_parameters(p))).first;
    return it->second;
}

const Variant both[] = {Variant::printed, Variant::proof_consistent};

}  // namespace

TEST(EigenExpansion, ZeroCoefficientsGiveLeadingTerm)
{
    const CoefficientPair z = make_pair(Potential::zero(), Potential::zero());
    for (double p : {1.5, 2.0, 3.0})
        for (Variant v : both)
            for (int n : {1, 7, 100})
                EXPECT_EQ(eigenvalue_expansion(table_for(p).params(), z, n, v), n * table_for(p).params().pi_p);
}

TEST(EigenExpansion, ClassicalAtPTwo)
{
    const PParameters& pp = table_for(2.0).params();
    const CoefficientPair one = make_pair(Potential::constant(1.0), Potential::zero());
    EXPECT_NEAR(eigenvalue_expansion(pp, one, 10), 10 * std::numbers::pi + 1.0 / (20 * std::numbers::pi), 1e-13);
    // O(n^-3) agreement with the constant-shift closed form
    for (int n : {10, 20, 40}) {
        const double exact = std::sqrt(std::pow(n * std::numbers::pi, 2) + 1.0);
        EXPECT_LT(std::abs(eigenvalue_expansion(pp, one, n) - exact), 0.01 / std::pow(n, 3.0));
    }
}

TEST(EigenExpansion, ConstantPencilSecondOrder)
{
    // lambda = c2 + sqrt(c2^2 + c1 + (n pi)^2) = n pi + c2 + (c1 + c2^2)/(2 n pi) + O(n^-3)
    const PParameters& pp = table_for(2.0).params();
    const CoefficientPair pr = make_pair(Potential::constant(0.8), Potential::constant(0.6));
    for (int n : {10, 40}) {
        const double N = n * std::numbers::pi;
        const double exact = 0.6 + std::sqrt(0.36 + 0.8 + N * N);
        EXPECT_LT(std::abs(eigenvalue_expansion(pp, pr, n, Variant::proof_consistent) - exact), 0.05 / std::pow(n, 3));
        EXPECT_GT(std::abs(eigenvalue_expansion(pp, pr, n, Variant::printed) - exact), 0.04 / n);
    }
}

TEST(EigenExpansion, ReductionWithoutR)
{
    const CoefficientPair pair = make_pair(Potential::cosine(2, 1), Potential::zero());
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
        for (Variant v : both) {
            const EigenvalueTerms t = eigenvalue_terms(table_for(p).params(), pair, 9, v);
            EXPECT_EQ(t.r_term, 0.0);
            EXPECT_EQ(t.second_order, 0.0);
        }
        const PParameters& pp = table_for(p).params();
        EXPECT_EQ(eigenvalue_expansion(pp, pair, 9, Variant::printed),
                  eigenvalue_expansion(pp, pair, 9, Variant::proof_consistent));
    }
}

TEST(EigenExpansion, PTwoCoefficients)
{
    const PParameters& pp = table_for(2.0).params();
    const CoefficientPair pair = make_pair(Potential::polynomial({1, 2}), Potential::polynomial({0, 1, -1}));
    for (int n : {5, 50}) {
        const double N = n * std::numbers::pi;
        for (Variant v : both) {
            const EigenvalueTerms t = eigenvalue_terms(pp, pair, n, v);
            EXPECT_NEAR(t.q_term, pair.integral_q / (2 * N), 1e-15);
            EXPECT_NEAR(t.r_term, pair.integral_r, 1e-15);
        }
        EXPECT_NEAR(eigenvalue_terms(pp, pair, n, Variant::proof_consistent).second_order, pair.integral_r2 / (2 * N),
                    1e-15);
    }
}

TEST(NodalPoints, Expansion)
{
    const CoefficientPair z = make_pair(Potential::zero(), Potential::zero());
    for (Variant v : both)
        for (int j = 1; j < 9; ++j)
            EXPECT_NEAR(nodal_point_expansion(table_for(3.0).params(), z, 9, j, v), j / 9.0, 1e-15);
    EXPECT_THROW(nodal_point_expansion(table_for(3.0).params(), z, 9, 0), Error);
    EXPECT_THROW(nodal_point_expansion(table_for(3.0).params(), z, 9, 9), Error);

    const CoefficientPair qr0 = make_pair(Potential::cosine(1, 1), Potential::zero());
    const auto t = nodal_point_terms(table_for(2.5).params(), qr0, 20, 7, Variant::proof_consistent);
    EXPECT_EQ(t.r_global, 0.0);
    EXPECT_EQ(t.r_local, 0.0);
}

TEST(NodalPoints, ResidualAtMidIndex)
{
    const SpTable& t = table_for(2.0);
    const CoefficientPair pair = make_pair(Potential::cosine(1, 1), Potential::zero());
    const int n = 50;
    const Mode m = solve_mode(t, pair, n);
    for (Variant v : both) {
        const double pred = nodal_point_expansion(t.params(), pair, n, 25, v);
        EXPECT_LT(std::abs(pred - m.nodal.point(25)), 1.0 / (n * n));
    }
}

TEST(NodalPoints, ProofConsistentTracksNumericsForPencil)
{
    for (double p : {2.0, 3.0}) {
        const SpTable& t = table_for(p);
        const CoefficientPair pair = make_pair(Potential::cosine(1, 1), Potential::polynomial({0, 1, -1}));
        double prev = 1.0;
        for (int n : {20, 40, 80}) {
            const Mode m = solve_mode(t, pair, n);
            const double res = std::abs(nodal_point_expansion(t.params(), pair, n, n / 2, Variant::proof_consistent) -
                                        m.nodal.point(n / 2));
            EXPECT_LT(res, prev);
            prev = res;
        }
    }
}

TEST(NodalLengths, Expansion)
{
    for (double p : {2.0, 3.0}) {
        const SpTable& t = table_for(p);
        const CoefficientPair z = make_pair(Potential::zero(), Potential::zero());
        const Mode m = solve_mode(t, z, 12);
        for (int j = 0; j < 12; ++j) {
            EXPECT_NEAR(nodal_length_expansion(t.params(), z, m.nodal, j), 1.0 / 12, 1e-14);
            EXPECT_NEAR(nodal_length_expansion(t.params(), z, m.nodal, j, LambdaSource::predicted), 1.0 / 12, 1e-14);
        }
        EXPECT_THROW(nodal_length_expansion(t.params(), z, m.nodal, 12), Error);
    }
}

TEST(NodalLengths, ConstantPencil)
{
    // l = pi / lambda + c / lambda * l: exact for constant r, q = 0 at p = 2 up to O(lambda^-3)
    const SpTable& t = table_for(2.0);
    const double c = 0.5;
    const CoefficientPair pr = make_pair(Potential::zero(), Potential::constant(c));
    for (int n : {10, 40}) {
        const Mode m = solve_mode(t, pr, n);
        const double lam = c + std::sqrt(c * c + std::pow(n * std::numbers::pi, 2));
        EXPECT_NEAR(m.nodal.lambda_n, lam, 1e-9);
        for (int j : {0, n / 2, n - 1}) {
            const double pred = nodal_length_expansion(t.params(), pr, m.nodal, j);
            EXPECT_LT(std::abs(pred - m.nodal.nodal_lengths[j]), 2.0 / std::pow(lam, 3));
        }
    }
}

TEST(NodalLengths, RTermVanishesWithoutR)
{
    const SpTable& t = table_for(3.0);
    const CoefficientPair pair = make_pair(Potential::cosine(1, 1), Potential::zero());
    const Mode m = solve_mode(t, pair, 10);
    for (int j = 0; j < 10; ++j)
        for (Variant v : both) {
            EXPECT_EQ(nodal_length_terms(t.params(), pair, m.nodal, j, LambdaSource::numeric, v).r_term, 0.0);
            EXPECT_EQ(nodal_length_terms(t.params(), pair, m.nodal, j, LambdaSource::predicted, v).r_term, 0.0);
        }
}

TEST(Report, SlopeAndErrors)
{
    std::vector<int> ns = {10, 20, 40, 80};
    Eigen::VectorXd lam(4), pred(4), comp(4);
    for (int i = 0; i < 4; ++i) {
        lam[i] = ns[i] * 3.0;
        comp[i] = 1.0;
        pred[i] = 1.0 + 5.0 / std::pow(ns[i], 3.0);
    }
    const ExpansionReport rep = residual_report(ns, lam, pred, comp);
    EXPECT_NEAR(rep.decay_exponent_fit, -3.0, 1e-10);
    EXPECT_NEAR(rep.decay_exponent_fit_lambda, -3.0, 1e-10);
    EXPECT_FALSE(rep.degenerate);

    const ExpansionReport flat = residual_report(ns, lam, comp, comp, 1e-10);
    EXPECT_TRUE(flat.degenerate);
    EXPECT_EQ(flat.note, "degenerate: at noise floor");

    try {
        residual_report({10, 20, 40}, lam.head(3), pred.head(3), comp.head(3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::out_of_range);
    }
}

TEST(Report, UnperturbedIsDegenerate)
{
    const SpTable& t = table_for(2.0);
    const CoefficientPair z = make_pair(Potential::zero(), Potential::zero());
    std::vector<int> ns = {10, 20, 40, 80, 160};
    Eigen::VectorXd lam(5), pred(5), comp(5);
    for (int i = 0; i < 5; ++i) {
        lam[i] = find_eigenvalue(t, z, ns[i]);
        comp[i] = std::pow(lam[i], 2.0 / 2.0);
        pred[i] = eigenvalue_expansion(t.params(), z, ns[i]);
    }
    const ExpansionReport rep = residual_report(ns, lam, pred, comp, 1e-10);
    EXPECT_TRUE(rep.degenerate);
    EXPECT_LT(rep.residual.cwiseAbs().maxCoeff(), 1e-10);
}

TEST(VariantNames, RoundTrip)
{
    EXPECT_EQ(variant_from_string("printed"), Variant::printed);
    EXPECT_EQ(variant_from_string("proof-consistent"), Variant::proof_consistent);
    EXPECT_EQ(to_string(Variant::proof_consistent), "proof-consistent");
    EXPECT_THROW(variant_from_string("exact"), Error);
}
