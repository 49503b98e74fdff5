#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "pnodal/error.hpp"
#include "pnodal/reconstruct.hpp"

using namespace pnodal;

namespace {

const SpTable& table_for(double p)
{
    static std::map<double, SpTable> cache;
    auto it = cache.find(p);
    if (it == cache.end()) it = cache.emplace(p, build_table(make_parameters(p))).first;
    return it->second;
}

NodalData nodal(double p, const CoefficientPair& pair, int n, double root_tol = 1e-10)
{
    SpectrumOptions o;
    o.root_tol = root_tol;
    o.seed_variant = Variant::proof_consistent;
    return solve_mode(table_for(p), pair, n, o).nodal;
}

}  // namespace

TEST(JMap, Convention)
{
    NodalData d;
    d.n = 4;
    d.lambda_n = 1.0;
    d.nodal_points.resize(3);
    d.nodal_points << 0.25, 0.5, 0.75;
    Eigen::VectorXd g(6);
    g << 0.01, 0.25, 0.3, 0.5, 0.74, 0.99;
    const Eigen::VectorXi j = nodal_index_map(d, g);
    EXPECT_EQ(j[0], 0);
    EXPECT_EQ(j[1], 1);
    EXPECT_EQ(j[2], 1);
    EXPECT_EQ(j[3], 2);
    EXPECT_EQ(j[4], 2);
    EXPECT_EQ(j[5], 3);
}

TEST(ReconstructQ, Unperturbed)
{
    const CoefficientPair z = make_pair(Potential::zero(), Potential::zero());
    for (double p : {2.0, 3.0}) {
        const NodalData d = nodal(p, z, 30);
        for (Variant v : {Variant::printed, Variant::proof_consistent}) {
            ReconstructionResult rr = reconstruct_q(table_for(p).params(), d, z.r, midpoint_grid(100), v);
            EXPECT_LE(rr.q_hat.cwiseAbs().maxCoeff(), rr.noise_floor);
            EXPECT_GT(rr.noise_floor, 0.0);
        }
    }
}

TEST(ReconstructQ, ConstantShift)
{
    const CoefficientPair one = make_pair(Potential::constant(1.0), Potential::zero());
    const NodalData d = nodal(2.0, one, 100);
    for (Variant v : {Variant::printed, Variant::proof_consistent}) {
        ReconstructionResult rr = reconstruct_q(table_for(2.0).params(), d, one.r, midpoint_grid(200), v);
        error_metrics(rr, one.q);
        EXPECT_LT(rr.sup_error, 0.05);
    }
}

TEST(ReconstructQ, PiecewiseStructure)
{
    const CoefficientPair pair = make_pair(Potential::cosine(1, 1), Potential::polynomial({0, 1, -1}));
    const NodalData d = nodal(2.0, pair, 20);
    const Eigen::VectorXd g = midpoint_grid(400);
    for (Variant v : {Variant::printed, Variant::proof_consistent}) {
        const ReconstructionResult rr = reconstruct_q(table_for(2.0).params(), d, pair.r, g, v);
        // removing the explicit r(x) dependence leaves a constant per interval
        const double c = v == Variant::printed ? 2.0 * d.lambda_n : 0.0;
        const double c2 = v == Variant::printed ? 0.0 : 1.0;
        for (Eigen::Index i = 1; i < g.size(); ++i) {
            if (rr.j_map[i] != rr.j_map[i - 1]) continue;
            const double a = rr.q_hat[i] + c * pair.r(g[i]) + c2 * pair.r(g[i]) * pair.r(g[i]);
            const double b = rr.q_hat[i - 1] + c * pair.r(g[i - 1]) + c2 * pair.r(g[i - 1]) * pair.r(g[i - 1]);
            EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST(ReconstructQ, ProofConsistentConverges)
{
    const CoefficientPair pair = make_pair(Potential::cosine(1, 1), Potential::polynomial({0, 1, -1}));
    const Eigen::VectorXd g = midpoint_grid(512);
    for (double p : {2.0, 3.0}) {
        std::vector<double> sup;
        for (int n : {10, 40, 160}) {
            ReconstructionResult rr =
                reconstruct_q(table_for(p).params(), nodal(p, pair, n, 1e-12), pair.r, g, Variant::proof_consistent,
                              1e-12);
            error_metrics(rr, pair.q);
            EXPECT_GT(rr.sup_error, 10.0 * rr.noise_floor);
            sup.push_back(rr.sup_error);
        }
        EXPECT_LT(sup[1], sup[0]);
        EXPECT_LT(sup[2], 0.5 * sup[1]);
    }
}

TEST(ReconstructQ, PrintedFormStallsWithR)
{
    // the bias 2(p+1)/p r^2 and the r(x) - mean term do not go away
    const CoefficientPair pair = make_pair(Potential::cosine(1, 1), Potential::polynomial({0, 1, -1}));
    const Eigen::VectorXd g = midpoint_grid(512);
    std::vector<double> sup;
    for (int n : {40, 160}) {
        ReconstructionResult rr = reconstruct_q(table_for(2.0).params(), nodal(2.0, pair, n), pair.r, g);
        error_metrics(rr, pair.q);
        sup.push_back(rr.sup_error);
    }
    EXPECT_GT(sup[1], 0.5 * sup[0]);
}

TEST(ReconstructQ, GridValidation)
{
    const CoefficientPair z = make_pair(Potential::zero(), Potential::zero());
    const NodalData d = nodal(2.0, z, 5);
    EXPECT_THROW(reconstruct_q(table_for(2.0).params(), d, z.r, Eigen::VectorXd()), Error);
    Eigen::VectorXd bad(2);
    bad << 0.5, 1.0;
    EXPECT_THROW(reconstruct_q(table_for(2.0).params(), d, z.r, bad), Error);
}

TEST(ReconstructR, Unperturbed)
{
    const CoefficientPair z = make_pair(Potential::zero(), Potential::zero());
    const NodalData d = nodal(3.0, z, 40);
    const ReconstructionResult rr = reconstruct_r_leading(table_for(3.0).params(), d, midpoint_grid(64));
    EXPECT_LE(rr.q_hat.cwiseAbs().maxCoeff(), rr.noise_floor);
}

TEST(ReconstructR, ConstantR)
{
    for (double c : {0.5, -0.8}) {
        const CoefficientPair pr = make_pair(Potential::zero(), Potential::constant(c));
        ReconstructionResult rr = reconstruct_r_leading(table_for(2.0).params(), nodal(2.0, pr, 100), midpoint_grid(128));
        error_metrics(rr, pr.r);
        EXPECT_LT(rr.sup_error, 0.1 * (1.0 + std::abs(c)));
    }
}

TEST(ReconstructR, L2DecreasesAtPThree)
{
    const CoefficientPair pr = make_pair(Potential::zero(), Potential::polynomial({0, 1, -1}));
    double prev = 1e300;
    for (int n : {20, 40, 80, 160}) {
        ReconstructionResult rr = reconstruct_r_leading(table_for(3.0).params(), nodal(3.0, pr, n), midpoint_grid(256));
        error_metrics(rr, pr.r);
        EXPECT_LT(rr.l2_error, prev) << n;
        prev = rr.l2_error;
    }
}

TEST(Metrics, Definitions)
{
    ReconstructionResult rr;
    rr.grid = midpoint_grid(10);
    rr.q_hat = rr.grid.unaryExpr([](double x) { return std::cos(x); });
    const Potential truth = Potential::cosine(1.0, 1.0 / (2.0 * std::numbers::pi));
    auto [s0, l0] = error_metrics(rr, truth);
    EXPECT_NEAR(s0, 0.0, 1e-15);
    EXPECT_NEAR(l0, 0.0, 1e-15);
    rr.q_hat.array() += 0.1;
    auto [s1, l1] = error_metrics(rr, truth);
    EXPECT_NEAR(s1, 0.1, 1e-14);
    EXPECT_NEAR(l1, 0.1 * std::sqrt(rr.grid[9] - rr.grid[0]), 1e-14);
    rr.q_hat[3] += 0.2;
    auto [s2, l2] = error_metrics(rr, truth);
    EXPECT_GE(s2, s1);
    EXPECT_GE(l2, l1);
}

TEST(Ladder, Extrapolation)
{
    ReconstructionResult a, b;
    a.n = 10;
    b.n = 20;
    a.grid = b.grid = midpoint_grid(4);
    a.q_hat = Eigen::VectorXd::Constant(4, 1.2);
    b.q_hat = Eigen::VectorXd::Constant(4, 1.1);
    const auto e = extrapolate_ladder({a, b});
    ASSERT_EQ(e.size(), 1u);
    EXPECT_NEAR(e[0][2], 1.0, 1e-15);
    b.n = 30;
    EXPECT_THROW(extrapolate_ladder({a, b}), Error);
}
