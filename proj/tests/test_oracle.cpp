#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kolmo/oracle.hpp"

using namespace kolmo;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const std::array<double, 3> kBox{kTwoPi, kTwoPi, kTwoPi};

State constant_state(const GridPtr& g, double omega, double b) {
    State s;
    s.v = VelocityField(g);
    s.omega = ScalarField::constant(g, omega);
    s.b = ScalarField::constant(g, b);
    return s;
}

}  // namespace

TEST(BasisSize, SmallGrids) {
    EXPECT_EQ(basis_size(*SpectralGrid::create({4, 4, 4}, kBox)), 26);
    EXPECT_EQ(basis_size(*SpectralGrid::create({8, 8, 8}, kBox)), 130);
}

TEST(Bruteforce, ConstantState) {
    const GridPtr g = SpectralGrid::create({4, 4, 4}, kBox);
    const CutoffSet cut = make_cutoff_set(thresholds_at({1, 1, 1}, 1.0, 0.0));
    const RhsBundle r = rhs_bruteforce(constant_state(g, 1.0, 1.0), cut, ModelParams{});
    EXPECT_NEAR(r.domega.mean(), -1.0, 1e-12);
    EXPECT_NEAR(r.db.mean(), -1.0, 1e-12);
    double rest = 0.0;
    for (std::size_t i = 1; i < r.domega.c.size(); ++i) {
        rest = std::max({rest, std::abs(r.domega.c[i]), std::abs(r.db.c[i])});
    }
    for (int a = 0; a < 3; ++a)
        for (const auto& z : r.dv[a].c) rest = std::max(rest, std::abs(z));
    EXPECT_LT(rest, 1e-12);
}

TEST(Bruteforce, StokesModeDamping) {
    const GridPtr g = SpectralGrid::create({4, 4, 4}, kBox);
    const CutoffSet cut = make_cutoff_set(thresholds_at({1, 1, 1}, 1.0, 0.0));
    State s = constant_state(g, 2.0, 3.0);
    s.v[2].c[g->index_of({1, 0, 0})] = Complex(0.0, -0.05);
    s.v[2].c[g->index_of({-1, 0, 0})] = Complex(0.0, 0.05);
    ModelParams p;
    p.nu0 = 0.6;
    const RhsBundle r = rhs_bruteforce(s, cut, p);
    // mu = 3/2, so dv = -nu0 mu/2 v
    const double rate = -0.6 * 1.5 / 2.0;
    EXPECT_NEAR(std::abs(r.dv[2].c[g->index_of({1, 0, 0})] - rate * s.v[2].c[g->index_of({1, 0, 0})]), 0.0, 1e-14);
    EXPECT_LT(relative_distance(r, galerkin_rhs(s, cut, p)), 1e-12);
}

TEST(Bruteforce, RandomStatesMatchFastPath) {
    const GridPtr g = SpectralGrid::create({4, 4, 4}, kBox);
    const ModelParams p;
    const CutoffSet cut = make_cutoff_set(thresholds_at({0.5, 0.5, 2.0}, p.kappa2, 0.0));
    std::mt19937_64 rng(2024);
    for (int s = 0; s < 20; ++s) {
        const bool const_mu = s % 4 == 3;
        const State st = random_oracle_state(g, rng, const_mu);
        const double err = relative_distance(galerkin_rhs(st, cut, p), rhs_bruteforce(st, cut, p));
        EXPECT_LE(err, const_mu ? 1e-10 : 1e-6) << "state " << s;
    }
}

TEST(Bruteforce, NonUnitCoefficientsAndBox) {
    const GridPtr g = SpectralGrid::create({4, 4, 4}, {1.0, 2.0, 3.0}, {.oversampling = 3.0});
    ModelParams p;
    p.nu0 = 0.3;
    p.kappa1 = 2.0;
    p.kappa2 = 0.5;
    p.kappa3 = 1.5;
    p.kappa4 = 0.25;
    p.L = {1.0, 2.0, 3.0};
    const CutoffSet cut = make_cutoff_set(thresholds_at({0.5, 0.5, 2.0}, p.kappa2, 0.1));
    std::mt19937_64 rng(99);
    for (int s = 0; s < 3; ++s) {
        const State st = random_oracle_state(g, rng, false);
        EXPECT_LE(relative_distance(galerkin_rhs(st, cut, p), rhs_bruteforce(st, cut, p)), 1e-10);
    }
}

TEST(Bruteforce, Guards) {
    const CutoffSet cut = make_cutoff_set(thresholds_at({1, 1, 1}, 1.0, 0.0));
    const GridPtr small = SpectralGrid::create({4, 4, 4}, kBox);
    EXPECT_THROW(rhs_bruteforce(constant_state(small, 1, 1), cut, ModelParams{}, {.points = 3}),
                 std::invalid_argument);
    const GridPtr big = SpectralGrid::create({16, 16, 16}, kBox);
    EXPECT_THROW(rhs_bruteforce(constant_state(big, 1, 1), cut, ModelParams{}), std::invalid_argument);
}

TEST(ConstantSolution, Values) {
    const ConstantSolution a = constant_solution(3.0, 2.0, 2.0, 0.25);
    EXPECT_DOUBLE_EQ(a.omega, 1.0);
    EXPECT_NEAR(a.b, 2.1213203435596424, 1e-15);
    const ConstantSolution b = constant_solution(1.0, 1.0, 1.0, 1.0);
    EXPECT_DOUBLE_EQ(b.omega, 0.5);
    EXPECT_DOUBLE_EQ(b.b, 0.5);
    const ConstantSolution z = constant_solution(1.5, 0.7, 0.3, 0.0);
    EXPECT_EQ(z.omega, 0.7);
    EXPECT_EQ(z.b, 1.5);
}

TEST(ConstantSolution, SolvesTheOde) {
    for (double k2 : {0.3, 1.0, 2.5}) {
        for (double t : {0.1, 1.0, 5.0}) {
            const double h = 1e-5;
            const ConstantSolution m = constant_solution(1.5, 0.7, k2, t);
            const ConstantSolution lo = constant_solution(1.5, 0.7, k2, t - h);
            const ConstantSolution hi = constant_solution(1.5, 0.7, k2, t + h);
            EXPECT_NEAR((hi.omega - lo.omega) / (2 * h), -k2 * m.omega * m.omega, 1e-9);
            EXPECT_NEAR((hi.b - lo.b) / (2 * h), -m.b * m.omega, 1e-9);
        }
    }
}

TEST(EtaNorm, BoundedAndStable) {
    const double c = eta_norm_quadrature();
    EXPECT_GT(c, 0.0);
    EXPECT_LE(c, std::exp(-4.0));
    EXPECT_NEAR(c, eta_norm_quadrature(1e-10), 1e-10);
    EXPECT_NEAR(c, 0.007029858406609656, 1e-15);
}

TEST(RelativeDistance, Definition) {
    const GridPtr g = SpectralGrid::create({4, 4, 4}, kBox);
    const ScalarField a = ScalarField::constant(g, 2.0);
    const ScalarField b = ScalarField::constant(g, 1.0);
    EXPECT_DOUBLE_EQ(relative_distance(a, b), 1.0);
    EXPECT_EQ(relative_distance(a, a), 0.0);
}
