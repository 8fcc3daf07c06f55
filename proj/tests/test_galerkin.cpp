#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kolmo/diagnostics.hpp"
#include "kolmo/galerkin.hpp"

using namespace kolmo;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const std::array<double, 3> kBox{kTwoPi, kTwoPi, kTwoPi};

template <class F>
ScalarField sample(const GridPtr& g, F f) {
    std::vector<double> vals(g->physical_size());
    const auto& n = g->n();
    std::size_t p = 0;
    for (int i = 0; i < n[0]; ++i)
        for (int j = 0; j < n[1]; ++j)
            for (int k = 0; k < n[2]; ++k)
                vals[p++] = f(g->coordinate(0, i), g->coordinate(1, j), g->coordinate(2, k));
    return to_spectral(g, vals);
}

State constant_state(const GridPtr& g, double omega, double b) {
    State s;
    s.v = VelocityField(g);
    s.omega = ScalarField::constant(g, omega);
    s.b = ScalarField::constant(g, b);
    return s;
}

// Smooth random state with omega in [0.6, 1.4] and b in [0.6, 1.4].
State random_state(const GridPtr& g, std::mt19937_64& rng, double amp_v = 0.3) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto pattern = [&](double scale) {
        ScalarField f(g);
        for (std::size_t i = 1; i < f.c.size(); ++i) {
            if (g->k2(i) <= 2.0) f.c[i] = Complex(u(rng), u(rng)) * scale;
        }
        return to_spectral(g, to_physical(f));  // restores conjugate symmetry
    };
    State s;
    s.v = leray_project(std::array<ScalarField, 3>{pattern(amp_v), pattern(amp_v), pattern(amp_v)});
    s.omega = pattern(0.02);
    s.omega.c[0] = 1.0;
    s.b = pattern(0.02);
    s.b.c[0] = 1.0;
    return s;
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.c.size(); ++i) m = std::max(m, std::abs(a.c[i] - b.c[i]));
    return m;
}

double quad_integral(const GridPtr& g, const std::vector<double>& vals) {
    double s = 0.0;
    for (double x : vals) s += x;
    return s * g->volume() / static_cast<double>(g->quadrature_size());
}

}  // namespace

TEST(MuField, ConstantInsideIdentityRegion) {
    const GridPtr g = SpectralGrid::create({8, 8, 8}, kBox);
    const CutoffSet cut = make_cutoff_set(thresholds_at({1, 1, 1}, 1.0, 0.0));
    const auto mu = mu_field(constant_state(g, 1.0, 1.0), cut);
    ASSERT_EQ(mu.size(), g->quadrature_size());
    for (double m : mu) EXPECT_DOUBLE_EQ(m, 1.0);
    // far below the thresholds mu saturates at (b*/2)/(omega*/2)
    for (double m : mu_field(constant_state(g, 0.01, 0.01), cut)) EXPECT_NEAR(m, 1.0, 1e-15);
    // above 2 omega** the denominator caps
    for (double m : mu_field(constant_state(g, 5.0, 3.0), cut)) EXPECT_NEAR(m, 1.5, 1e-15);
}

TEST(MuField, BoundedByThresholds) {
    std::mt19937_64 rng(3);
    const GridPtr g = SpectralGrid::create({8, 8, 8}, kBox);
    const Thresholds th = thresholds_at({0.9, 0.8, 1.2}, 1.0, 0.2);
    const CutoffSet cut = make_cutoff_set(th);
    for (int rep = 0; rep < 5; ++rep) {
        const State s = random_state(g, rng);
        const auto bq = to_quadrature(s.b);
        const auto mu = mu_field(s, cut);
        for (std::size_t i = 0; i < mu.size(); ++i) {
            EXPECT_GE(mu[i], th.mu_star);
            EXPECT_LE(mu[i], 2.0 * std::max(th.b_star, std::abs(bq[i])) / (0.5 * th.omega_star));
        }
    }
}

TEST(Rhs, ConstantFieldsReduceToOdes) {
    const GridPtr g = SpectralGrid::create({8, 8, 8}, kBox);
    const CutoffSet cut = make_cutoff_set(thresholds_at({1, 1, 1}, 1.0, 0.0));
    ModelParams p;
    p.kappa2 = 0.7;
    const RhsBundle r = galerkin_rhs(constant_state(g, 1.0, 1.0), cut, p);
    EXPECT_NEAR(r.domega.mean(), -0.7, 1e-15);
    EXPECT_NEAR(r.db.mean(), -1.0, 1e-15);
    for (std::size_t i = 1; i < r.domega.c.size(); ++i) {
        EXPECT_EQ(std::abs(r.domega.c[i]), 0.0);
        EXPECT_EQ(std::abs(r.db.c[i]), 0.0);
    }
    for (int a = 0; a < 3; ++a) EXPECT_EQ(max_abs_diff(r.dv[a], ScalarField(g)), 0.0);
    EXPECT_DOUBLE_EQ(r.mu_max, 1.0);
    EXPECT_DOUBLE_EQ(r.mu_min, 1.0);
}

TEST(Rhs, ShearModeDecaysAndHeatsB) {
    const GridPtr g = SpectralGrid::create({8, 8, 8}, kBox);
    const CutoffSet cut = make_cutoff_set(thresholds_at({1, 1, 1}, 1.0, 0.0));
    ModelParams p;
    State s = constant_state(g, 2.0, 3.0);  // mu = 3/2 inside the identity regions
    s.v[0] = sample(g, [](double, double y, double) { return 0.1 * std::sin(y); });
    const double mu = 1.5;
    const RhsBundle r = galerkin_rhs(s, cut, p);
    ScalarField expect = s.v[0];
    expect *= -mu / 2.0;
    EXPECT_LT(max_abs_diff(r.dv[0], expect), 1e-15);
    EXPECT_LT(max_abs_diff(r.dv[1], ScalarField(g)), 1e-15);
    EXPECT_LT(max_abs_diff(r.dv[2], ScalarField(g)), 1e-15);
    // |D v|^2 = 0.005 cos^2 y with mean 0.0025
    EXPECT_NEAR(r.db.mean(), -3.0 * 2.0 + mu * 0.0025, 1e-14);
    EXPECT_NEAR(r.db.c[g->index_of({0, 2, 0})].real(), mu * 0.00125, 1e-15);
    EXPECT_NEAR(r.domega.mean(), -4.0, 1e-14);
}

TEST(Rhs, VelocityEnergyIdentity) {
    std::mt19937_64 rng(4);
    const GridPtr g = SpectralGrid::create({8, 8, 8}, kBox);
    const CutoffSet cut = make_cutoff_set(thresholds_at({0.9, 0.8, 1.2}, 1.0, 0.1));
    ModelParams p;
    p.nu0 = 0.7;
    for (int rep = 0; rep < 4; ++rep) {
        const State s = random_state(g, rng);
        const RhsBundle r = galerkin_rhs(s, cut, p);
        const DiagnosticsRecord rec = record(s, cut, p);
        // transport drops out: <dv, v> = -nu0 int mu |D v|^2
        EXPECT_NEAR(inner(r.dv, s.v), -p.nu0 * rec.diss_v, 1e-12 * rec.diss_v);
        EXPECT_LT(divergence_defect(r.dv), 1e-12);
        EXPECT_EQ(support_defect(r.dv[0]), 0.0);
        EXPECT_EQ(support_defect(r.domega), 0.0);
    }
}

TEST(Rhs, ScalarEnergyIdentities) {
    std::mt19937_64 rng(5);
    const GridPtr g = SpectralGrid::create({8, 8, 8}, kBox);
    const CutoffSet cut = make_cutoff_set(thresholds_at({0.9, 0.8, 1.2}, 1.0, 0.1));
    ModelParams p;
    p.kappa1 = 0.5;
    p.kappa2 = 1.3;
    p.kappa3 = 0.8;
    p.kappa4 = 1.1;
    for (int rep = 0; rep < 4; ++rep) {
        const State s = random_state(g, rng);
        const RhsBundle r = galerkin_rhs(s, cut, p);
        const DiagnosticsRecord rec = record(s, cut, p);
        const auto wq = to_quadrature(s.omega);
        const auto bq = to_quadrature(s.b);
        const auto mu = mu_field(s, cut);
        const SymTensor D = sym_gradient(s.v);
        std::array<std::vector<double>, 6> dq;
        for (int c = 0; c < 6; ++c) dq[c] = to_quadrature(D[c]);
        std::vector<double> react_w(wq.size()), react_b(wq.size());
        for (std::size_t i = 0; i < wq.size(); ++i) {
            const double ph = cut.phi(wq[i]);
            double d2 = 0.0;
            for (int c = 0; c < 6; ++c) d2 += (c < 3 ? 1.0 : 2.0) * dq[c][i] * dq[c][i];
            react_w[i] = -p.kappa2 * ph * ph * wq[i];
            react_b[i] = (-cut.psi(bq[i]) * ph + p.kappa4 * mu[i] * d2) * bq[i];
        }
        const double ew = -p.kappa1 * rec.diss_w + quad_integral(g, react_w);
        const double eb = -p.kappa3 * rec.diss_b + quad_integral(g, react_b);
        EXPECT_NEAR(inner(r.domega, s.omega), ew, 1e-12 * std::abs(ew));
        EXPECT_NEAR(inner(r.db, s.b), eb, 1e-12 * std::abs(eb));
    }
}

TEST(Rhs, RejectsMismatchedMu) {
    const GridPtr g = SpectralGrid::create({8, 8, 8}, kBox);
    const std::vector<double> mu(7, 1.0);
    EXPECT_THROW(rhs_velocity(constant_state(g, 1, 1), mu, ModelParams{}), std::invalid_argument);
}

TEST(Projection, ConstantAndSolenoidal) {
    const GridPtr g = SpectralGrid::create({8, 8, 8}, kBox);
    const std::size_t np = g->physical_size();
    std::array<std::vector<double>, 3> v0{std::vector<double>(np), std::vector<double>(np),
                                          std::vector<double>(np)};
    std::vector<double> w0(np, 1.25), b0(np, 0.75);
    std::size_t p = 0;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            for (int k = 0; k < 8; ++k, ++p) {
                const double x = g->coordinate(0, i), y = g->coordinate(1, j), z = g->coordinate(2, k);
                v0[0][p] = std::sin(x) + std::sin(y) + 0.3;  // has a gradient part and a mean
                v0[1][p] = std::cos(3 * z);
                v0[2][p] = std::sin(4 * x);  // outside the ball
            }
    const State s = project_initial_data(g, v0, w0, b0, 0.5);
    EXPECT_EQ(s.t, 0.5);
    EXPECT_NEAR(s.omega.mean(), 1.25, 1e-15);
    EXPECT_NEAR(s.b.mean(), 0.75, 1e-15);
    EXPECT_LT(divergence_defect(s.v), 1e-14);
    for (int a = 0; a < 3; ++a) EXPECT_EQ(support_defect(s.v[a]), 0.0);
    const ScalarField sy = sample(g, [](double, double y, double) { return std::sin(y); });
    EXPECT_LT(max_abs_diff(s.v[0], sy), 1e-15);
    EXPECT_LT(l2_norm_sq(s.v[2]), 1e-28);
    v0[1][3] = std::nan("");
    EXPECT_THROW(project_initial_data(g, v0, w0, b0), std::invalid_argument);
}

TEST(Schedule, RebuildsOnDrift) {
    CutoffSchedule lazy({1, 1, 1}, 1.0, 1e-3);
    lazy.at(0.0);
    lazy.at(1e-4);
    EXPECT_EQ(lazy.rebuilds(), 1);
    lazy.at(2e-3);
    EXPECT_EQ(lazy.rebuilds(), 2);
    CutoffSchedule eager({1, 1, 1}, 1.0, 0.0);
    eager.at(0.0);
    eager.at(1e-9);
    eager.at(1e-9);
    EXPECT_EQ(eager.rebuilds(), 2);
}
