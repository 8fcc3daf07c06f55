#include <gtest/gtest.h>

#include <cmath>

#include "kolmo/cutoffs.hpp"
#include "kolmo/oracle.hpp"

using namespace kolmo;

TEST(Bump, Values) {
    EXPECT_EQ(bump_f(-1.0), 0.0);
    EXPECT_EQ(bump_f(0.0), 0.0);
    EXPECT_NEAR(bump_f(1.0), 0.36787944117144233, 1e-16);
    EXPECT_NEAR(bump_f(0.5), 0.1353352832366127, 1e-16);
}

TEST(Bump, NormalizationAgainstAdaptiveQuadrature) {
    const double c = BumpKernel::instance().c_norm();
    EXPECT_GT(c, 0.0);
    EXPECT_LE(c, std::exp(-4.0));
    // independent value, 30-digit quadrature: 0.007029858406609656
    EXPECT_NEAR(c, 0.007029858406609656, 1e-15);
    EXPECT_NEAR(c, eta_norm_quadrature(1e-14), 1e-14);
}

TEST(EtaTilde, Values) {
    EXPECT_EQ(eta_tilde(-0.5), 0.0);
    EXPECT_EQ(eta_tilde(0.0), 0.0);
    EXPECT_NEAR(eta_tilde(0.5), 0.5, 1e-15);
    EXPECT_EQ(eta_tilde(1.0), 1.0);
    EXPECT_EQ(eta_tilde(2.0), 1.0);
    for (double x = 0.01; x < 1.0; x += 0.01) {
        EXPECT_NEAR(eta_tilde(x) + eta_tilde(1.0 - x), 1.0, 1e-14);
    }
}

TEST(EtaTilde, InterpolationAgainstQuadrature) {
    auto f = [](double y) { return bump_f(y) * bump_f(1.0 - y); };
    const double c = eta_norm_quadrature();
    double worst = 0.0;
    for (double x = 0.013; x < 1.0; x += 0.0371) {
        double acc = 0.0;
        const int n = 4000;
        // composite Simpson on [0, x] as an independent reference
        const double h = x / n;
        for (int i = 0; i <= n; ++i) {
            const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            acc += w * f(i * h);
        }
        acc *= h / 3.0 / c;
        worst = std::max(worst, std::abs(acc - eta_tilde(x)));
    }
    EXPECT_LT(worst, 1e-10);
}

TEST(BlendH, Values) {
    EXPECT_EQ(blend_h(-0.3), 0.0);
    EXPECT_EQ(blend_h(0.0), 0.0);
    EXPECT_DOUBLE_EQ(blend_h(1.0), 1.0);
    EXPECT_DOUBLE_EQ(blend_h(0.75), 0.75);
    EXPECT_NEAR(blend_h(0.5), std::exp(-2.0) / 2.0 + 0.25, 1e-14);
    EXPECT_NEAR(blend_h(0.5), 0.3176676416183063, 1e-14);
}

TEST(PsiUpper, Examples) {
    const Cutoff Psi = make_psi_upper(1.0);
    EXPECT_DOUBLE_EQ(Psi(0.25), 0.5);
    EXPECT_DOUBLE_EQ(Psi(2.0), 2.0);
    EXPECT_NEAR(Psi(0.75), 0.6588338208091532, 1e-14);
    EXPECT_DOUBLE_EQ(Psi.derivative(1, 2.0), 1.0);
    EXPECT_DOUBLE_EQ(Psi.derivative(1, 0.1), 0.0);
    EXPECT_THROW(Psi.derivative(3, 1.0), std::invalid_argument);
    EXPECT_THROW(make_psi_upper(0.0), std::invalid_argument);
}

TEST(PhiTwoSided, Examples) {
    const Cutoff Phi = make_phi_twosided(1.0, 2.0);
    EXPECT_DOUBLE_EQ(Phi(0.25), 0.5);
    EXPECT_DOUBLE_EQ(Phi(1.5), 1.5);
    EXPECT_DOUBLE_EQ(Phi(10.0), 4.0);
    EXPECT_DOUBLE_EQ(Phi.derivative(2, 1.5), 0.0);
    EXPECT_THROW(make_phi_twosided(2.0, 1.0), std::invalid_argument);
}

TEST(LowerCutoffs, Examples) {
    const Cutoff psi = make_psi_lower(1.0);
    EXPECT_EQ(psi(0.3), 0.0);
    EXPECT_EQ(psi(5.0), 5.0);
    EXPECT_GT(psi(0.75), 0.0);
    EXPECT_LE(psi(0.75), 0.75);
    const Cutoff phi = make_phi_lower(2.0);
    EXPECT_EQ(phi(0.0), 0.0);
    EXPECT_EQ(phi(3.0), 3.0);
    EXPECT_THROW(make_phi_lower(-1.0), std::invalid_argument);
}

namespace {

// Sample grid over [0, 3 * top] with fixed count.
std::vector<double> samples(double top, int n = 100000) {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = -0.1 * top + 3.1 * top * i / (n - 1);
    return xs;
}

}  // namespace

class CutoffScales : public ::testing::TestWithParam<double> {};

TEST_P(CutoffScales, RegionIdentitiesAndBounds) {
    const double s = GetParam();
    const CutoffSet set = make_cutoff_set({0.0, s, 0.8 * s, 1.7 * s, 0.0});
    const double c0 = estimate_c0(set);
    for (double x : samples(2.0 * 1.7 * s)) {
        const double Psi = set.Psi(x), Phi = set.Phi(x), psi = set.psi(x), phi = set.phi(x);
        if (x <= 0.5 * s) {
            EXPECT_NEAR(Psi, 0.5 * s, 1e-12 * s);
            EXPECT_EQ(psi, 0.0);
        }
        if (x >= s) {
            EXPECT_NEAR(Psi, x, 1e-12 * std::max(1.0, x));
            EXPECT_NEAR(psi, x, 1e-12 * std::max(1.0, x));
        }
        if (x <= 0.4 * s) {
            EXPECT_NEAR(Phi, 0.4 * s, 1e-12 * s);
            EXPECT_EQ(phi, 0.0);
        }
        if (x >= 0.8 * s && x <= 1.7 * s) EXPECT_NEAR(Phi, x, 1e-12 * std::max(1.0, x));
        if (x >= 3.4 * s) EXPECT_NEAR(Phi, 3.4 * s, 1e-12 * s);
        if (x >= 0.8 * s) EXPECT_NEAR(phi, x, 1e-12 * std::max(1.0, x));
        if (x >= 0.0) {
            EXPECT_LE(psi, x + 1e-15 * x);
            EXPECT_LE(phi, x + 1e-15 * x);
        }
        for (const Cutoff* c : {&set.Psi, &set.Phi, &set.psi, &set.phi}) {
            const double d1 = c->d1(x);
            EXPECT_GE(d1, -1e-12);
            EXPECT_LE(d1, c0 * (1.0 + 1e-12));
        }
        EXPECT_LE(std::abs(set.Psi.d2(x)), c0 / s * (1.0 + 1e-9));
        EXPECT_LE(std::abs(set.Phi.d2(x)), c0 / (0.8 * s) * (1.0 + 1e-9));
    }
}

TEST_P(CutoffScales, DerivativesMatchFiniteDifferences) {
    const double s = GetParam();
    const CutoffSet set = make_cutoff_set({0.0, s, 0.8 * s, 1.7 * s, 0.0});
    const std::vector<double> joins{0.0, 0.5 * s, s, 0.4 * s, 0.8 * s, 1.7 * s, 3.4 * s, 0.625 * s,
                                    0.5 * s + 0.375 * s, 0.4 * s + 0.3 * s, 2.125 * s};
    for (const Cutoff* c : {&set.Psi, &set.Phi, &set.psi, &set.phi}) {
        double worst1 = 0.0, worst2 = 0.0;
        for (double x : samples(3.4 * s, 20000)) {
            bool near_join = false;
            for (double j : joins) near_join = near_join || std::abs(x - j) < 1e-3 * s;
            if (near_join) continue;
            const double h = 1e-5 * s;
            const double fd1 = ((*c)(x + h) - (*c)(x - h)) / (2 * h);
            const double fd2 = (c->d1(x + h) - c->d1(x - h)) / (2 * h);
            const double a1 = c->d1(x), a2 = c->d2(x);
            worst1 = std::max(worst1, std::abs(fd1 - a1) / std::max(1.0, std::abs(a1)));
            worst2 = std::max(worst2, std::abs(fd2 - a2) * s / std::max(1.0, std::abs(a2) * s));
        }
        EXPECT_LT(worst1, 1e-5) << to_string(c->kind());
        EXPECT_LT(worst2, 1e-5) << to_string(c->kind());
    }
}

INSTANTIATE_TEST_SUITE_P(Scales, CutoffScales, ::testing::Values(0.1, 1.0, 10.0));

TEST(EstimateC0, ScaleInvariantAndConverged) {
    const double a = estimate_c0(make_psi_upper(1.0));
    const double b = estimate_c0(make_psi_upper(100.0));
    const double c = estimate_c0(make_psi_upper(10.0));
    EXPECT_LT(std::abs(a - b) / a, 0.01);
    EXPECT_LT(std::abs(a - c) / a, 0.01);
    const double fine = estimate_c0(make_psi_upper(1.0), 1000000);
    EXPECT_LT(std::abs(a - fine) / fine, 0.005);
    EXPECT_GE(estimate_c0(make_phi_lower(0.3)), 1.0);
}

TEST(CutoffSet, ViscosityBounds) {
    const Thresholds th = thresholds_at({1.0, 0.5, 2.0}, 1.0, 0.3);
    const CutoffSet set = make_cutoff_set(th);
    EXPECT_NEAR(set.mu(th.b_star, th.omega_dstar), 4.0 * th.mu_star, 1e-14);
    EXPECT_NEAR(set.mu(0.0, 0.0), th.b_star / th.omega_star, 1e-14);
    for (double b = -1.0; b < 5.0; b += 0.01) {
        for (double w = -1.0; w < 6.0; w += 0.05) {
            const double mu = set.mu(b, w);
            EXPECT_GE(mu, th.mu_star - 1e-12);
            EXPECT_LE(mu, 2.0 / (0.5 * th.omega_star) * std::max(th.b_star, std::abs(b)) + 1e-12);
        }
    }
}
