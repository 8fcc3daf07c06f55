#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kolmo/integrator.hpp"
#include "kolmo/oracle.hpp"

using namespace kolmo;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const std::array<double, 3> kBox{kTwoPi, kTwoPi, kTwoPi};

struct Gridded {
    std::array<std::vector<double>, 3> v;
    std::vector<double> omega, b;
};

Gridded constant_data(const GridPtr& g, double omega, double b) {
    const std::size_t n = g->physical_size();
    return {{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)},
            std::vector<double>(n, omega), std::vector<double>(n, b)};
}

Trajectory run(const GridPtr& g, const Gridded& d, const InitialBounds& bd, IntegratorConfig cfg,
               const ModelParams& p = {}, SimulateOptions opts = {}) {
    return simulate(g, d.v, d.omega, d.b, p, bd, cfg, opts);
}

double constant_error(const GridPtr& g, double dt, const InitialBounds& bd) {
    IntegratorConfig cfg;
    cfg.dt_init = dt;
    cfg.dt_max = dt;
    cfg.t_end = 1.0;
    cfg.record_every = 1000000;
    const Trajectory tr = run(g, constant_data(g, 1.0, 1.0), bd, cfg, {}, {.keep_states = false});
    const ConstantSolution ex = constant_solution(1.0, 1.0, 1.0, 1.0);
    return std::max(std::abs(tr.final_state.omega.mean() - ex.omega),
                    std::abs(tr.final_state.b.mean() - ex.b));
}

}  // namespace

TEST(Method, Names) {
    EXPECT_EQ(method_from_string("rk4"), Method::RK4);
    EXPECT_EQ(method_from_string("rk23-adaptive"), Method::RK23);
    EXPECT_STREQ(to_string(Method::RK23), "rk23");
    EXPECT_THROW(method_from_string("euler"), std::invalid_argument);
    EXPECT_STREQ(to_string(Termination::ReachedTStar), "reached_tstar");
}

TEST(Config, Validation) {
    IntegratorConfig c;
    EXPECT_NO_THROW(c.validate());
    c.dt_min = 1.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.t_end = 0.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.safety = 1.5;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Simulate, ConstantFieldMatchesClosedForm) {
    const GridPtr g = SpectralGrid::create({8, 8, 8}, kBox);
    EXPECT_LT(constant_error(g, 1e-3, {1, 1, 1}), 1e-8);
}

TEST(Simulate, ConstantFieldStaysSpatiallyConstant) {
    const GridPtr g = SpectralGrid::create({8, 8, 8}, kBox);
    IntegratorConfig cfg;
    cfg.dt_init = 1e-2;
    cfg.t_end = 0.5;
    const Trajectory tr = run(g, constant_data(g, 1.2, 0.9), {0.9, 1.2, 1.2}, cfg);
    EXPECT_EQ(tr.reason, Termination::ReachedTEnd);
    EXPECT_EQ(tr.final_state.t, 0.5);
    for (std::size_t i = 1; i < tr.final_state.omega.c.size(); ++i) {
        EXPECT_EQ(std::abs(tr.final_state.omega.c[i]), 0.0);
        EXPECT_EQ(std::abs(tr.final_state.b.c[i]), 0.0);
    }
    EXPECT_EQ(l2_norm_sq(tr.final_state.v), 0.0);
    const ConstantSolution ex = constant_solution(0.9, 1.2, 1.0, 0.5);
    EXPECT_NEAR(tr.final_state.omega.mean(), ex.omega, 1e-9);
    EXPECT_NEAR(tr.final_state.b.mean(), ex.b, 1e-9);
}

TEST(Simulate, Rk4IsFourthOrder) {
    const GridPtr g = SpectralGrid::create({4, 4, 4}, kBox);
    const double e1 = constant_error(g, 0.025, {1, 1, 1});
    const double e2 = constant_error(g, 0.0125, {1, 1, 1});
    const double order = std::log2(e1 / e2);
    EXPECT_NEAR(order, 4.0, 0.2);
    // wide bounds keep the solution off the cutoff joins at every step size
    const double w1 = constant_error(g, 0.1, {0.5, 0.5, 2.0});
    const double w2 = constant_error(g, 0.05, {0.5, 0.5, 2.0});
    EXPECT_NEAR(std::log2(w1 / w2), 4.0, 0.2);
}

TEST(Simulate, OneStepMatchesOracle) {
    const GridPtr g = SpectralGrid::create({4, 4, 4}, kBox);
    IntegratorConfig cfg;
    cfg.dt_init = 1e-3;
    cfg.t_end = 1e-3;
    const Trajectory tr = run(g, constant_data(g, 1.0, 1.0), {0.5, 0.5, 2.0}, cfg);
    ASSERT_EQ(tr.steps, 1);
    const ConstantSolution ex = constant_solution(1.0, 1.0, 1.0, 1e-3);
    EXPECT_NEAR(tr.final_state.omega.mean(), ex.omega, 1e-14);
    EXPECT_NEAR(tr.final_state.b.mean(), ex.b, 1e-14);
}

TEST(Simulate, ZeroVelocityStaysZero) {
    const GridPtr g = SpectralGrid::create({8, 8, 8}, kBox);
    Gridded d = constant_data(g, 1.0, 1.0);
    for (std::size_t p = 0; p < d.omega.size(); ++p) d.omega[p] = 1.0 + 0.05 * std::sin(0.37 * p);
    IntegratorConfig cfg;
    cfg.t_end = 0.05;
    cfg.dt_init = 5e-3;
    const Trajectory tr = run(g, d, {1.0, 0.9, 1.1}, cfg);
    EXPECT_EQ(tr.reason, Termination::ReachedTEnd);
    for (const auto& r : tr.records) EXPECT_EQ(r.v_l2sq, 0.0);
    for (std::size_t i = 1; i < tr.records.size(); ++i) {
        EXPECT_LT(tr.records[i].w_l2sq, tr.records[i - 1].w_l2sq);
    }
}

TEST(Simulate, StopsAtExistenceTime) {
    const GridPtr g = SpectralGrid::create({4, 4, 4}, kBox);
    IntegratorConfig cfg;
    cfg.stop_at_tstar = true;
    cfg.dt_init = 1e-3;
    cfg.t_end = 1.0;
    const Trajectory tr = run(g, constant_data(g, 1.0, 1.0), {1, 1, 1}, cfg, {}, {.C_est = 1e-4});
    ASSERT_TRUE(tr.tstar.has_value());
    EXPECT_EQ(tr.reason, Termination::ReachedTStar);
    EXPECT_EQ(tr.final_state.t, *tr.tstar);
    EXPECT_EQ(tr.records.back().t, *tr.tstar);
    const double delta = h2_delta(tr.initial_state.v, tr.initial_state.omega, tr.initial_state.b);
    EXPECT_DOUBLE_EQ(*tr.tstar, existence_time(delta, {1, 1, 1}, 1.0, 1e-4));

    cfg.t_end = 0.5 * *tr.tstar;
    const Trajectory early = run(g, constant_data(g, 1.0, 1.0), {1, 1, 1}, cfg, {}, {.C_est = 1e-4});
    EXPECT_EQ(early.reason, Termination::ReachedTEnd);
    EXPECT_EQ(early.final_state.t, cfg.t_end);
}

TEST(Simulate, Deterministic) {
    const GridPtr g = SpectralGrid::create({8, 8, 8}, kBox);
    Gridded d = constant_data(g, 1.0, 1.0);
    for (std::size_t p = 0; p < d.omega.size(); ++p) {
        d.omega[p] = 1.0 + 0.05 * std::cos(0.11 * p);
        d.v[0][p] = 0.1 * std::sin(0.23 * p);
    }
    IntegratorConfig cfg;
    cfg.t_end = 0.02;
    const Trajectory a = run(g, d, {0.9, 0.9, 1.1}, cfg);
    const Trajectory b = run(g, d, {0.9, 0.9, 1.1}, cfg);
    ASSERT_EQ(a.records.size(), b.records.size());
    EXPECT_EQ(record_values(a.records.back()), record_values(b.records.back()));
    EXPECT_EQ(a.final_state.omega.c, b.final_state.omega.c);
}

TEST(Simulate, RejectsInadmissibleData) {
    const GridPtr g = SpectralGrid::create({4, 4, 4}, kBox);
    IntegratorConfig cfg;
    Gridded d = constant_data(g, 1.0, 1.0);
    EXPECT_THROW(run(g, d, {2.0, 1.0, 1.0}, cfg), AdmissibilityError);
    EXPECT_THROW(run(g, d, {1.0, 1.5, 2.0}, cfg), AdmissibilityError);
    d.v[1][0] = std::numeric_limits<double>::infinity();
    EXPECT_THROW(run(g, d, {1.0, 1.0, 1.0}, cfg), AdmissibilityError);
    d = constant_data(g, 1.0, 1.0);
    d.b.pop_back();
    EXPECT_THROW(run(g, d, {1.0, 1.0, 1.0}, cfg), std::invalid_argument);
}

TEST(Simulate, AdaptiveRk23) {
    const GridPtr g = SpectralGrid::create({4, 4, 4}, kBox);
    IntegratorConfig cfg;
    cfg.method = Method::RK23;
    cfg.dt_init = 1e-4;
    cfg.dt_max = 0.1;
    cfg.rtol = 1e-9;
    cfg.atol = 1e-12;
    cfg.t_end = 1.0;
    const Trajectory tr = run(g, constant_data(g, 1.0, 1.0), {0.5, 0.5, 2.0}, cfg);
    EXPECT_EQ(tr.reason, Termination::ReachedTEnd);
    EXPECT_EQ(tr.final_state.t, 1.0);
    const ConstantSolution ex = constant_solution(1.0, 1.0, 1.0, 1.0);
    EXPECT_NEAR(tr.final_state.omega.mean(), ex.omega, 1e-7);
    EXPECT_NEAR(tr.final_state.b.mean(), ex.b, 1e-7);
    EXPECT_LT(tr.steps, 5000);
}

TEST(Simulate, UnderflowAndBlowup) {
    const GridPtr g = SpectralGrid::create({4, 4, 4}, kBox);
    IntegratorConfig cfg;
    cfg.method = Method::RK23;
    cfg.rtol = 1e-15;
    cfg.atol = 0.0;
    cfg.dt_init = 1e-3;
    cfg.dt_min = 1e-4;
    cfg.t_end = 1.0;
    Gridded d = constant_data(g, 1.0, 1.0);
    for (std::size_t p = 0; p < d.omega.size(); ++p) d.omega[p] = 1.0 + 0.1 * std::sin(0.7 * p);
    EXPECT_EQ(run(g, d, {1.0, 0.8, 1.2}, cfg).reason, Termination::StepUnderflow);

    IntegratorConfig tight;
    tight.h2_ceiling = 1.0;
    tight.t_end = 0.1;
    const Trajectory tr = run(g, constant_data(g, 1.0, 1.0), {1, 1, 1}, tight);
    EXPECT_EQ(tr.reason, Termination::BlowupDetected);
    EXPECT_EQ(tr.steps, 1);
}
