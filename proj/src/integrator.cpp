#include "kolmo/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kolmo {

const char* to_string(Method m) {
    return m == Method::RK4 ? "rk4" : "rk23";
}

Method method_from_string(const std::string& s) {
    if (s == "rk4") return Method::RK4;
    if (s == "rk23" || s == "rk23-adaptive") return Method::RK23;
    throw std::invalid_argument("unknown integrator method '" + s + "' (expected rk4 or rk23)");
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::ReachedTEnd: return "reached_t_end";
        case Termination::ReachedTStar: return "reached_tstar";
        case Termination::BlowupDetected: return "blowup_detected";
        case Termination::StepUnderflow: return "step_underflow";
    }
    return "unknown";
}

void IntegratorConfig::validate() const {
    if (!(dt_min > 0.0)) throw std::invalid_argument("integrator.dt_min must be positive");
    if (!(dt_min <= dt_init)) throw std::invalid_argument("integrator.dt_init must be >= dt_min");
    if (!(dt_init <= dt_max)) throw std::invalid_argument("integrator.dt_init must be <= dt_max");
    if (!(t_end > 0.0)) throw std::invalid_argument("integrator.t_end must be positive");
    if (record_every < 1) throw std::invalid_argument("integrator.record_every must be >= 1");
    if (!(safety > 0.0 && safety <= 1.0)) {
        throw std::invalid_argument("integrator.safety must be in (0, 1]");
    }
    if (!(cfl > 0.0)) throw std::invalid_argument("integrator.cfl must be positive");
    if (!(rtol > 0.0) || !(atol >= 0.0)) {
        throw std::invalid_argument("integrator.rtol must be positive and atol nonnegative");
    }
    if (!(cutoff_drift >= 0.0)) {
        throw std::invalid_argument("integrator.cutoff_drift must be nonnegative");
    }
    if (!(h2_ceiling > 0.0)) throw std::invalid_argument("integrator.h2_ceiling must be positive");
}

namespace {

State combine(const State& s, double dt, std::initializer_list<std::pair<double, const RhsBundle*>> terms) {
    State out = s;
    for (const auto& [w, k] : terms) {
        if (w != 0.0) out.axpy(dt * w, *k);
    }
    return out;
}

bool finite_field(const ScalarField& f) {
    return std::all_of(f.c.begin(), f.c.end(),
                       [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

bool rk4_from(const State& s, double dt, const RhsBundle& k1, const RhsFn& rhs, State& out) {
    State y = combine(s, dt, {{0.5, &k1}});
    y.t = s.t + 0.5 * dt;
    const RhsBundle k2 = rhs(y);
    y = combine(s, dt, {{0.5, &k2}});
    y.t = s.t + 0.5 * dt;
    const RhsBundle k3 = rhs(y);
    y = combine(s, dt, {{1.0, &k3}});
    y.t = s.t + dt;
    const RhsBundle k4 = rhs(y);
    out = combine(s, dt, {{1.0 / 6.0, &k1}, {1.0 / 3.0, &k2}, {1.0 / 3.0, &k3}, {1.0 / 6.0, &k4}});
    out.t = s.t + dt;
    return all_finite(out);
}

double scaled_error(const ScalarField& a, const ScalarField& b, const ScalarField& ref,
                    double rtol, double atol) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        const double scale = atol + rtol * std::max(std::abs(ref.c[i]), std::abs(a.c[i]));
        const double d = std::abs(a.c[i] - b.c[i]);
        if (d == 0.0) continue;
        e = std::max(e, scale > 0.0 ? d / scale : std::numeric_limits<double>::infinity());
    }
    return e;
}

bool rk23_from(const State& s, double dt, const RhsBundle& k1, const RhsFn& rhs, double rtol,
               double atol, State& out, double& err) {
    State y = combine(s, dt, {{0.5, &k1}});
    y.t = s.t + 0.5 * dt;
    const RhsBundle k2 = rhs(y);
    y = combine(s, dt, {{0.75, &k2}});
    y.t = s.t + 0.75 * dt;
    const RhsBundle k3 = rhs(y);
    out = combine(s, dt, {{2.0 / 9.0, &k1}, {1.0 / 3.0, &k2}, {4.0 / 9.0, &k3}});
    out.t = s.t + dt;
    if (!all_finite(out)) {
        err = std::numeric_limits<double>::infinity();
        return false;
    }
    const RhsBundle k4 = rhs(out);
    const State z = combine(s, dt, {{7.0 / 24.0, &k1}, {0.25, &k2}, {1.0 / 3.0, &k3}, {0.125, &k4}});
    err = 0.0;
    for (int a = 0; a < 3; ++a) err = std::max(err, scaled_error(out.v[a], z.v[a], s.v[a], rtol, atol));
    err = std::max(err, scaled_error(out.omega, z.omega, s.omega, rtol, atol));
    err = std::max(err, scaled_error(out.b, z.b, s.b, rtol, atol));
    return std::isfinite(err);
}

double max_h2(const State& s) {
    return std::max({hk_norm(s.v, 2), hk_norm(s.omega, 2), hk_norm(s.b, 2)});
}

}  // namespace

bool all_finite(const State& s) {
    return finite_field(s.v[0]) && finite_field(s.v[1]) && finite_field(s.v[2]) &&
           finite_field(s.omega) && finite_field(s.b);
}

bool rk4_step(const State& s, double dt, const RhsFn& rhs, State& out) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    return rk4_from(s, dt, rhs(s), rhs, out);
}

bool rk23_step(const State& s, double dt, const RhsFn& rhs, double rtol, double atol, State& out,
               double& err) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    return rk23_from(s, dt, rhs(s), rhs, rtol, atol, out, err);
}

bool step(const State& s, double dt, const RhsFn& rhs, Method method, State& out) {
    if (method == Method::RK4) return rk4_step(s, dt, rhs, out);
    double err = 0.0;
    return rk23_step(s, dt, rhs, 1.0, 0.0, out, err);
}

void check_admissible(const std::array<std::vector<double>, 3>& v0,
                      std::span<const double> omega0, std::span<const double> b0,
                      const InitialBounds& bounds) {
    for (int a = 0; a < 3; ++a) {
        for (double x : v0[a]) {
            if (!std::isfinite(x)) {
                throw AdmissibilityError("initial velocity component " + std::to_string(a + 1) +
                                         " has non-finite values");
            }
        }
    }
    std::size_t bad_w = 0, bad_b = 0;
    double w_lo = std::numeric_limits<double>::infinity(), w_hi = -w_lo, b_lo = w_lo;
    for (double w : omega0) {
        if (!std::isfinite(w) || w < bounds.omega_min || w > bounds.omega_max) ++bad_w;
        w_lo = std::min(w_lo, w);
        w_hi = std::max(w_hi, w);
    }
    for (double b : b0) {
        if (!std::isfinite(b) || b < bounds.b_min) ++bad_b;
        b_lo = std::min(b_lo, b);
    }
    if (bad_w > 0) {
        throw AdmissibilityError("initial omega leaves [omega_min, omega_max] = [" +
                                 std::to_string(bounds.omega_min) + ", " +
                                 std::to_string(bounds.omega_max) + "] at " +
                                 std::to_string(bad_w) + " grid points (range " +
                                 std::to_string(w_lo) + " .. " + std::to_string(w_hi) + ")");
    }
    if (bad_b > 0) {
        throw AdmissibilityError("initial b falls below b_min = " + std::to_string(bounds.b_min) +
                                 " at " + std::to_string(bad_b) + " grid points (min " +
                                 std::to_string(b_lo) + ")");
    }
}

Trajectory simulate(const GridPtr& grid, const std::array<std::vector<double>, 3>& v0,
                    std::span<const double> omega0, std::span<const double> b0,
                    const ModelParams& params, const InitialBounds& bounds,
                    const IntegratorConfig& config, const SimulateOptions& opts) {
    params.validate();
    bounds.validate();
    config.validate();
    const std::size_t np = grid->physical_size();
    if (v0[0].size() != np || v0[1].size() != np || v0[2].size() != np || omega0.size() != np ||
        b0.size() != np) {
        throw std::invalid_argument("initial data does not match the grid size");
    }
    check_admissible(v0, omega0, b0, bounds);

    Trajectory traj;
    State state = project_initial_data(grid, v0, omega0, b0, 0.0);
    traj.initial_state = state;

    double t_stop = config.t_end;
    Termination natural_end = Termination::ReachedTEnd;
    if (config.stop_at_tstar) {
        const double delta = h2_delta(state.v, state.omega, state.b);
        const double tstar = existence_time(delta, bounds, params.kappa2, opts.C_est);
        traj.tstar = tstar;
        if (tstar < t_stop) {
            t_stop = tstar;
            natural_end = Termination::ReachedTStar;
        }
    }

    auto emit = [&](const State& s) {
        const CutoffSet fresh = make_cutoff_set(thresholds_at(bounds, params.kappa2, s.t));
        traj.records.push_back(record(s, fresh, params));
        if (opts.keep_states) traj.states.push_back(s);
    };
    emit(state);

    CutoffSchedule schedule(bounds, params.kappa2, config.cutoff_drift);
    const double kmax2 = grid->max_retained_k2();
    const double coef = std::max({params.nu0, params.kappa1, params.kappa3});
    double dt = config.dt_init;
    long since_record = 0;
    traj.reason = natural_end;

    while (state.t < t_stop) {
        const CutoffSet cut = schedule.at(state.t);
        const RhsFn rhs = [&](const State& s) { return galerkin_rhs(s, cut, params); };
        const RhsBundle k1 = rhs(state);

        double cap = config.dt_max;
        if (k1.mu_max > 0.0 && kmax2 > 0.0) {
            cap = std::min(cap, config.cfl / (k1.mu_max * kmax2 * coef));
        }
        double h = config.method == Method::RK4 ? std::min(config.dt_init, cap) : std::min(dt, cap);
        const double remaining = t_stop - state.t;
        bool last = false;
        if (h >= remaining * (1.0 - 1e-9)) {
            h = remaining;
            last = true;
        } else if (h < config.dt_min) {
            traj.reason = Termination::StepUnderflow;
            break;
        }

        State next;
        bool ok = false;
        if (config.method == Method::RK4) {
            ok = rk4_from(state, h, k1, rhs, next);
        } else {
            double err = 0.0;
            ok = rk23_from(state, h, k1, rhs, config.rtol, config.atol, next, err);
            if (ok && err > 1.0) {
                ++traj.rejected;
                dt = h * std::max(0.2, config.safety * std::pow(err, -1.0 / 3.0));
                if (dt < config.dt_min) {
                    traj.reason = Termination::StepUnderflow;
                    break;
                }
                continue;
            }
            if (ok) {
                const double grow = err > 0.0 ? config.safety * std::pow(err, -1.0 / 3.0) : 5.0;
                dt = std::min(config.dt_max, h * std::clamp(grow, 0.2, 5.0));
                if (last) dt = std::max(dt, config.dt_min);
            }
        }
        if (last) next.t = t_stop;
        ++traj.steps;
        if (!ok || !(max_h2(next) <= config.h2_ceiling)) {
            traj.reason = Termination::BlowupDetected;
            if (ok) {
                emit(next);
                state = std::move(next);
            }
            break;
        }
        state = std::move(next);
        if (++since_record >= config.record_every || last) {
            emit(state);
            since_record = 0;
        }
        if (last) break;
    }
    traj.final_state = state;
    return traj;
}

}  // namespace kolmo
