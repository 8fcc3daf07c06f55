#pragma once

// Explicit time stepping of the truncated system with trajectory recording.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kolmo/diagnostics.hpp"
#include "kolmo/galerkin.hpp"

namespace kolmo {

enum class Method { RK4, RK23 };

const char* to_string(Method m);
Method method_from_string(const std::string& s);

struct IntegratorConfig {
    Method method = Method::RK4;
    double dt_init = 1e-3;
    double dt_min = 1e-10;
    double dt_max = 1e-2;
    double safety = 0.9;
    double t_end = 1.0;
    int record_every = 1;
    bool stop_at_tstar = false;
    /// Diffusive step cap: dt <= cfl / (max mu * max |k|^2 * max coefficient).
    double cfl = 0.5;
    double rtol = 1e-8;
    double atol = 1e-10;
    double cutoff_drift = 1e-3;
    double h2_ceiling = 1e12;

    void validate() const;
    bool operator==(const IntegratorConfig&) const = default;
};

enum class Termination { ReachedTEnd, ReachedTStar, BlowupDetected, StepUnderflow };

const char* to_string(Termination t);

struct Trajectory {
    /// Recorded states (only when SimulateOptions::keep_states is set).
    std::vector<State> states;
    State initial_state;
    State final_state;
    std::vector<DiagnosticsRecord> records;
    Termination reason = Termination::ReachedTEnd;
    std::optional<double> tstar;
    long steps = 0;
    long rejected = 0;
};

/// Initial gridded data violating the pointwise bounds or non-finite.
class AdmissibilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using RhsFn = std::function<RhsBundle(const State&)>;

/// One classical RK4 step. Returns false if the result is not finite.
bool rk4_step(const State& s, double dt, const RhsFn& rhs, State& out);

/// One Bogacki-Shampine 3(2) step; `err` receives the scaled error norm.
bool rk23_step(const State& s, double dt, const RhsFn& rhs, double rtol, double atol, State& out,
               double& err);

/// Generic entry: one step of `method`, with rk23 taken at fixed dt.
bool step(const State& s, double dt, const RhsFn& rhs, Method method, State& out);

bool all_finite(const State& s);

/// Throws AdmissibilityError when the gridded data violates
/// b0 >= b_min, omega_min <= omega0 <= omega_max, or is non-finite.
void check_admissible(const std::array<std::vector<double>, 3>& v0,
                      std::span<const double> omega0, std::span<const double> b0,
                      const InitialBounds& bounds);

struct SimulateOptions {
    /// Only consulted when stop_at_tstar is set; T* uses h2_delta of the
    /// projected initial state.
    double C_est = 1.0;
    /// Keep every recorded State in the trajectory (records are always kept).
    bool keep_states = true;
};

Trajectory simulate(const GridPtr& grid, const std::array<std::vector<double>, 3>& v0,
                    std::span<const double> omega0, std::span<const double> b0,
                    const ModelParams& params, const InitialBounds& bounds,
                    const IntegratorConfig& config, const SimulateOptions& opts = {});

}  // namespace kolmo
