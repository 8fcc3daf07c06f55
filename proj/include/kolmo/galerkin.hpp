#pragma once

// Right-hand side of the truncated Galerkin system for (v, omega, b).
//
//   dv/dt     = P[ -div(v (x) v) + nu0 div(mu D(v)) ]
//   domega/dt = P[ -div(omega v) + k1 div(mu grad omega) - k2 phi(omega)^2 ]
//   db/dt     = P[ -div(b v) + k3 div(mu grad b) - psi(b) phi(omega) + k4 mu |D(v)|^2 ]
//
// with mu = Psi(b) / Phi(omega) and P the shell truncation (plus the Leray
// projection for v). Every product is formed on the oversampled quadrature
// grid, so quadratic terms are alias-free on the retained shells.

#include <array>
#include <span>
#include <vector>

#include "kolmo/cutoffs.hpp"
#include "kolmo/model.hpp"
#include "kolmo/spectral.hpp"

namespace kolmo {

struct RhsBundle;

struct State {
    VelocityField v;
    ScalarField omega;
    ScalarField b;
    double t = 0.0;

    const GridPtr& grid() const { return omega.grid; }

    /// this += s * d, the update used by every RK stage.
    void axpy(double s, const RhsBundle& d);
};

struct RhsBundle {
    VelocityField dv;
    ScalarField domega;
    ScalarField db;
    double mu_max = 0.0;  // over the quadrature grid, for step control
    double mu_min = 0.0;
};

/// Psi(b)/Phi(omega) on the quadrature grid.
std::vector<double> mu_field(const State& state, const CutoffSet& cutoffs);

VelocityField rhs_velocity(const State& state, std::span<const double> mu,
                           const ModelParams& params);
ScalarField rhs_omega(const State& state, std::span<const double> mu, const CutoffSet& cutoffs,
                      const ModelParams& params);
ScalarField rhs_b(const State& state, std::span<const double> mu, const CutoffSet& cutoffs,
                  const ModelParams& params);

/// All three components with shared transforms.
RhsBundle galerkin_rhs(const State& state, const CutoffSet& cutoffs, const ModelParams& params);

/// L2 projection of gridded initial data (N grid) onto the retained shells;
/// the velocity is additionally Leray-projected. Throws on non-finite input.
State project_initial_data(const GridPtr& grid, const std::array<std::vector<double>, 3>& v0,
                           std::span<const double> omega0, std::span<const double> b0,
                           double t0 = 0.0);

/// Rebuilds the cutoff families only when a threshold has drifted by more
/// than `drift` (relative) since the last build. drift = 0 rebuilds on every
/// new time.
class CutoffSchedule {
public:
    CutoffSchedule(const InitialBounds& bounds, double kappa2, double drift = 1e-3);

    const CutoffSet& at(double t);
    int rebuilds() const { return rebuilds_; }

private:
    InitialBounds bounds_;
    double kappa2_;
    double drift_;
    CutoffSet current_;
    bool built_ = false;
    int rebuilds_ = 0;
};

}  // namespace kolmo
