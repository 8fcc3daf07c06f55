#pragma once

// Model parameters, initial-data bounds, the decaying a priori thresholds
// and the existence-time lower bound of the truncated Kolmogorov system.

#include <array>

namespace kolmo {

struct ModelParams {
    double nu0 = 1.0;
    double kappa1 = 1.0;
    double kappa2 = 1.0;
    double kappa3 = 1.0;
    double kappa4 = 1.0;
    std::array<double, 3> L{6.283185307179586, 6.283185307179586, 6.283185307179586};

    /// Throws std::invalid_argument naming the first nonpositive field.
    void validate() const;
    bool operator==(const ModelParams&) const = default;
};

/// Pointwise bounds of the initial data: b0 >= b_min, omega_min <= omega0 <= omega_max.
struct InitialBounds {
    double b_min = 1.0;
    double omega_min = 1.0;
    double omega_max = 1.0;

    void validate() const;
    bool operator==(const InitialBounds&) const = default;
};

/// Time-decayed images of the initial bounds. The exact solution stays in
/// [omega_star, omega_dstar] x [b_star, inf); mu_star bounds the truncated
/// viscosity from below.
struct Thresholds {
    double t = 0.0;
    double b_star = 0.0;
    double omega_star = 0.0;
    double omega_dstar = 0.0;
    double mu_star = 0.0;
};

Thresholds thresholds_at(const InitialBounds& bounds, double kappa2, double t);

/// Closed form of mu_star(t) written in terms of the initial bounds.
double mu_star_closed_form(const InitialBounds& bounds, double kappa2, double t);

/// d/dt b_star(t).
double b_star_rate(const InitialBounds& bounds, double kappa2, double t);

struct QConstants {
    double Q1 = 0.0;
    double Q2 = 0.0;
    double Q3 = 0.0;
};

QConstants q_constants(const InitialBounds& bounds);

struct BetaExponents {
    double beta = 0.0;
    double beta_bar = 0.0;
};

BetaExponents beta_exponents(double kappa2);

struct EstimateConstants {
    QConstants q;
    BetaExponents exps;
    double C_est = 1.0;
};

EstimateConstants estimate_constants(const InitialBounds& bounds, double kappa2, double C_est);

/// Lower bound T* on the lifespan of the regular solution, as the inversion of
///   (1+delta)^-14 = 15 C Q3 / ((beta_bar+1) k2 wmax) * ((1 + k2 wmax T)^(beta_bar+1) - 1)
/// where delta is the summed squared H^2 norms of the initial data. C_est is
/// the unquantified constant of the estimates; the result is a formula
/// evaluation, not a certified bound.
double existence_time(double delta, const InitialBounds& bounds, double kappa2, double C_est);

/// Right-hand side of the defining identity evaluated at T. Substituting
/// T = existence_time(...) reproduces (1+delta)^-14.
double existence_identity_rhs(double T, const InitialBounds& bounds, double kappa2, double C_est);

/// Coordinate box of (omega_min, omega_max, b_min) triples.
struct BoundsBox {
    std::array<double, 2> omega_min;
    std::array<double, 2> omega_max;
    std::array<double, 2> b_min;
};

/// Infimum of existence_time over the box, taken over corners plus a
/// `scan_per_axis`^3 grid scan (T* is only piecewise monotone in the bounds).
double uniform_floor(double delta, const BoundsBox& box, double kappa2, double C_est,
                     int scan_per_axis = 16);

}  // namespace kolmo
