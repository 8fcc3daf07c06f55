#pragma once

// Brute-force references for the fast paths: Galerkin coefficients as
// literal quadrature inner products against each retained basis function,
// the closed-form constant-field solution, and an adaptive quadrature of the
// ramp normalization.

#include <random>
#include <utility>

#include "kolmo/galerkin.hpp"

namespace kolmo {

struct QuadratureSpec {
    int points = 64;  // per axis, tensor-product trapezoid on the periodic box
};

/// Galerkin right-hand side of `state` computed mode by mode: every field is
/// synthesized by direct Fourier sums at the quadrature points and each
/// equation is tested against the retained basis (exp(ik.x) for scalars,
/// two unit polarizations orthogonal to k for the velocity). Throws
/// std::invalid_argument when more than `max_basis` basis functions are
/// retained or the quadrature is too coarse for the retained modes.
RhsBundle rhs_bruteforce(const State& state, const CutoffSet& cutoffs, const ModelParams& params,
                         const QuadratureSpec& spec = {}, int max_basis = 200);

/// Number of real basis functions of the Galerkin space on this grid.
int basis_size(const SpectralGrid& grid);

/// Random smooth state on the retained shells: v solenoidal with coefficients
/// up to 0.3, omega near 1 and b near 1.2 with coefficients up to 0.05. With
/// `constant_mu` omega and b are exactly constant so that mu is too.
State random_oracle_state(const GridPtr& grid, std::mt19937_64& rng, bool constant_mu);

struct ConstantSolution {
    double omega = 0.0;
    double b = 0.0;
};

/// Solution of d omega/dt = -k2 omega^2, db/dt = -b omega from (omega_bar, b_bar).
ConstantSolution constant_solution(double b_bar, double omega_bar, double kappa2, double t);

/// int_0^1 f(y) f(1-y) dy by adaptive Gauss-Kronrod.
double eta_norm_quadrature(double tolerance = 1e-14);

/// Relative coefficient-wise distance max|a-b| / max(|b|, floor).
double relative_distance(const ScalarField& a, const ScalarField& b, double floor = 1e-300);
double relative_distance(const RhsBundle& a, const RhsBundle& b, double floor = 1e-300);

}  // namespace kolmo
