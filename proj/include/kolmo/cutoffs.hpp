#pragma once

// Smooth truncations that keep b and omega away from zero (and omega from
// infinity) inside the approximate system. All four families are affine
// rescalings of one mollified ramp built from f(x) = exp(-1/x).

#include <span>
#include <vector>

#include "kolmo/model.hpp"

namespace kolmo {

/// exp(-1/x) for x > 0, zero elsewhere.
double bump_f(double x);

/// Normalized smooth ramp eta~(x) = (1/c) * int_0^x f(y) f(1-y) dy.
///
/// eta~ is tabulated once on [0, 1/2] with composite Gauss-Legendre
/// quadrature and evaluated by cubic Hermite interpolation against the exact
/// derivative f(x)f(1-x)/c; the upper half uses eta~(x) = 1 - eta~(1-x).
/// Derivatives are closed forms.
class BumpKernel {
public:
    static const BumpKernel& instance();

    double c_norm() const { return c_norm_; }
    double eta_tilde(double x) const;
    double eta_tilde_d1(double x) const;
    double eta_tilde_d2(double x) const;

    static constexpr int kKnots = 4096;

private:
    BumpKernel();
    double half_eval(double x) const;

    double c_norm_ = 0.0;
    double step_ = 0.0;
    std::vector<double> values_;  // eta~ at knots on [0, 1/2]
    std::vector<double> slopes_;
};

double eta_tilde(double x);

/// h(x) = (1 - eta(x)) f(x) + eta(x) g(x) with eta(x) = eta~(2(x - 1/4)):
/// zero for x <= 0, identity for x >= 3/4.
double blend_h(double x);
double blend_h_d1(double x);
double blend_h_d2(double x);

enum class CutoffKind { PsiUpper, PhiTwoSided, psiLower, phiLower };

const char* to_string(CutoffKind kind);

/// One truncation function with its thresholds frozen at construction.
class Cutoff {
public:
    Cutoff() = default;

    CutoffKind kind() const { return kind_; }
    double lower_threshold() const { return lo_; }
    double upper_threshold() const { return hi_; }

    double operator()(double x) const { return value(x); }
    double value(double x) const;
    double d1(double x) const;
    double d2(double x) const;

    /// order must be 1 or 2.
    double derivative(int order, double x) const;

    /// Interval outside of which the function is constant or the identity.
    /// For PhiTwoSided this is the lower transition; see upper_transition().
    std::pair<double, double> transition() const;
    std::pair<double, double> upper_transition() const;

    friend Cutoff make_psi_upper(double b_star);
    friend Cutoff make_phi_twosided(double omega_star, double omega_dstar);
    friend Cutoff make_psi_lower(double b_star);
    friend Cutoff make_phi_lower(double omega_star);

private:
    Cutoff(CutoffKind kind, double lo, double hi) : kind_(kind), lo_(lo), hi_(hi) {}

    CutoffKind kind_ = CutoffKind::PsiUpper;
    double lo_ = 1.0;
    double hi_ = 1.0;
};

Cutoff make_psi_upper(double b_star);
Cutoff make_phi_twosided(double omega_star, double omega_dstar);
Cutoff make_psi_lower(double b_star);
Cutoff make_phi_lower(double omega_star);

/// Sup over a dense sample of the transition regions of |first derivative|
/// and threshold * |second derivative|.
double estimate_c0(const Cutoff& family, int samples = 100000);

/// The four families built from the thresholds at one instant.
struct CutoffSet {
    Thresholds thresholds;
    Cutoff Psi;  // upper, for the viscosity numerator
    Cutoff Phi;  // two-sided, for the viscosity denominator
    Cutoff psi;  // lower, in the b reaction term
    Cutoff phi;  // lower, in the omega reaction term

    double mu(double b, double omega) const { return Psi(b) / Phi(omega); }
};

CutoffSet make_cutoff_set(const Thresholds& th);

/// Maximum c0 estimate over the four families.
double estimate_c0(const CutoffSet& set, int samples = 100000);

}  // namespace kolmo
