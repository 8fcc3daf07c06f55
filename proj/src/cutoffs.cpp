#include "kolmo/cutoffs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

namespace kolmo {

namespace {

// f(y) f(1-y), the ramp density before normalization.
double ramp_density(double y) {
    if (y <= 0.0 || y >= 1.0) return 0.0;
    return std::exp(-1.0 / y - 1.0 / (1.0 - y));
}

double ramp_density_d1(double y) {
    if (y <= 0.0 || y >= 1.0) return 0.0;
    const double inv = 1.0 / y;
    const double invc = 1.0 / (1.0 - y);
    return ramp_density(y) * (inv * inv - invc * invc);
}

double f_d1(double x) {
    if (x <= 0.0) return 0.0;
    return bump_f(x) / (x * x);
}

double f_d2(double x) {
    if (x <= 0.0) return 0.0;
    const double x2 = x * x;
    return bump_f(x) * (1.0 - 2.0 * x) / (x2 * x2);
}

void require_positive_threshold(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string(what) + ": threshold must be positive");
    }
}

}  // namespace

double bump_f(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

BumpKernel::BumpKernel() {
    using boost::math::quadrature::gauss;
    const int n = kKnots / 2;
    step_ = 0.5 / n;
    values_.assign(n + 1, 0.0);
    slopes_.assign(n + 1, 0.0);

    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a = i * step_;
        acc += gauss<double, 15>::integrate(ramp_density, a, a + step_);
        values_[i + 1] = acc;
    }
    // Integrand symmetric about 1/2.
    c_norm_ = 2.0 * acc;
    for (int i = 0; i <= n; ++i) {
        values_[i] /= c_norm_;
        slopes_[i] = ramp_density(i * step_) / c_norm_;
    }
    values_[n] = 0.5;
}

const BumpKernel& BumpKernel::instance() {
    static const BumpKernel kernel;
    return kernel;
}

double BumpKernel::half_eval(double x) const {
    const int n = static_cast<int>(values_.size()) - 1;
    int i = static_cast<int>(x / step_);
    i = std::clamp(i, 0, n - 1);
    const double t = (x - i * step_) / step_;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * values_[i] + h10 * step_ * slopes_[i] + h01 * values_[i + 1] +
           h11 * step_ * slopes_[i + 1];
}

double BumpKernel::eta_tilde(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (x <= 0.5) return half_eval(x);
    return 1.0 - half_eval(1.0 - x);
}

double BumpKernel::eta_tilde_d1(double x) const { return ramp_density(x) / c_norm_; }

double BumpKernel::eta_tilde_d2(double x) const { return ramp_density_d1(x) / c_norm_; }

double eta_tilde(double x) { return BumpKernel::instance().eta_tilde(x); }

double blend_h(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 0.75) return x;
    const double eta = eta_tilde(2.0 * (x - 0.25));
    return (1.0 - eta) * bump_f(x) + eta * x;
}

double blend_h_d1(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 0.75) return 1.0;
    const auto& k = BumpKernel::instance();
    const double s = 2.0 * (x - 0.25);
    const double eta = k.eta_tilde(s);
    const double deta = 2.0 * k.eta_tilde_d1(s);
    return deta * (x - bump_f(x)) + (1.0 - eta) * f_d1(x) + eta;
}

double blend_h_d2(double x) {
    if (x <= 0.0 || x >= 0.75) return 0.0;
    const auto& k = BumpKernel::instance();
    const double s = 2.0 * (x - 0.25);
    const double eta = k.eta_tilde(s);
    const double deta = 2.0 * k.eta_tilde_d1(s);
    const double ddeta = 4.0 * k.eta_tilde_d2(s);
    return ddeta * (x - bump_f(x)) + 2.0 * deta * (1.0 - f_d1(x)) + (1.0 - eta) * f_d2(x);
}

const char* to_string(CutoffKind kind) {
    switch (kind) {
        case CutoffKind::PsiUpper: return "Psi";
        case CutoffKind::PhiTwoSided: return "Phi";
        case CutoffKind::psiLower: return "psi";
        case CutoffKind::phiLower: return "phi";
    }
    return "?";
}

Cutoff make_psi_upper(double b_star) {
    require_positive_threshold(b_star, "make_psi_upper");
    return Cutoff(CutoffKind::PsiUpper, b_star, b_star);
}

Cutoff make_phi_twosided(double omega_star, double omega_dstar) {
    require_positive_threshold(omega_star, "make_phi_twosided");
    require_positive_threshold(omega_dstar, "make_phi_twosided");
    if (omega_star > omega_dstar) {
        throw std::invalid_argument("make_phi_twosided: omega_star exceeds omega_dstar");
    }
    return Cutoff(CutoffKind::PhiTwoSided, omega_star, omega_dstar);
}

Cutoff make_psi_lower(double b_star) {
    require_positive_threshold(b_star, "make_psi_lower");
    return Cutoff(CutoffKind::psiLower, b_star, b_star);
}

Cutoff make_phi_lower(double omega_star) {
    require_positive_threshold(omega_star, "make_phi_lower");
    return Cutoff(CutoffKind::phiLower, omega_star, omega_star);
}

// Upper ramp: theta/2 plateau, identity above theta.
//   value = theta/2 + theta/2 * h(2x/theta - 1)
// Lower ramp: x * eta~(2x/theta - 1).
// Two-sided cap above hi: 2hi - hi * h((2hi - x)/hi).

double Cutoff::value(double x) const {
    switch (kind_) {
        case CutoffKind::PsiUpper: {
            const double half = 0.5 * lo_;
            return half + half * blend_h(x / half - 1.0);
        }
        case CutoffKind::PhiTwoSided: {
            if (x <= hi_) {
                const double half = 0.5 * lo_;
                return half + half * blend_h(x / half - 1.0);
            }
            return 2.0 * hi_ - hi_ * blend_h((2.0 * hi_ - x) / hi_);
        }
        case CutoffKind::psiLower:
        case CutoffKind::phiLower: {
            if (x <= 0.5 * lo_) return 0.0;
            if (x >= lo_) return x;
            return x * eta_tilde(2.0 * x / lo_ - 1.0);
        }
    }
    return x;
}

double Cutoff::d1(double x) const {
    switch (kind_) {
        case CutoffKind::PsiUpper:
            return blend_h_d1(2.0 * x / lo_ - 1.0);
        case CutoffKind::PhiTwoSided:
            if (x <= hi_) return blend_h_d1(2.0 * x / lo_ - 1.0);
            return blend_h_d1((2.0 * hi_ - x) / hi_);
        case CutoffKind::psiLower:
        case CutoffKind::phiLower: {
            if (x <= 0.5 * lo_) return 0.0;
            if (x >= lo_) return 1.0;
            const auto& k = BumpKernel::instance();
            const double r = 2.0 * x / lo_ - 1.0;
            return k.eta_tilde(r) + x * (2.0 / lo_) * k.eta_tilde_d1(r);
        }
    }
    return 1.0;
}

double Cutoff::d2(double x) const {
    switch (kind_) {
        case CutoffKind::PsiUpper:
            return (2.0 / lo_) * blend_h_d2(2.0 * x / lo_ - 1.0);
        case CutoffKind::PhiTwoSided:
            if (x <= hi_) return (2.0 / lo_) * blend_h_d2(2.0 * x / lo_ - 1.0);
            return -blend_h_d2((2.0 * hi_ - x) / hi_) / hi_;
        case CutoffKind::psiLower:
        case CutoffKind::phiLower: {
            if (x <= 0.5 * lo_ || x >= lo_) return 0.0;
            const auto& k = BumpKernel::instance();
            const double r = 2.0 * x / lo_ - 1.0;
            return (4.0 / lo_) * k.eta_tilde_d1(r) + (4.0 * x / (lo_ * lo_)) * k.eta_tilde_d2(r);
        }
    }
    return 0.0;
}

double Cutoff::derivative(int order, double x) const {
    if (order == 1) return d1(x);
    if (order == 2) return d2(x);
    throw std::invalid_argument("Cutoff::derivative: order must be 1 or 2");
}

std::pair<double, double> Cutoff::transition() const { return {0.5 * lo_, lo_}; }

std::pair<double, double> Cutoff::upper_transition() const {
    if (kind_ == CutoffKind::PhiTwoSided) return {hi_, 2.0 * hi_};
    return transition();
}

double estimate_c0(const Cutoff& family, int samples) {
    if (samples < 2) throw std::invalid_argument("estimate_c0: need at least 2 samples");
    const double scale = family.lower_threshold();
    double c0 = 1.0;  // every family is the identity somewhere

    auto scan = [&](std::pair<double, double> region, int n) {
        const double a = region.first;
        const double w = region.second - region.first;
        for (int i = 0; i <= n; ++i) {
            const double x = a + w * static_cast<double>(i) / n;
            c0 = std::max(c0, std::abs(family.d1(x)));
            c0 = std::max(c0, scale * std::abs(family.d2(x)));
        }
    };

    if (family.kind() == CutoffKind::PhiTwoSided) {
        scan(family.transition(), samples / 2);
        scan(family.upper_transition(), samples / 2);
    } else {
        scan(family.transition(), samples);
    }
    return c0;
}

CutoffSet make_cutoff_set(const Thresholds& th) {
    CutoffSet set;
    set.thresholds = th;
    set.Psi = make_psi_upper(th.b_star);
    set.Phi = make_phi_twosided(th.omega_star, th.omega_dstar);
    set.psi = make_psi_lower(th.b_star);
    set.phi = make_phi_lower(th.omega_star);
    return set;
}

double estimate_c0(const CutoffSet& set, int samples) {
    return std::max({estimate_c0(set.Psi, samples), estimate_c0(set.Phi, samples),
                     estimate_c0(set.psi, samples), estimate_c0(set.phi, samples)});
}

}  // namespace kolmo
