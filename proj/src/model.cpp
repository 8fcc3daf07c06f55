#include "kolmo/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace kolmo {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string(name) + " must be positive and finite");
    }
}

}  // namespace

void ModelParams::validate() const {
    require_positive(nu0, "model.nu0");
    require_positive(kappa1, "model.kappa1");
    require_positive(kappa2, "model.kappa2");
    require_positive(kappa3, "model.kappa3");
    require_positive(kappa4, "model.kappa4");
    require_positive(L[0], "model.L1");
    require_positive(L[1], "model.L2");
    require_positive(L[2], "model.L3");
}

void InitialBounds::validate() const {
    require_positive(b_min, "bounds.b_min");
    require_positive(omega_min, "bounds.omega_min");
    require_positive(omega_max, "bounds.omega_max");
    if (omega_min > omega_max) {
        throw std::invalid_argument("bounds.omega_min must not exceed bounds.omega_max");
    }
}

Thresholds thresholds_at(const InitialBounds& bounds, double kappa2, double t) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument("thresholds_at: t must be nonnegative");
    }
    require_positive(kappa2, "kappa2");
    bounds.validate();

    Thresholds th;
    th.t = t;
    const double grow_max = 1.0 + kappa2 * bounds.omega_max * t;
    const double grow_min = 1.0 + kappa2 * bounds.omega_min * t;
    th.b_star = bounds.b_min * std::pow(grow_max, -1.0 / kappa2);
    th.omega_star = bounds.omega_min / grow_min;
    th.omega_dstar = bounds.omega_max / grow_max;
    th.mu_star = 0.25 * th.b_star / th.omega_dstar;
    return th;
}

double mu_star_closed_form(const InitialBounds& bounds, double kappa2, double t) {
    const double grow_max = 1.0 + kappa2 * bounds.omega_max * t;
    return 0.25 * (bounds.b_min / bounds.omega_max) * std::pow(grow_max, 1.0 - 1.0 / kappa2);
}

double b_star_rate(const InitialBounds& bounds, double kappa2, double t) {
    const double grow_max = 1.0 + kappa2 * bounds.omega_max * t;
    return -bounds.omega_max * bounds.b_min * std::pow(grow_max, -1.0 / kappa2 - 1.0);
}

QConstants q_constants(const InitialBounds& bounds) {
    bounds.validate();
    const double b = bounds.b_min;
    const double wmin = bounds.omega_min;
    const double wmax = bounds.omega_max;
    const double inner = 1.0 + std::pow(b, -3.0) + std::pow(wmin, -3.0);

    QConstants q;
    q.Q1 = (b / wmin) * inner;
    q.Q2 = (1.0 + std::pow(wmax / b, 3.0)) * ((b / wmin) * std::pow(inner, 10.0) + 1.0);
    q.Q3 = q.Q1 * q.Q1 + q.Q2 + 1.0;
    return q;
}

BetaExponents beta_exponents(double kappa2) {
    require_positive(kappa2, "kappa2");
    BetaExponents e;
    e.beta = std::max(1.0 / kappa2 - 1.0, 3.0 / kappa2 - 3.0);
    e.beta_bar = 10.0 * std::max(1.0 + 1.0 / kappa2, 3.0) + e.beta;
    return e;
}

EstimateConstants estimate_constants(const InitialBounds& bounds, double kappa2, double C_est) {
    require_positive(C_est, "C_est");
    return EstimateConstants{q_constants(bounds), beta_exponents(kappa2), C_est};
}

double existence_time(double delta, const InitialBounds& bounds, double kappa2, double C_est) {
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw std::invalid_argument("existence_time: delta must be finite and nonnegative");
    }
    const EstimateConstants ec = estimate_constants(bounds, kappa2, C_est);
    const double p = ec.exps.beta_bar + 1.0;
    const double rate = kappa2 * bounds.omega_max;
    // (1+delta)^-14 via exp(-14 log1p(delta)) stays accurate for tiny delta.
    const double lhs = std::exp(-14.0 * std::log1p(delta));
    const double x = p * rate * lhs / (15.0 * C_est * ec.q.Q3);
    return std::expm1(std::log1p(x) / p) / rate;
}

double existence_identity_rhs(double T, const InitialBounds& bounds, double kappa2, double C_est) {
    const EstimateConstants ec = estimate_constants(bounds, kappa2, C_est);
    const double p = ec.exps.beta_bar + 1.0;
    const double rate = kappa2 * bounds.omega_max;
    return 15.0 * C_est * ec.q.Q3 / (p * rate) * std::expm1(p * std::log1p(rate * T));
}

double uniform_floor(double delta, const BoundsBox& box, double kappa2, double C_est,
                     int scan_per_axis) {
    auto check_interval = [](const std::array<double, 2>& iv, const char* name) {
        if (!(iv[0] > 0.0) || !(iv[0] <= iv[1]) || !std::isfinite(iv[1])) {
            throw std::invalid_argument(std::string("uniform_floor: invalid interval for ") + name);
        }
    };
    check_interval(box.omega_min, "omega_min");
    check_interval(box.omega_max, "omega_max");
    check_interval(box.b_min, "b_min");
    if (box.omega_min[1] > box.omega_max[0]) {
        throw std::invalid_argument(
            "uniform_floor: box leaves the admissible set omega_min <= omega_max");
    }
    if (scan_per_axis < 2) {
        throw std::invalid_argument("uniform_floor: scan_per_axis must be at least 2");
    }

    auto at = [](const std::array<double, 2>& iv, int i, int n) {
        if (i == 0) return iv[0];
        if (i == n - 1) return iv[1];
        return iv[0] + (iv[1] - iv[0]) * static_cast<double>(i) / static_cast<double>(n - 1);
    };

    // The scan's endpoints are the corners, so corners are always included.
    double best = std::numeric_limits<double>::infinity();
    const int n = scan_per_axis;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                const InitialBounds b{at(box.b_min, k, n), at(box.omega_min, i, n),
                                      at(box.omega_max, j, n)};
                best = std::min(best, existence_time(delta, b, kappa2, C_est));
            }
        }
    }
    return best;
}

}  // namespace kolmo
