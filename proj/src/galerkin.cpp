#include "kolmo/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kolmo {

namespace {

using QuadVec = std::array<std::vector<double>, 3>;

QuadVec quad(const std::array<ScalarField, 3>& u) {
    return {to_quadrature(u[0]), to_quadrature(u[1]), to_quadrature(u[2])};
}

std::array<std::vector<double>, 6> quad(const SymTensor& t) {
    std::array<std::vector<double>, 6> out;
    for (int p = 0; p < 6; ++p) out[p] = to_quadrature(t[p]);
    return out;
}

double frobenius_sq_at(const std::array<std::vector<double>, 6>& d, std::size_t i) {
    return d[0][i] * d[0][i] + d[1][i] * d[1][i] + d[2][i] * d[2][i] +
           2.0 * (d[3][i] * d[3][i] + d[4][i] * d[4][i] + d[5][i] * d[5][i]);
}

VelocityField velocity_rhs_from(const GridPtr& grid, const QuadVec& vq,
                                const std::array<std::vector<double>, 6>& dq,
                                std::span<const double> mu, double nu0) {
    const std::size_t nq = grid->quadrature_size();
    SymTensor flux;
    std::vector<double> work(nq);
    for (int p = 0; p < 6; ++p) {
        const int j = kSymPairs[p][0];
        const int l = kSymPairs[p][1];
        for (std::size_t i = 0; i < nq; ++i) {
            work[i] = -vq[j][i] * vq[l][i] + nu0 * mu[i] * dq[p][i];
        }
        flux[p] = from_quadrature(grid, work);
    }
    return truncate(leray_project(divergence(flux)));
}

// P[ -div(s v) + coeff div(mu grad s) + source ]
ScalarField scalar_rhs_from(const GridPtr& grid, const std::vector<double>& sq, const QuadVec& gq,
                            const QuadVec& vq, std::span<const double> mu, double coeff,
                            const std::vector<double>& source) {
    const std::size_t nq = grid->quadrature_size();
    std::array<ScalarField, 3> flux;
    std::vector<double> work(nq);
    for (int a = 0; a < 3; ++a) {
        for (std::size_t i = 0; i < nq; ++i) work[i] = -sq[i] * vq[a][i] + coeff * mu[i] * gq[a][i];
        flux[a] = from_quadrature(grid, work);
    }
    ScalarField out = divergence(flux);
    out += from_quadrature(grid, source);
    return truncate(out);
}

void check_grid(std::span<const double> mu, const GridPtr& grid) {
    if (mu.size() != grid->quadrature_size()) {
        throw std::invalid_argument("mu must live on the quadrature grid");
    }
}

}  // namespace

void State::axpy(double s, const RhsBundle& d) {
    v.axpy(s, d.dv);
    omega.axpy(s, d.domega);
    b.axpy(s, d.db);
}

std::vector<double> mu_field(const State& state, const CutoffSet& cutoffs) {
    const auto bq = to_quadrature(state.b);
    const auto wq = to_quadrature(state.omega);
    std::vector<double> mu(bq.size());
    for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = cutoffs.mu(bq[i], wq[i]);
    return mu;
}

VelocityField rhs_velocity(const State& state, std::span<const double> mu,
                           const ModelParams& params) {
    const GridPtr& grid = state.grid();
    check_grid(mu, grid);
    return velocity_rhs_from(grid, quad(state.v.u), quad(sym_gradient(state.v)), mu, params.nu0);
}

ScalarField rhs_omega(const State& state, std::span<const double> mu, const CutoffSet& cutoffs,
                      const ModelParams& params) {
    const GridPtr& grid = state.grid();
    check_grid(mu, grid);
    const auto wq = to_quadrature(state.omega);
    std::vector<double> source(wq.size());
    for (std::size_t i = 0; i < wq.size(); ++i) {
        const double p = cutoffs.phi(wq[i]);
        source[i] = -params.kappa2 * p * p;
    }
    return scalar_rhs_from(grid, wq, quad(gradient(state.omega)), quad(state.v.u), mu,
                           params.kappa1, source);
}

ScalarField rhs_b(const State& state, std::span<const double> mu, const CutoffSet& cutoffs,
                  const ModelParams& params) {
    const GridPtr& grid = state.grid();
    check_grid(mu, grid);
    const auto bq = to_quadrature(state.b);
    const auto wq = to_quadrature(state.omega);
    const auto dq = quad(sym_gradient(state.v));
    std::vector<double> source(bq.size());
    for (std::size_t i = 0; i < bq.size(); ++i) {
        source[i] = -cutoffs.psi(bq[i]) * cutoffs.phi(wq[i]) +
                    params.kappa4 * mu[i] * frobenius_sq_at(dq, i);
    }
    return scalar_rhs_from(grid, bq, quad(gradient(state.b)), quad(state.v.u), mu, params.kappa3,
                           source);
}

RhsBundle galerkin_rhs(const State& state, const CutoffSet& cutoffs, const ModelParams& params) {
    const GridPtr& grid = state.grid();
    const std::size_t nq = grid->quadrature_size();

    const auto vq = quad(state.v.u);
    const auto dq = quad(sym_gradient(state.v));
    const auto wq = to_quadrature(state.omega);
    const auto bq = to_quadrature(state.b);

    RhsBundle out;
    std::vector<double> mu(nq), src_w(nq), src_b(nq);
    double mu_max = 0.0;
    double mu_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nq; ++i) {
        mu[i] = cutoffs.mu(bq[i], wq[i]);
        mu_max = std::max(mu_max, mu[i]);
        mu_min = std::min(mu_min, mu[i]);
        const double p = cutoffs.phi(wq[i]);
        src_w[i] = -params.kappa2 * p * p;
        src_b[i] = -cutoffs.psi(bq[i]) * p + params.kappa4 * mu[i] * frobenius_sq_at(dq, i);
    }
    out.mu_max = mu_max;
    out.mu_min = mu_min;

    out.dv = velocity_rhs_from(grid, vq, dq, mu, params.nu0);
    out.domega = scalar_rhs_from(grid, wq, quad(gradient(state.omega)), vq, mu, params.kappa1, src_w);
    out.db = scalar_rhs_from(grid, bq, quad(gradient(state.b)), vq, mu, params.kappa3, src_b);
    return out;
}

State project_initial_data(const GridPtr& grid, const std::array<std::vector<double>, 3>& v0,
                           std::span<const double> omega0, std::span<const double> b0,
                           double t0) {
    auto finite = [](std::span<const double> xs) {
        return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
    };
    for (const auto& c : v0) {
        if (!finite(c)) throw std::invalid_argument("initial velocity has non-finite values");
    }
    if (!finite(omega0) || !finite(b0)) {
        throw std::invalid_argument("initial omega or b has non-finite values");
    }
    State s;
    s.t = t0;
    std::array<ScalarField, 3> u{to_spectral(grid, v0[0]), to_spectral(grid, v0[1]),
                                 to_spectral(grid, v0[2])};
    s.v = truncate(leray_project(u));
    s.omega = truncate(to_spectral(grid, omega0));
    s.b = truncate(to_spectral(grid, b0));
    return s;
}

CutoffSchedule::CutoffSchedule(const InitialBounds& bounds, double kappa2, double drift)
    : bounds_(bounds), kappa2_(kappa2), drift_(drift) {
    if (!(drift >= 0.0)) throw std::invalid_argument("cutoff drift must be nonnegative");
}

const CutoffSet& CutoffSchedule::at(double t) {
    const Thresholds th = thresholds_at(bounds_, kappa2_, t);
    if (built_) {
        const Thresholds& old = current_.thresholds;
        auto drifted = [&](double now, double then) {
            return std::abs(now - then) > drift_ * std::abs(then);
        };
        const bool stale = drifted(th.b_star, old.b_star) ||
                           drifted(th.omega_star, old.omega_star) ||
                           drifted(th.omega_dstar, old.omega_dstar);
        if (!stale && !(drift_ == 0.0 && t != old.t)) return current_;
    }
    current_ = make_cutoff_set(th);
    built_ = true;
    ++rebuilds_;
    return current_;
}

}  // namespace kolmo
