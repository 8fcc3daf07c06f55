#include "kolmo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace kolmo {

namespace {

constexpr Complex kI{0.0, 1.0};

using Vec3 = std::array<double, 3>;

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vec3 normalized(const Vec3& a) {
    const double n = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
    return {a[0] / n, a[1] / n, a[2] / n};
}

// Two real unit vectors spanning the plane orthogonal to k.
std::array<Vec3, 2> polarizations(const Vec3& k) {
    Vec3 seed{0.0, 0.0, 1.0};
    if (std::abs(k[0]) + std::abs(k[1]) == 0.0) seed = {1.0, 0.0, 0.0};
    const Vec3 e1 = normalized(cross(k, seed));
    const Vec3 e2 = normalized(cross(normalized(k), e1));
    return {e1, e2};
}

struct FullMode {
    std::array<int, 3> n;
    Vec3 k;
    // coefficients of v1..3, omega, b
    std::array<Complex, 5> c;
};

// Direct-sum phase tables exp(i 2 pi n p / P) for n in [-N/2, N/2].
struct PhaseTable {
    int offset = 0;
    int points = 0;
    std::vector<Complex> data;

    PhaseTable(int n_axis, int p) : offset(n_axis / 2), points(p), data((n_axis + 1) * p) {
        for (int n = -offset; n <= offset; ++n) {
            for (int i = 0; i < p; ++i) {
                const double arg = 2.0 * std::numbers::pi * static_cast<double>(n) * i / p;
                data[(n + offset) * p + i] = {std::cos(arg), std::sin(arg)};
            }
        }
    }
    const Complex& at(int n, int i) const { return data[(n + offset) * points + i]; }
};

}  // namespace

int basis_size(const SpectralGrid& grid) {
    int scalar = 0, vel = 0;
    for (std::size_t i = 0; i < grid.spectral_size(); ++i) {
        if (!grid.retained(i)) continue;
        const int m = static_cast<int>(grid.multiplicity(i));
        scalar += m;
        if (grid.k2(i) > 0.0) vel += 2 * m;
    }
    return 2 * scalar + vel;
}

RhsBundle rhs_bruteforce(const State& state, const CutoffSet& cutoffs, const ModelParams& params,
                         const QuadratureSpec& spec, int max_basis) {
    const GridPtr& grid = state.grid();
    const int nb = basis_size(*grid);
    if (nb > max_basis) {
        throw std::invalid_argument("rhs_bruteforce: " + std::to_string(nb) +
                                    " basis functions exceed the guard of " +
                                    std::to_string(max_basis));
    }
    const auto& N = grid->n();

    // Every nonzero coefficient of the state, expanded to the full index set.
    std::vector<FullMode> modes;
    int nmax = 0;
    for (std::size_t idx = 0; idx < grid->spectral_size(); ++idx) {
        if (grid->nyquist(idx)) continue;
        FullMode m;
        m.n = grid->mode(idx);
        m.k = grid->wavenumber(idx);
        m.c = {state.v[0].c[idx], state.v[1].c[idx], state.v[2].c[idx], state.omega.c[idx],
               state.b.c[idx]};
        if (std::all_of(m.c.begin(), m.c.end(), [](const Complex& z) { return z == 0.0; })) continue;
        for (int a = 0; a < 3; ++a) nmax = std::max(nmax, std::abs(m.n[a]));
        modes.push_back(m);
        if (grid->multiplicity(idx) == 2.0) {
            FullMode p = m;
            for (int a = 0; a < 3; ++a) {
                p.n[a] = -m.n[a];
                p.k[a] = -m.k[a];
            }
            for (auto& z : p.c) z = std::conj(z);
            modes.push_back(p);
        }
    }

    // Retained test functions (stored half of the index set).
    std::vector<std::size_t> tests;
    for (std::size_t idx = 0; idx < grid->spectral_size(); ++idx) {
        if (grid->retained(idx)) {
            tests.push_back(idx);
            for (int a = 0; a < 3; ++a) nmax = std::max(nmax, std::abs(grid->mode(idx)[a]));
        }
    }
    const int P = spec.points;
    if (P < 3 * nmax + 1) {
        throw std::invalid_argument("rhs_bruteforce: " + std::to_string(P) +
                                    " quadrature points per axis cannot resolve mode " +
                                    std::to_string(nmax));
    }
    const PhaseTable E1(N[0], P), E2(N[1], P), E3(N[2], P);

    // Integrands, in this order:
    //   T_jl = v_j v_l - nu0 mu D_jl          (6, kSymPairs order)
    //   G_a  = w v_a - k1 mu d_a w            (3)
    //   S_w  = -k2 phi(w)^2                    (1)
    //   H_a  = b v_a - k3 mu d_a b            (3)
    //   S_b  = -psi(b) phi(w) + k4 mu |D|^2    (1)
    constexpr int kIntegrands = 14;
    std::vector<std::array<Complex, kIntegrands>> proj(tests.size());
    for (auto& p : proj) p.fill(0.0);

    std::vector<Complex> q(modes.size());
    std::vector<Complex> tq(tests.size());
    for (int i = 0; i < P; ++i) {
        for (int j = 0; j < P; ++j) {
            for (std::size_t m = 0; m < modes.size(); ++m) {
                q[m] = E1.at(modes[m].n[0], i) * E2.at(modes[m].n[1], j);
            }
            for (std::size_t r = 0; r < tests.size(); ++r) {
                const auto& n = grid->mode(tests[r]);
                tq[r] = std::conj(E1.at(n[0], i) * E2.at(n[1], j));
            }
            for (int l = 0; l < P; ++l) {
                double v[3] = {0, 0, 0}, gv[3][3] = {{0}}, w = 0, gw[3] = {0, 0, 0}, b = 0,
                       gb[3] = {0, 0, 0};
                for (std::size_t m = 0; m < modes.size(); ++m) {
                    const FullMode& fm = modes[m];
                    const Complex ph = q[m] * E3.at(fm.n[2], l);
                    for (int a = 0; a < 3; ++a) {
                        const Complex cv = fm.c[a] * ph;
                        v[a] += cv.real();
                        const Complex dcv = kI * cv;
                        for (int d = 0; d < 3; ++d) gv[a][d] += fm.k[d] * dcv.real();
                    }
                    const Complex cw = fm.c[3] * ph;
                    const Complex cb = fm.c[4] * ph;
                    w += cw.real();
                    b += cb.real();
                    const double dw = (kI * cw).real();
                    const double db = (kI * cb).real();
                    for (int d = 0; d < 3; ++d) {
                        gw[d] += fm.k[d] * dw;
                        gb[d] += fm.k[d] * db;
                    }
                }
                double D[6];
                for (int p = 0; p < 6; ++p) {
                    const int a = kSymPairs[p][0], c = kSymPairs[p][1];
                    D[p] = 0.5 * (gv[a][c] + gv[c][a]);
                }
                const double D2 = D[0] * D[0] + D[1] * D[1] + D[2] * D[2] +
                                  2.0 * (D[3] * D[3] + D[4] * D[4] + D[5] * D[5]);
                const double mu = cutoffs.Psi(b) / cutoffs.Phi(w);
                const double phi = cutoffs.phi(w);
                double f[kIntegrands];
                for (int p = 0; p < 6; ++p) {
                    f[p] = v[kSymPairs[p][0]] * v[kSymPairs[p][1]] - params.nu0 * mu * D[p];
                }
                for (int a = 0; a < 3; ++a) {
                    f[6 + a] = w * v[a] - params.kappa1 * mu * gw[a];
                    f[10 + a] = b * v[a] - params.kappa3 * mu * gb[a];
                }
                f[9] = -params.kappa2 * phi * phi;
                f[13] = -cutoffs.psi(b) * phi + params.kappa4 * mu * D2;

                for (std::size_t r = 0; r < tests.size(); ++r) {
                    const int n3 = grid->mode(tests[r])[2];
                    const Complex e = tq[r] * std::conj(E3.at(n3, l));
                    for (int s = 0; s < kIntegrands; ++s) proj[r][s] += f[s] * e;
                }
            }
        }
    }

    const double norm = 1.0 / (static_cast<double>(P) * P * P);
    RhsBundle out;
    out.dv = VelocityField(grid);
    out.domega = ScalarField(grid);
    out.db = ScalarField(grid);
    out.mu_min = cutoffs.thresholds.mu_star;
    out.mu_max = 0.0;
    for (std::size_t r = 0; r < tests.size(); ++r) {
        const std::size_t idx = tests[r];
        const Vec3& k = grid->wavenumber(idx);
        auto hat = [&](int s) { return proj[r][s] * norm; };

        Complex dw = hat(9), db = hat(13);
        for (int a = 0; a < 3; ++a) {
            dw += -kI * k[a] * hat(6 + a);
            db += -kI * k[a] * hat(10 + a);
        }
        out.domega.c[idx] = dw;
        out.db.c[idx] = db;

        if (grid->k2(idx) == 0.0) continue;
        // T k, using symmetry of T
        Complex Tk[3] = {0.0, 0.0, 0.0};
        for (int p = 0; p < 6; ++p) {
            const int a = kSymPairs[p][0], c = kSymPairs[p][1];
            Tk[a] += hat(p) * k[c];
            if (a != c) Tk[c] += hat(p) * k[a];
        }
        for (const Vec3& e : polarizations(k)) {
            const Complex coeff = -kI * (e[0] * Tk[0] + e[1] * Tk[1] + e[2] * Tk[2]);
            for (int a = 0; a < 3; ++a) out.dv.u[a].c[idx] += coeff * e[a];
        }
    }
    return out;
}

State random_oracle_state(const GridPtr& grid, std::mt19937_64& rng, bool constant_mu) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    auto random_field = [&](double centre, double amp) {
        ScalarField f = ScalarField::constant(grid, centre);
        for (std::size_t i = 1; i < grid->spectral_size(); ++i) {
            if (grid->retained(i)) f.c[i] = {amp * U(rng), amp * U(rng)};
        }
        return truncate(to_spectral(grid, to_physical(f)));
    };
    State st;
    std::array<ScalarField, 3> u{random_field(0.0, 0.3), random_field(0.0, 0.3),
                                 random_field(0.0, 0.3)};
    st.v = truncate(leray_project(u));
    st.omega = constant_mu ? ScalarField::constant(grid, 1.0) : random_field(1.0, 0.05);
    st.b = constant_mu ? ScalarField::constant(grid, 1.2) : random_field(1.2, 0.05);
    return st;
}

ConstantSolution constant_solution(double b_bar, double omega_bar, double kappa2, double t) {
    const double s = 1.0 + kappa2 * omega_bar * t;
    return {omega_bar / s, b_bar * std::pow(s, -1.0 / kappa2)};
}

double eta_norm_quadrature(double tolerance) {
    auto f = [](double y) { return bump_f(y) * bump_f(1.0 - y); };
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 20, tolerance,
                                                                         &err);
}

double relative_distance(const ScalarField& a, const ScalarField& b, double floor) {
    double diff = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        diff = std::max(diff, std::abs(a.c[i] - b.c[i]));
        ref = std::max(ref, std::abs(b.c[i]));
    }
    return diff / std::max(ref, floor);
}

double relative_distance(const RhsBundle& a, const RhsBundle& b, double floor) {
    auto peak = [](const ScalarField& f) {
        double m = 0.0;
        for (const auto& z : f.c) m = std::max(m, std::abs(z));
        return m;
    };
    const ScalarField* fa[5] = {&a.dv[0], &a.dv[1], &a.dv[2], &a.domega, &a.db};
    const ScalarField* fb[5] = {&b.dv[0], &b.dv[1], &b.dv[2], &b.domega, &b.db};
    double global = floor;
    for (const auto* f : fb) global = std::max(global, peak(*f));
    // A component that is negligible against the others is measured against
    // the overall scale.
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double own = peak(*fb[i]);
        const double scale = own > 1e-12 * global ? own : global;
        worst = std::max(worst, relative_distance(*fa[i], *fb[i], scale));
    }
    return worst;
}

}  // namespace kolmo
