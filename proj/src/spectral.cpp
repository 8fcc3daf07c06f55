#include "kolmo/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

#include "json.hpp"

namespace kolmo {

namespace {

constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

int signed_mode(int i, int n) { return i <= n / 2 - 1 ? i : i - n; }

int even_at_least(double x) {
    int v = static_cast<int>(std::ceil(x - 1e-9));
    if (v % 2 != 0) ++v;
    return v;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

struct SpectralGrid::Plans {
    fftw_plan fwd_n = nullptr;
    fftw_plan inv_n = nullptr;
    fftw_plan fwd_m = nullptr;
    fftw_plan inv_m = nullptr;

    ~Plans() {
        std::lock_guard lock(planner_mutex());
        for (fftw_plan p : {fwd_n, inv_n, fwd_m, inv_m}) {
            if (p) fftw_destroy_plan(p);
        }
    }
};

SpectralGrid::~SpectralGrid() = default;

std::shared_ptr<const SpectralGrid> SpectralGrid::create(std::array<int, 3> n,
                                                         std::array<double, 3> lengths,
                                                         Options opts) {
    std::shared_ptr<SpectralGrid> g(new SpectralGrid());
    g->init(n, lengths, opts);
    return g;
}

void SpectralGrid::init(std::array<int, 3> n, std::array<double, 3> lengths, Options opts) {
    for (int a = 0; a < 3; ++a) {
        if (n[a] < 4 || n[a] % 2 != 0) {
            throw std::invalid_argument("SpectralGrid: modes per axis must be even and >= 4");
        }
        if (!(lengths[a] > 0.0)) {
            throw std::invalid_argument("SpectralGrid: box lengths must be positive");
        }
    }
    if (!(opts.oversampling >= 1.5)) {
        throw std::invalid_argument("SpectralGrid: oversampling must be at least 3/2");
    }
    n_ = n;
    lengths_ = lengths;
    oversampling_ = opts.oversampling;
    for (int a = 0; a < 3; ++a) m_[a] = std::max(n[a], even_at_least(opts.oversampling * n[a]));

    const int nh = n_[2] / 2 + 1;
    const int mh = m_[2] / 2 + 1;
    spec_size_ = static_cast<std::size_t>(n_[0]) * n_[1] * nh;
    phys_size_ = static_cast<std::size_t>(n_[0]) * n_[1] * n_[2];
    quad_spec_size_ = static_cast<std::size_t>(m_[0]) * m_[1] * mh;
    quad_size_ = static_cast<std::size_t>(m_[0]) * m_[1] * m_[2];

    double k_ball = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a) {
        k_ball = std::min(k_ball, 2.0 * std::numbers::pi / lengths_[a] * (n_[a] / 3));
    }
    const double auto_cut = k_ball * k_ball;
    if (opts.k2_cut < 0.0 || opts.k2_cut > auto_cut * (1.0 + 1e-12)) {
        throw std::invalid_argument(
            "SpectralGrid: k2_cut must lie in [0, largest ball inside the 2/3 mask]");
    }
    k2_cut_ = opts.k2_cut > 0.0 ? opts.k2_cut : auto_cut;

    modes_.resize(spec_size_);
    wavenumbers_.resize(spec_size_);
    k2_.resize(spec_size_);
    mult_.resize(spec_size_);
    retained_.assign(spec_size_, 0);
    dealias_.assign(spec_size_, 0);
    nyquist_.assign(spec_size_, 0);
    pad_map_.assign(spec_size_, kNoIndex);
    std::vector<double> all_k2;
    all_k2.reserve(spec_size_);

    max_retained_k2_ = 0.0;
    retained_count_ = 0;
    for (int i0 = 0; i0 < n_[0]; ++i0) {
        for (int i1 = 0; i1 < n_[1]; ++i1) {
            for (int i2 = 0; i2 < nh; ++i2) {
                const std::size_t idx = (static_cast<std::size_t>(i0) * n_[1] + i1) * nh + i2;
                const std::array<int, 3> md{signed_mode(i0, n_[0]), signed_mode(i1, n_[1]),
                                            i2 == n_[2] / 2 ? -n_[2] / 2 : i2};
                modes_[idx] = md;
                bool nyq = false;
                bool masked = true;
                double kk = 0.0;
                for (int a = 0; a < 3; ++a) {
                    const double k = 2.0 * std::numbers::pi / lengths_[a] * md[a];
                    wavenumbers_[idx][a] = k;
                    kk += k * k;
                    if (md[a] == -n_[a] / 2) nyq = true;
                    if (3 * std::abs(md[a]) > n_[a]) masked = false;
                }
                k2_[idx] = kk;
                mult_[idx] = (i2 == 0 || i2 == n_[2] / 2) ? 1.0 : 2.0;
                nyquist_[idx] = nyq;
                dealias_[idx] = masked;
                const bool keep = masked && kk <= k2_cut_ * (1.0 + 1e-12);
                retained_[idx] = keep;
                if (keep) {
                    ++retained_count_;
                    max_retained_k2_ = std::max(max_retained_k2_, kk);
                }
                all_k2.push_back(kk);
                if (!nyq) {
                    const int j0 = md[0] >= 0 ? md[0] : md[0] + m_[0];
                    const int j1 = md[1] >= 0 ? md[1] : md[1] + m_[1];
                    pad_map_[idx] = (static_cast<std::size_t>(j0) * m_[1] + j1) * mh + md[2];
                }
            }
        }
    }

    std::sort(all_k2.begin(), all_k2.end());
    shells_.clear();
    for (double v : all_k2) {
        if (shells_.empty() || v > shells_.back() * (1.0 + 1e-12) + 1e-300) shells_.push_back(v);
    }

    plans_ = std::make_unique<Plans>();
    std::lock_guard lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::vector<double> rn(phys_size_), rm(quad_size_);
    std::vector<Complex> cn(spec_size_), cm(quad_spec_size_);
    plans_->fwd_n = fftw_plan_dft_r2c_3d(n_[0], n_[1], n_[2], rn.data(), as_fftw(cn.data()), flags);
    plans_->inv_n = fftw_plan_dft_c2r_3d(n_[0], n_[1], n_[2], as_fftw(cn.data()), rn.data(), flags);
    plans_->fwd_m = fftw_plan_dft_r2c_3d(m_[0], m_[1], m_[2], rm.data(), as_fftw(cm.data()), flags);
    plans_->inv_m = fftw_plan_dft_c2r_3d(m_[0], m_[1], m_[2], as_fftw(cm.data()), rm.data(), flags);
    if (!plans_->fwd_n || !plans_->inv_n || !plans_->fwd_m || !plans_->inv_m) {
        throw std::runtime_error("SpectralGrid: FFTW planning failed");
    }
}

std::size_t SpectralGrid::index_of(std::array<int, 3> md) const {
    const int nh = n_[2] / 2 + 1;
    for (int a = 0; a < 2; ++a) {
        if (md[a] < -n_[a] / 2 || md[a] >= n_[a] / 2) {
            throw std::out_of_range("SpectralGrid::index_of: mode outside the grid");
        }
    }
    if (md[2] < 0 || md[2] > n_[2] / 2) {
        throw std::out_of_range("SpectralGrid::index_of: third mode must be in [0, N3/2]");
    }
    const int i0 = md[0] >= 0 ? md[0] : md[0] + n_[0];
    const int i1 = md[1] >= 0 ? md[1] : md[1] + n_[1];
    return (static_cast<std::size_t>(i0) * n_[1] + i1) * nh + md[2];
}

double SpectralGrid::coordinate(int axis, int i) const { return lengths_[axis] * i / n_[axis]; }

double SpectralGrid::quadrature_coordinate(int axis, int i) const {
    return lengths_[axis] * i / m_[axis];
}

void SpectralGrid::forward(std::span<const double> physical, std::span<Complex> coeffs) const {
    if (physical.size() != phys_size_ || coeffs.size() != spec_size_) {
        throw std::invalid_argument("SpectralGrid::forward: shape mismatch");
    }
    // r2c does not modify its input but FFTW's signature is non-const.
    fftw_execute_dft_r2c(plans_->fwd_n, const_cast<double*>(physical.data()),
                         as_fftw(coeffs.data()));
    const double scale = 1.0 / static_cast<double>(phys_size_);
    for (auto& c : coeffs) c *= scale;
}

void SpectralGrid::inverse(std::span<const Complex> coeffs, std::span<double> physical) const {
    if (physical.size() != phys_size_ || coeffs.size() != spec_size_) {
        throw std::invalid_argument("SpectralGrid::inverse: shape mismatch");
    }
    std::vector<Complex> work(coeffs.begin(), coeffs.end());
    fftw_execute_dft_c2r(plans_->inv_n, as_fftw(work.data()), physical.data());
}

void SpectralGrid::to_quadrature(std::span<const Complex> coeffs, std::span<double> values) const {
    if (coeffs.size() != spec_size_ || values.size() != quad_size_) {
        throw std::invalid_argument("SpectralGrid::to_quadrature: shape mismatch");
    }
    std::vector<Complex> work(quad_spec_size_);
    for (std::size_t i = 0; i < spec_size_; ++i) {
        if (pad_map_[i] != kNoIndex) work[pad_map_[i]] = coeffs[i];
    }
    fftw_execute_dft_c2r(plans_->inv_m, as_fftw(work.data()), values.data());
}

void SpectralGrid::from_quadrature(std::span<const double> values, std::span<Complex> coeffs) const {
    if (coeffs.size() != spec_size_ || values.size() != quad_size_) {
        throw std::invalid_argument("SpectralGrid::from_quadrature: shape mismatch");
    }
    std::vector<Complex> work(quad_spec_size_);
    fftw_execute_dft_r2c(plans_->fwd_m, const_cast<double*>(values.data()), as_fftw(work.data()));
    const double scale = 1.0 / static_cast<double>(quad_size_);
    for (std::size_t i = 0; i < spec_size_; ++i) {
        coeffs[i] = pad_map_[i] != kNoIndex ? work[pad_map_[i]] * scale : Complex{};
    }
}

// ---------------------------------------------------------------------------
// Field arithmetic

ScalarField ScalarField::constant(GridPtr g, double value) {
    ScalarField f(std::move(g));
    f.c[0] = value;
    return f;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (auto& x : c) x *= s;
    return *this;
}

void ScalarField::axpy(double s, const ScalarField& o) {
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += s * o.c[i];
}

VelocityField& VelocityField::operator+=(const VelocityField& o) {
    for (int a = 0; a < 3; ++a) u[a] += o.u[a];
    return *this;
}

VelocityField& VelocityField::operator*=(double s) {
    for (auto& f : u) f *= s;
    return *this;
}

void VelocityField::axpy(double s, const VelocityField& o) {
    for (int a = 0; a < 3; ++a) u[a].axpy(s, o.u[a]);
}

// ---------------------------------------------------------------------------
// Transforms and operators

std::vector<double> to_physical(const ScalarField& f) {
    std::vector<double> out(f.grid->physical_size());
    f.grid->inverse(f.c, out);
    return out;
}

ScalarField to_spectral(const GridPtr& grid, std::span<const double> values) {
    ScalarField f(grid);
    grid->forward(values, f.c);
    return f;
}

std::vector<double> to_quadrature(const ScalarField& f) {
    std::vector<double> out(f.grid->quadrature_size());
    f.grid->to_quadrature(f.c, out);
    return out;
}

ScalarField from_quadrature(const GridPtr& grid, std::span<const double> values) {
    ScalarField f(grid);
    grid->from_quadrature(values, f.c);
    return f;
}

std::array<ScalarField, 3> gradient(const ScalarField& f) {
    const auto& g = *f.grid;
    std::array<ScalarField, 3> out{ScalarField(f.grid), ScalarField(f.grid), ScalarField(f.grid)};
    for (std::size_t i = 0; i < g.spectral_size(); ++i) {
        if (g.nyquist(i)) continue;
        const auto& k = g.wavenumber(i);
        for (int a = 0; a < 3; ++a) out[a].c[i] = Complex(0.0, k[a]) * f.c[i];
    }
    return out;
}

ScalarField divergence(const std::array<ScalarField, 3>& u) {
    const auto& g = *u[0].grid;
    ScalarField out(u[0].grid);
    for (std::size_t i = 0; i < g.spectral_size(); ++i) {
        if (g.nyquist(i)) continue;
        const auto& k = g.wavenumber(i);
        out.c[i] = Complex(0.0, 1.0) * (k[0] * u[0].c[i] + k[1] * u[1].c[i] + k[2] * u[2].c[i]);
    }
    return out;
}

ScalarField divergence(const VelocityField& v) { return divergence(v.u); }

ScalarField laplacian(const ScalarField& f) {
    const auto& g = *f.grid;
    ScalarField out(f.grid);
    for (std::size_t i = 0; i < g.spectral_size(); ++i) out.c[i] = -g.k2(i) * f.c[i];
    return out;
}

VelocityField laplacian(const VelocityField& v) {
    VelocityField out;
    for (int a = 0; a < 3; ++a) out.u[a] = laplacian(v.u[a]);
    return out;
}

SymTensor sym_gradient(const VelocityField& v) {
    const GridPtr& gp = v.grid();
    const auto& g = *gp;
    SymTensor d{ScalarField(gp), ScalarField(gp), ScalarField(gp),
                ScalarField(gp), ScalarField(gp), ScalarField(gp)};
    const Complex I(0.0, 1.0);
    for (std::size_t i = 0; i < g.spectral_size(); ++i) {
        if (g.nyquist(i)) continue;
        const auto& k = g.wavenumber(i);
        for (int p = 0; p < 6; ++p) {
            const int j = kSymPairs[p][0];
            const int l = kSymPairs[p][1];
            d[p].c[i] = 0.5 * I * (k[l] * v.u[j].c[i] + k[j] * v.u[l].c[i]);
        }
    }
    return d;
}

std::array<ScalarField, 3> divergence(const SymTensor& t) {
    const GridPtr& gp = t[0].grid;
    const auto& g = *gp;
    std::array<ScalarField, 3> out{ScalarField(gp), ScalarField(gp), ScalarField(gp)};
    const Complex I(0.0, 1.0);
    // component index of T_jl in the packed order
    constexpr int slot[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};
    for (std::size_t i = 0; i < g.spectral_size(); ++i) {
        if (g.nyquist(i)) continue;
        const auto& k = g.wavenumber(i);
        for (int j = 0; j < 3; ++j) {
            Complex acc{};
            for (int l = 0; l < 3; ++l) acc += k[l] * t[slot[j][l]].c[i];
            out[j].c[i] = I * acc;
        }
    }
    return out;
}

VelocityField leray_project(const std::array<ScalarField, 3>& u) {
    const GridPtr& gp = u[0].grid;
    const auto& g = *gp;
    VelocityField v(gp);
    for (std::size_t i = 1; i < g.spectral_size(); ++i) {
        if (g.nyquist(i)) continue;
        const auto& k = g.wavenumber(i);
        const Complex kdotu = k[0] * u[0].c[i] + k[1] * u[1].c[i] + k[2] * u[2].c[i];
        const Complex s = kdotu / g.k2(i);
        for (int a = 0; a < 3; ++a) v.u[a].c[i] = u[a].c[i] - k[a] * s;
    }
    return v;
}

VelocityField leray_project(const VelocityField& v) { return leray_project(v.u); }

ScalarField truncate(const ScalarField& f) {
    const auto& g = *f.grid;
    ScalarField out(f.grid);
    for (std::size_t i = 0; i < g.spectral_size(); ++i) {
        if (g.retained(i)) out.c[i] = f.c[i];
    }
    return out;
}

VelocityField truncate(const VelocityField& v) {
    VelocityField out;
    for (int a = 0; a < 3; ++a) out.u[a] = truncate(v.u[a]);
    return out;
}

ScalarField truncate_shells(const ScalarField& f, int shells) {
    const auto& g = *f.grid;
    ScalarField out(f.grid);
    if (shells <= 0) return out;
    const auto& sh = g.shells();
    const double limit = sh[std::min<std::size_t>(shells, sh.size()) - 1];
    for (std::size_t i = 0; i < g.spectral_size(); ++i) {
        if (g.k2(i) <= limit * (1.0 + 1e-12)) out.c[i] = f.c[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Norms

double inner(const ScalarField& a, const ScalarField& b) {
    const auto& g = *a.grid;
    double acc = 0.0;
    for (std::size_t i = 0; i < g.spectral_size(); ++i) {
        acc += g.multiplicity(i) * (a.c[i].real() * b.c[i].real() + a.c[i].imag() * b.c[i].imag());
    }
    return acc * g.volume();
}

double inner(const VelocityField& a, const VelocityField& b) {
    return inner(a.u[0], b.u[0]) + inner(a.u[1], b.u[1]) + inner(a.u[2], b.u[2]);
}

double l2_norm_sq(const ScalarField& f) { return inner(f, f); }
double l2_norm_sq(const VelocityField& v) { return inner(v, v); }

double seminorm_sq(const ScalarField& f, int k) {
    if (k < 0 || k > 3) throw std::invalid_argument("seminorm_sq: order must be in 0..3");
    const auto& g = *f.grid;
    double acc = 0.0;
    for (std::size_t i = 0; i < g.spectral_size(); ++i) {
        if (k > 0 && g.nyquist(i)) continue;
        acc += g.multiplicity(i) * std::pow(g.k2(i), k) * std::norm(f.c[i]);
    }
    return acc * g.volume();
}

double seminorm_sq(const VelocityField& v, int k) {
    return seminorm_sq(v.u[0], k) + seminorm_sq(v.u[1], k) + seminorm_sq(v.u[2], k);
}

// k = 0 is the plain L2 norm.
double hk_norm(const ScalarField& f, int k) {
    if (k == 0) return std::sqrt(l2_norm_sq(f));
    return std::sqrt(seminorm_sq(f, k) + l2_norm_sq(f));
}

double hk_norm(const VelocityField& v, int k) {
    if (k == 0) return std::sqrt(l2_norm_sq(v));
    return std::sqrt(seminorm_sq(v, k) + l2_norm_sq(v));
}

double frobenius_norm_sq(const SymTensor& t) {
    double acc = 0.0;
    for (int p = 0; p < 6; ++p) acc += (p < 3 ? 1.0 : 2.0) * l2_norm_sq(t[p]);
    return acc;
}

double hermitian_defect(const ScalarField& f) {
    const auto& g = *f.grid;
    const int nh = g.n()[2] / 2;
    double worst = 0.0;
    for (std::size_t i = 0; i < g.spectral_size(); ++i) {
        const auto& md = g.mode(i);
        if (md[2] != 0 && md[2] != -nh) continue;
        std::array<int, 3> partner{-md[0], -md[1], md[2] == 0 ? 0 : nh};
        bool representable = true;
        for (int a = 0; a < 2; ++a) {
            if (partner[a] == g.n()[a] / 2) representable = false;
        }
        if (!representable) continue;
        const std::size_t j = g.index_of(partner);
        worst = std::max(worst, std::abs(f.c[i] - std::conj(f.c[j])));
    }
    return worst;
}

double hermitian_defect(const VelocityField& v) {
    return std::max({hermitian_defect(v.u[0]), hermitian_defect(v.u[1]), hermitian_defect(v.u[2])});
}

double divergence_defect(const VelocityField& v) {
    const auto& g = *v.grid();
    double scale = 0.0;
    double worst = std::abs(v.u[0].c[0]) + std::abs(v.u[1].c[0]) + std::abs(v.u[2].c[0]);
    for (std::size_t i = 0; i < g.spectral_size(); ++i) {
        const double mag = std::sqrt(std::norm(v.u[0].c[i]) + std::norm(v.u[1].c[i]) +
                                     std::norm(v.u[2].c[i]));
        scale = std::max(scale, mag);
        if (i == 0 || mag == 0.0) continue;
        const auto& k = g.wavenumber(i);
        const Complex kdotv = k[0] * v.u[0].c[i] + k[1] * v.u[1].c[i] + k[2] * v.u[2].c[i];
        worst = std::max(worst, std::abs(kdotv) / std::sqrt(g.k2(i)));
    }
    return scale > 0.0 ? worst / scale : 0.0;
}

double support_defect(const ScalarField& f) {
    const auto& g = *f.grid;
    double worst = 0.0;
    for (std::size_t i = 0; i < g.spectral_size(); ++i) {
        if (!g.retained(i)) worst = std::max(worst, std::abs(f.c[i]));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Snapshots

namespace {

void write_le_doubles(std::ostream& os, const std::vector<double>& data) {
    if constexpr (std::endian::native == std::endian::little) {
        os.write(reinterpret_cast<const char*>(data.data()),
                 static_cast<std::streamsize>(data.size() * sizeof(double)));
    } else {
        for (double d : data) {
            auto bits = std::bit_cast<std::uint64_t>(d);
            char bytes[8];
            for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xff);
            os.write(bytes, 8);
        }
    }
}

void read_le_doubles(std::istream& is, std::vector<double>& data) {
    std::vector<unsigned char> raw(data.size() * 8);
    is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(is.gcount()) != raw.size()) {
        throw std::runtime_error("snapshot payload truncated");
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(raw[8 * i + b]) << (8 * b);
        data[i] = std::bit_cast<double>(bits);
    }
}

}  // namespace

void write_snapshot(const std::string& path, const Snapshot& snap) {
    const std::size_t count = static_cast<std::size_t>(snap.n[0]) * snap.n[1] * snap.n[2];
    if (snap.names.size() != snap.fields.size()) {
        throw std::invalid_argument("write_snapshot: names and fields differ in length");
    }
    for (const auto& f : snap.fields) {
        if (f.size() != count) throw std::invalid_argument("write_snapshot: field size mismatch");
    }
    nlohmann::json header = {{"format", "kolmo-snapshot"},
                             {"version", 1},
                             {"dims", snap.n},
                             {"lengths", snap.lengths},
                             {"t", snap.t},
                             {"fields", snap.names},
                             {"dtype", "float64-le"},
                             {"order", "row-major"}};
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << header.dump() << '\n';
    for (const auto& f : snap.fields) write_le_doubles(os, f);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open snapshot " + path);
    std::string line;
    std::getline(is, line);
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("snapshot header is not valid JSON: " + std::string(e.what()));
    }
    if (header.value("format", "") != "kolmo-snapshot") {
        throw std::runtime_error("not a kolmo snapshot: " + path);
    }
    Snapshot snap;
    snap.n = header.at("dims").get<std::array<int, 3>>();
    snap.lengths = header.at("lengths").get<std::array<double, 3>>();
    snap.t = header.at("t").get<double>();
    snap.names = header.at("fields").get<std::vector<std::string>>();
    const std::size_t count = static_cast<std::size_t>(snap.n[0]) * snap.n[1] * snap.n[2];
    for (std::size_t f = 0; f < snap.names.size(); ++f) {
        std::vector<double> data(count);
        read_le_doubles(is, data);
        snap.fields.push_back(std::move(data));
    }
    return snap;
}

}  // namespace kolmo
