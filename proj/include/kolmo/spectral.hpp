#pragma once

// Fourier machinery on the periodic box (0,L1)x(0,L2)x(0,L3).
//
// Coefficients use the real-to-complex half layout N1 x N2 x (N3/2+1) and are
// scaled so that f(x) = sum_k c_k exp(i k.x); mode 0 is the spatial mean.
// Physical arrays are row-major with the third index fastest.
//
// Two physical grids exist: the N grid (to_physical / to_spectral) and the
// oversampled quadrature grid of M >= N points per axis on which every
// nonlinear product is evaluated.

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace kolmo {

using Complex = std::complex<double>;

class SpectralGrid {
public:
    struct Options {
        double oversampling = 2.0;
        /// Galerkin cutoff on |k|^2; 0 selects the largest ball inside the 2/3 mask.
        double k2_cut = 0.0;
    };

    static std::shared_ptr<const SpectralGrid> create(std::array<int, 3> n,
                                                      std::array<double, 3> lengths,
                                                      Options opts);
    static std::shared_ptr<const SpectralGrid> create(std::array<int, 3> n,
                                                      std::array<double, 3> lengths) {
        return create(n, lengths, Options{});
    }

    ~SpectralGrid();
    SpectralGrid(const SpectralGrid&) = delete;
    SpectralGrid& operator=(const SpectralGrid&) = delete;

    const std::array<int, 3>& n() const { return n_; }
    const std::array<int, 3>& m() const { return m_; }
    const std::array<double, 3>& lengths() const { return lengths_; }
    double volume() const { return lengths_[0] * lengths_[1] * lengths_[2]; }
    double oversampling() const { return oversampling_; }
    double k2_cut() const { return k2_cut_; }

    std::size_t spectral_size() const { return spec_size_; }
    std::size_t physical_size() const { return phys_size_; }
    std::size_t quadrature_size() const { return quad_size_; }
    std::size_t quadrature_spectral_size() const { return quad_spec_size_; }

    /// Signed integer mode numbers of a spectral index.
    const std::array<int, 3>& mode(std::size_t idx) const { return modes_[idx]; }
    const std::array<double, 3>& wavenumber(std::size_t idx) const { return wavenumbers_[idx]; }
    double k2(std::size_t idx) const { return k2_[idx]; }
    /// 2 for modes whose conjugate partner is not stored, 1 otherwise.
    double multiplicity(std::size_t idx) const { return mult_[idx]; }
    bool retained(std::size_t idx) const { return retained_[idx] != 0; }
    bool dealiased(std::size_t idx) const { return dealias_[idx] != 0; }
    bool nyquist(std::size_t idx) const { return nyquist_[idx] != 0; }
    std::size_t index_of(std::array<int, 3> mode) const;

    /// Distinct eigenvalues |k|^2 present on the grid, ascending.
    const std::vector<double>& shells() const { return shells_; }
    double max_retained_k2() const { return max_retained_k2_; }
    std::size_t retained_count() const { return retained_count_; }

    /// Physical coordinate of an N-grid or M-grid point along axis a.
    double coordinate(int axis, int i) const;
    double quadrature_coordinate(int axis, int i) const;

    void forward(std::span<const double> physical, std::span<Complex> coeffs) const;
    void inverse(std::span<const Complex> coeffs, std::span<double> physical) const;
    /// Zero-padded synthesis on the quadrature grid. Nyquist modes are dropped.
    void to_quadrature(std::span<const Complex> coeffs, std::span<double> values) const;
    /// Analysis on the quadrature grid, keeping the modes representable on N.
    void from_quadrature(std::span<const double> values, std::span<Complex> coeffs) const;

private:
    SpectralGrid() = default;
    void init(std::array<int, 3> n, std::array<double, 3> lengths, Options opts);

    std::array<int, 3> n_{};
    std::array<int, 3> m_{};
    std::array<double, 3> lengths_{};
    double oversampling_ = 2.0;
    double k2_cut_ = 0.0;
    double max_retained_k2_ = 0.0;
    std::size_t spec_size_ = 0, phys_size_ = 0, quad_size_ = 0, quad_spec_size_ = 0;
    std::size_t retained_count_ = 0;

    std::vector<std::array<int, 3>> modes_;
    std::vector<std::array<double, 3>> wavenumbers_;
    std::vector<double> k2_;
    std::vector<double> mult_;
    std::vector<unsigned char> retained_, dealias_, nyquist_;
    std::vector<std::size_t> pad_map_;  // N index -> M index, or npos for Nyquist
    std::vector<double> shells_;

    struct Plans;
    std::unique_ptr<Plans> plans_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

/// Real scalar field held as Fourier coefficients.
struct ScalarField {
    GridPtr grid;
    std::vector<Complex> c;

    ScalarField() = default;
    explicit ScalarField(GridPtr g) : grid(std::move(g)), c(grid->spectral_size()) {}

    static ScalarField constant(GridPtr g, double value);

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double s);
    /// this += s * o
    void axpy(double s, const ScalarField& o);
    double mean() const { return c[0].real(); }
};

/// Solenoidal, mean-free velocity (the invariant is maintained by
/// leray_project; arithmetic on it preserves the property).
struct VelocityField {
    std::array<ScalarField, 3> u;

    VelocityField() = default;
    explicit VelocityField(const GridPtr& g) : u{ScalarField(g), ScalarField(g), ScalarField(g)} {}

    const GridPtr& grid() const { return u[0].grid; }
    ScalarField& operator[](int i) { return u[i]; }
    const ScalarField& operator[](int i) const { return u[i]; }

    VelocityField& operator+=(const VelocityField& o);
    VelocityField& operator*=(double s);
    void axpy(double s, const VelocityField& o);
};

/// Symmetric tensor components in the order 11, 22, 33, 12, 13, 23.
using SymTensor = std::array<ScalarField, 6>;
inline constexpr std::array<std::array<int, 2>, 6> kSymPairs{
    {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};

std::vector<double> to_physical(const ScalarField& f);
ScalarField to_spectral(const GridPtr& grid, std::span<const double> values);
std::vector<double> to_quadrature(const ScalarField& f);
ScalarField from_quadrature(const GridPtr& grid, std::span<const double> values);

std::array<ScalarField, 3> gradient(const ScalarField& f);
ScalarField divergence(const std::array<ScalarField, 3>& u);
ScalarField divergence(const VelocityField& v);
ScalarField laplacian(const ScalarField& f);
VelocityField laplacian(const VelocityField& v);
SymTensor sym_gradient(const VelocityField& v);
/// Divergence of a symmetric tensor field: (div T)_j = sum_l d_l T_jl.
std::array<ScalarField, 3> divergence(const SymTensor& t);

/// Mode-wise removal of the gradient part and of the mean.
VelocityField leray_project(const std::array<ScalarField, 3>& u);
VelocityField leray_project(const VelocityField& v);

/// Zero every coefficient outside the Galerkin set |k|^2 <= k2_cut.
ScalarField truncate(const ScalarField& f);
VelocityField truncate(const VelocityField& v);
/// Keep only the first `shells` distinct eigenvalues |k|^2.
ScalarField truncate_shells(const ScalarField& f, int shells);

/// L2 inner product over the box, using conjugate symmetry.
double inner(const ScalarField& a, const ScalarField& b);
double inner(const VelocityField& a, const VelocityField& b);
double l2_norm_sq(const ScalarField& f);
double l2_norm_sq(const VelocityField& v);
/// ||grad^k f||_2^2.
double seminorm_sq(const ScalarField& f, int k);
double seminorm_sq(const VelocityField& v, int k);
/// (||grad^k f||^2 + ||f||^2)^(1/2), k in 0..3.
double hk_norm(const ScalarField& f, int k);
double hk_norm(const VelocityField& v, int k);
/// sum_{jl} ||T_jl||^2 with off-diagonal entries counted twice.
double frobenius_norm_sq(const SymTensor& t);

/// Largest |c(n) - conj c(-n)| over modes whose partner is stored.
double hermitian_defect(const ScalarField& f);
double hermitian_defect(const VelocityField& v);
/// Largest |k.v(k)| / |k| over nonzero modes, plus |v(0)|, relative to the
/// largest coefficient magnitude |v(k)|.
double divergence_defect(const VelocityField& v);
/// Largest coefficient magnitude outside the Galerkin set.
double support_defect(const ScalarField& f);

/// Physical-space snapshot: JSON header line, then row-major float64 LE
/// payload of each named field on the N grid.
struct Snapshot {
    std::array<int, 3> n{};
    std::array<double, 3> lengths{};
    double t = 0.0;
    std::vector<std::string> names;
    std::vector<std::vector<double>> fields;
};

void write_snapshot(const std::string& path, const Snapshot& snap);
Snapshot read_snapshot(const std::string& path);

}  // namespace kolmo
