#pragma once

// Run configuration (flat dotted key = value text) and initial-data presets.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kolmo/integrator.hpp"
#include "kolmo/model.hpp"
#include "kolmo/spectral.hpp"

namespace kolmo {

struct GridConfig {
    std::array<int, 3> n{16, 16, 16};
    double oversampling = 2.0;
    double k2_cut = 0.0;  // 0 = automatic

    bool operator==(const GridConfig&) const = default;
};

struct InitialSpec {
    /// constant, perturbed-constant, random-smooth, coefficients or snapshot
    std::string preset = "constant";
    double omega_bar = 1.0;
    double b_bar = 1.0;
    double amp_v = 0.0;
    double amp_omega = 0.0;
    double amp_b = 0.0;
    int modes = 2;  // highest mode number per axis of random-smooth
    std::uint64_t seed = 1;
    /// "field n1 n2 n3 re im" entries separated by ';' (field: v1 v2 v3 omega b)
    std::string coefficients;
    std::string snapshot;

    bool operator==(const InitialSpec&) const = default;
};

struct OutputConfig {
    std::string dir = "out";
    int snapshot_every = 0;  // in records; 0 writes only the initial and final states

    bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
    ModelParams model;
    InitialBounds bounds;
    GridConfig grid;
    IntegratorConfig integrator;
    InitialSpec initial;
    double C_est = 1.0;
    OutputConfig output;

    bool operator==(const RunConfig&) const = default;
};

/// Carries every problem found while parsing, one per line.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

/// Missing keys take their defaults. Unknown keys, malformed values and range
/// violations are all collected and reported together.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize(const RunConfig& cfg);

/// Every key accepted by parse_config, in serialization order.
std::vector<std::string> config_keys();

struct InitialData {
    std::array<std::vector<double>, 3> v;
    std::vector<double> omega;
    std::vector<double> b;
};

/// Gridded initial data on the N grid. Preset amplitudes are clamped so that
/// b >= b_min and omega_min <= omega <= omega_max hold at every grid point;
/// coefficient and snapshot data are returned as given. Deterministic in the
/// seed.
InitialData build_initial(const InitialSpec& spec, const GridPtr& grid, const InitialBounds& bounds);

GridPtr make_grid(const RunConfig& cfg);

}  // namespace kolmo
