#include "kolmo/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace kolmo {

namespace {

std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double x = 0.0;
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, x);
    if (res.ec != std::errc() || res.ptr != end) throw std::invalid_argument("not a number: '" + s + "'");
    return x;
}

long long parse_int(const std::string& s) {
    long long x = 0;
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, x);
    if (res.ec != std::errc() || res.ptr != end) {
        throw std::invalid_argument("not an integer: '" + s + "'");
    }
    return x;
}

bool parse_bool(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw std::invalid_argument("not a boolean: '" + s + "'");
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct Field {
    std::string key;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
};

template <class Sec, class T>
Field member(std::string key, Sec RunConfig::*sec, T Sec::*m) {
    Field f;
    f.key = std::move(key);
    f.get = [sec, m](const RunConfig& c) {
        const T& v = c.*sec.*m;
        if constexpr (std::is_same_v<T, double>) return format_double(v);
        else if constexpr (std::is_same_v<T, bool>) return std::string(v ? "true" : "false");
        else if constexpr (std::is_same_v<T, std::string>) return v;
        else return std::to_string(v);
    };
    f.set = [sec, m](RunConfig& c, const std::string& s) {
        T& v = c.*sec.*m;
        if constexpr (std::is_same_v<T, double>) v = parse_double(s);
        else if constexpr (std::is_same_v<T, bool>) v = parse_bool(s);
        else if constexpr (std::is_same_v<T, std::string>) v = s;
        else if constexpr (std::is_same_v<T, std::uint64_t>) {
            if (s.empty() || s[0] == '-') throw std::invalid_argument("not a seed: '" + s + "'");
            std::uint64_t x = 0;
            const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
            if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
                throw std::invalid_argument("not a seed: '" + s + "'");
            }
            v = x;
        } else {
            v = static_cast<T>(parse_int(s));
        }
    };
    return f;
}

template <class Sec>
Field axis(std::string key, Sec RunConfig::*sec, std::array<double, 3> Sec::*m, int a) {
    return {std::move(key),
            [=](const RunConfig& c) { return format_double((c.*sec.*m)[a]); },
            [=](RunConfig& c, const std::string& s) { (c.*sec.*m)[a] = parse_double(s); }};
}

Field grid_axis(std::string key, int a) {
    return {std::move(key),
            [=](const RunConfig& c) { return std::to_string(c.grid.n[a]); },
            [=](RunConfig& c, const std::string& s) { c.grid.n[a] = static_cast<int>(parse_int(s)); }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        using R = RunConfig;
        std::vector<Field> t;
        t.push_back(member("model.nu0", &R::model, &ModelParams::nu0));
        t.push_back(member("model.kappa1", &R::model, &ModelParams::kappa1));
        t.push_back(member("model.kappa2", &R::model, &ModelParams::kappa2));
        t.push_back(member("model.kappa3", &R::model, &ModelParams::kappa3));
        t.push_back(member("model.kappa4", &R::model, &ModelParams::kappa4));
        t.push_back(axis("model.L1", &R::model, &ModelParams::L, 0));
        t.push_back(axis("model.L2", &R::model, &ModelParams::L, 1));
        t.push_back(axis("model.L3", &R::model, &ModelParams::L, 2));
        t.push_back(member("bounds.b_min", &R::bounds, &InitialBounds::b_min));
        t.push_back(member("bounds.omega_min", &R::bounds, &InitialBounds::omega_min));
        t.push_back(member("bounds.omega_max", &R::bounds, &InitialBounds::omega_max));
        t.push_back(grid_axis("grid.n1", 0));
        t.push_back(grid_axis("grid.n2", 1));
        t.push_back(grid_axis("grid.n3", 2));
        t.push_back(member("grid.oversampling", &R::grid, &GridConfig::oversampling));
        t.push_back(member("grid.k2_cut", &R::grid, &GridConfig::k2_cut));
        t.push_back({"integrator.method",
                     [](const R& c) { return std::string(to_string(c.integrator.method)); },
                     [](R& c, const std::string& s) { c.integrator.method = method_from_string(s); }});
        t.push_back(member("integrator.dt_init", &R::integrator, &IntegratorConfig::dt_init));
        t.push_back(member("integrator.dt_min", &R::integrator, &IntegratorConfig::dt_min));
        t.push_back(member("integrator.dt_max", &R::integrator, &IntegratorConfig::dt_max));
        t.push_back(member("integrator.safety", &R::integrator, &IntegratorConfig::safety));
        t.push_back(member("integrator.t_end", &R::integrator, &IntegratorConfig::t_end));
        t.push_back(member("integrator.record_every", &R::integrator, &IntegratorConfig::record_every));
        t.push_back(member("integrator.stop_at_tstar", &R::integrator, &IntegratorConfig::stop_at_tstar));
        t.push_back(member("integrator.cfl", &R::integrator, &IntegratorConfig::cfl));
        t.push_back(member("integrator.rtol", &R::integrator, &IntegratorConfig::rtol));
        t.push_back(member("integrator.atol", &R::integrator, &IntegratorConfig::atol));
        t.push_back(member("integrator.cutoff_drift", &R::integrator, &IntegratorConfig::cutoff_drift));
        t.push_back(member("integrator.h2_ceiling", &R::integrator, &IntegratorConfig::h2_ceiling));
        t.push_back(member("initial.preset", &R::initial, &InitialSpec::preset));
        t.push_back(member("initial.omega_bar", &R::initial, &InitialSpec::omega_bar));
        t.push_back(member("initial.b_bar", &R::initial, &InitialSpec::b_bar));
        t.push_back(member("initial.amp_v", &R::initial, &InitialSpec::amp_v));
        t.push_back(member("initial.amp_omega", &R::initial, &InitialSpec::amp_omega));
        t.push_back(member("initial.amp_b", &R::initial, &InitialSpec::amp_b));
        t.push_back(member("initial.modes", &R::initial, &InitialSpec::modes));
        t.push_back(member("initial.seed", &R::initial, &InitialSpec::seed));
        t.push_back(member("initial.coefficients", &R::initial, &InitialSpec::coefficients));
        t.push_back(member("initial.snapshot", &R::initial, &InitialSpec::snapshot));
        t.push_back({"estimate.C_est", [](const R& c) { return format_double(c.C_est); },
                     [](R& c, const std::string& s) { c.C_est = parse_double(s); }});
        t.push_back(member("output.dir", &R::output, &OutputConfig::dir));
        t.push_back(member("output.snapshot_every", &R::output, &OutputConfig::snapshot_every));
        return t;
    }();
    return table;
}

void range_errors(const RunConfig& c, std::vector<std::string>& errs) {
    auto positive = [&](const char* key, double x) {
        if (!(x > 0.0) || !std::isfinite(x)) errs.push_back(std::string(key) + " must be positive (got " + format_double(x) + ")");
    };
    positive("model.nu0", c.model.nu0);
    positive("model.kappa1", c.model.kappa1);
    positive("model.kappa2", c.model.kappa2);
    positive("model.kappa3", c.model.kappa3);
    positive("model.kappa4", c.model.kappa4);
    positive("model.L1", c.model.L[0]);
    positive("model.L2", c.model.L[1]);
    positive("model.L3", c.model.L[2]);
    positive("bounds.b_min", c.bounds.b_min);
    positive("bounds.omega_min", c.bounds.omega_min);
    positive("bounds.omega_max", c.bounds.omega_max);
    if (c.bounds.omega_min > c.bounds.omega_max) {
        errs.push_back("bounds.omega_min must not exceed bounds.omega_max");
    }
    for (int a = 0; a < 3; ++a) {
        const int n = c.grid.n[a];
        if (n < 4 || n % 2 != 0) {
            errs.push_back("grid.n" + std::to_string(a + 1) + " must be even and at least 4 (got " +
                           std::to_string(n) + ")");
        }
    }
    if (!(c.grid.oversampling >= 1.5)) errs.push_back("grid.oversampling must be at least 1.5");
    if (!(c.grid.k2_cut >= 0.0)) errs.push_back("grid.k2_cut must be nonnegative");
    try {
        c.integrator.validate();
    } catch (const std::invalid_argument& e) {
        errs.push_back(e.what());
    }
    static const std::vector<std::string> presets{"constant", "perturbed-constant", "random-smooth",
                                                  "coefficients", "snapshot"};
    if (std::find(presets.begin(), presets.end(), c.initial.preset) == presets.end()) {
        errs.push_back("initial.preset '" + c.initial.preset +
                       "' is not one of constant, perturbed-constant, random-smooth, coefficients, snapshot");
    }
    positive("initial.omega_bar", c.initial.omega_bar);
    positive("initial.b_bar", c.initial.b_bar);
    if (c.initial.amp_v < 0.0) errs.push_back("initial.amp_v must be nonnegative");
    if (c.initial.amp_omega < 0.0) errs.push_back("initial.amp_omega must be nonnegative");
    if (c.initial.amp_b < 0.0) errs.push_back("initial.amp_b must be nonnegative");
    if (c.initial.modes < 1) errs.push_back("initial.modes must be at least 1");
    if (c.initial.preset == "snapshot") {
        if (c.initial.snapshot.empty()) errs.push_back("initial.snapshot is required for the snapshot preset");
        else if (!std::filesystem::exists(c.initial.snapshot)) {
            errs.push_back("initial.snapshot '" + c.initial.snapshot + "' does not exist");
        }
    }
    if (c.initial.preset == "coefficients" && c.initial.coefficients.empty()) {
        errs.push_back("initial.coefficients is required for the coefficients preset");
    }
    positive("estimate.C_est", c.C_est);
    if (c.output.snapshot_every < 0) errs.push_back("output.snapshot_every must be nonnegative");
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error([&] {
          std::string msg = "invalid configuration:";
          for (const auto& e : errors) msg += "\n  " + e;
          return msg;
      }()),
      errors_(std::move(errors)) {}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& f : fields()) keys.push_back(f.key);
    return keys;
}

RunConfig parse_config(const std::string& text) {
    std::map<std::string, const Field*> by_key;
    for (const auto& f : fields()) by_key[f.key] = &f;

    RunConfig cfg;
    std::vector<std::string> errs;
    std::map<std::string, int> seen;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        const auto eq = s.find('=');
        const std::string where = "line " + std::to_string(lineno) + ": ";
        if (eq == std::string::npos) {
            errs.push_back(where + "expected 'key = value'");
            continue;
        }
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        const auto it = by_key.find(key);
        if (it == by_key.end()) {
            errs.push_back(where + "unknown key '" + key + "'");
            continue;
        }
        if (seen[key]++ > 0) {
            errs.push_back(where + "duplicate key '" + key + "'");
            continue;
        }
        try {
            it->second->set(cfg, value);
        } catch (const std::exception& e) {
            errs.push_back(where + key + ": " + e.what());
        }
    }
    range_errors(cfg, errs);
    if (!errs.empty()) throw ConfigError(std::move(errs));
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError({"cannot read config file '" + path + "'"});
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string serialize(const RunConfig& cfg) {
    std::string out;
    std::string section;
    for (const auto& f : fields()) {
        const std::string sec = f.key.substr(0, f.key.find('.'));
        if (sec != section) {
            if (!section.empty()) out += '\n';
            section = sec;
        }
        out += f.key + " = " + f.get(cfg) + '\n';
    }
    return out;
}

GridPtr make_grid(const RunConfig& cfg) {
    return SpectralGrid::create(cfg.grid.n, cfg.model.L,
                                {.oversampling = cfg.grid.oversampling, .k2_cut = cfg.grid.k2_cut});
}

// ---------------------------------------------------------------------------
// Initial data

namespace {

std::vector<double> sample(const GridPtr& grid, const std::function<double(double, double, double)>& f) {
    const auto& n = grid->n();
    std::vector<double> out(grid->physical_size());
    std::size_t p = 0;
    for (int i = 0; i < n[0]; ++i) {
        for (int j = 0; j < n[1]; ++j) {
            for (int l = 0; l < n[2]; ++l) {
                out[p++] = f(grid->coordinate(0, i), grid->coordinate(1, j), grid->coordinate(2, l));
            }
        }
    }
    return out;
}

double peak(const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m = std::max(m, std::abs(x));
    return m;
}

// Largest amplitude A such that centre + A*s stays in [lo, hi] for |s| <= 1.
double clamp_amplitude(double amp, double centre, double lo, double hi) {
    return std::clamp(std::min({amp, centre - lo, hi - centre}), 0.0, amp);
}

// Smooth random pattern with max |s| = 1 on the grid (or zero).
std::vector<double> random_pattern(const GridPtr& grid, int modes, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    ScalarField f(grid);
    const auto& n = grid->n();
    for (int a = -modes; a <= modes; ++a) {
        for (int b = -modes; b <= modes; ++b) {
            for (int c = 0; c <= modes; ++c) {
                if (c == 0 && (a < 0 || (a == 0 && b <= 0))) continue;  // one of each pair; no mean
                if (std::abs(a) >= n[0] / 2 || std::abs(b) >= n[1] / 2 || c >= n[2] / 2) {
                    // still draw, so the sequence does not depend on the grid
                    coef(rng);
                    phase(rng);
                    continue;
                }
                const double k2 = double(a) * a + double(b) * b + double(c) * c;
                const double amp = coef(rng) / (1.0 + k2);
                const double ph = phase(rng);
                f.c[grid->index_of({a, b, c})] = std::polar(amp, ph);
            }
        }
    }
    auto x = to_physical(f);
    const double m = peak(x);
    if (m > 0.0) {
        for (double& v : x) v /= m;
    }
    return x;
}

struct CoefEntry {
    int field;
    std::array<int, 3> n;
    Complex c;
};

std::vector<CoefEntry> parse_coefficients(const std::string& text) {
    std::vector<CoefEntry> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        std::istringstream is(item);
        std::string name;
        CoefEntry e{};
        double re = 0, im = 0;
        if (!(is >> name >> e.n[0] >> e.n[1] >> e.n[2] >> re >> im)) {
            throw std::invalid_argument("bad coefficient entry '" + item + "'");
        }
        static const std::map<std::string, int> names{{"v1", 0}, {"v2", 1}, {"v3", 2}, {"omega", 3}, {"b", 4}};
        const auto it = names.find(name);
        if (it == names.end()) throw std::invalid_argument("unknown field '" + name + "' in coefficients");
        e.field = it->second;
        e.c = {re, im};
        out.push_back(e);
    }
    return out;
}

}  // namespace

InitialData build_initial(const InitialSpec& spec, const GridPtr& grid, const InitialBounds& bounds) {
    InitialData d;
    const std::size_t np = grid->physical_size();
    const auto& L = grid->lengths();
    const double k1 = 2.0 * std::numbers::pi / L[0];
    const double k2 = 2.0 * std::numbers::pi / L[1];
    const double k3 = 2.0 * std::numbers::pi / L[2];

    if (spec.preset == "constant") {
        for (auto& c : d.v) c.assign(np, 0.0);
        d.omega.assign(np, spec.omega_bar);
        d.b.assign(np, spec.b_bar);
        return d;
    }
    if (spec.preset == "perturbed-constant") {
        const double aw = clamp_amplitude(spec.amp_omega, spec.omega_bar, bounds.omega_min, bounds.omega_max);
        const double ab = clamp_amplitude(spec.amp_b, spec.b_bar, bounds.b_min, INFINITY);
        const double av = spec.amp_v;
        d.v[0] = sample(grid, [&](double, double y, double) { return av * std::sin(k2 * y); });
        d.v[1] = sample(grid, [&](double, double, double z) { return av * std::sin(k3 * z); });
        d.v[2] = sample(grid, [&](double x, double, double) { return av * std::sin(k1 * x); });
        d.omega = sample(grid, [&](double x, double y, double z) {
            return spec.omega_bar + aw * std::cos(k1 * x) * std::cos(k2 * y) * std::cos(k3 * z);
        });
        d.b = sample(grid, [&](double x, double y, double z) {
            return spec.b_bar + ab * std::cos(k1 * x + k2 * y) * std::cos(k3 * z);
        });
        return d;
    }
    if (spec.preset == "random-smooth") {
        std::mt19937_64 rng(spec.seed);
        std::array<std::vector<double>, 3> raw;
        for (auto& c : raw) c = random_pattern(grid, spec.modes, rng);
        const auto sw = random_pattern(grid, spec.modes, rng);
        const auto sb = random_pattern(grid, spec.modes, rng);
        std::array<ScalarField, 3> u{to_spectral(grid, raw[0]), to_spectral(grid, raw[1]),
                                     to_spectral(grid, raw[2])};
        const VelocityField v = leray_project(u);
        double vmax = 0.0;
        for (int a = 0; a < 3; ++a) {
            d.v[a] = to_physical(v[a]);
            vmax = std::max(vmax, peak(d.v[a]));
        }
        if (vmax > 0.0) {
            for (auto& c : d.v) {
                for (double& x : c) x *= spec.amp_v / vmax;
            }
        }
        const double aw = clamp_amplitude(spec.amp_omega, spec.omega_bar, bounds.omega_min, bounds.omega_max);
        const double ab = clamp_amplitude(spec.amp_b, spec.b_bar, bounds.b_min, INFINITY);
        d.omega.resize(np);
        d.b.resize(np);
        for (std::size_t i = 0; i < np; ++i) {
            d.omega[i] = spec.omega_bar + aw * sw[i];
            d.b[i] = spec.b_bar + ab * sb[i];
        }
        return d;
    }
    if (spec.preset == "coefficients") {
        std::array<ScalarField, 5> f{ScalarField(grid), ScalarField(grid), ScalarField(grid),
                                     ScalarField::constant(grid, spec.omega_bar),
                                     ScalarField::constant(grid, spec.b_bar)};
        for (const auto& e : parse_coefficients(spec.coefficients)) {
            auto n = e.n;
            Complex c = e.c;
            if (n[2] < 0) {
                for (int& x : n) x = -x;
                c = std::conj(c);
            }
            f[e.field].c[grid->index_of(n)] += c;
            // the n3 = 0 plane stores both members of a conjugate pair
            if (n[2] == 0 && (n[0] != 0 || n[1] != 0)) {
                f[e.field].c[grid->index_of({-n[0], -n[1], 0})] += std::conj(c);
            } else if (n == std::array<int, 3>{0, 0, 0}) {
                f[e.field].c[0] = f[e.field].c[0].real();
            }
        }
        for (int a = 0; a < 3; ++a) d.v[a] = to_physical(f[a]);
        d.omega = to_physical(f[3]);
        d.b = to_physical(f[4]);
        return d;
    }
    if (spec.preset == "snapshot") {
        const Snapshot s = read_snapshot(spec.snapshot);
        if (s.n != grid->n()) throw std::invalid_argument("snapshot grid does not match grid.n*");
        auto take = [&](const std::string& name) {
            const auto it = std::find(s.names.begin(), s.names.end(), name);
            if (it == s.names.end()) throw std::invalid_argument("snapshot lacks field '" + name + "'");
            return s.fields[it - s.names.begin()];
        };
        d.v = {take("v1"), take("v2"), take("v3")};
        d.omega = take("omega");
        d.b = take("b");
        return d;
    }
    throw std::invalid_argument("unknown initial preset '" + spec.preset + "'");
}

}  // namespace kolmo
