// Command-line driver: simulate, tstar, verify, oracle-check, cutoff-table.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"
#include "kolmo/config.hpp"
#include "kolmo/oracle.hpp"

namespace fs = std::filesystem;
using namespace kolmo;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kConfig = 2, kAdmissibility = 3, kVerification = 4, kBlowup = 5 };

RunConfig config_with_overrides(const std::string& path, const std::vector<std::string>& sets) {
    std::string text;
    if (!path.empty()) {
        std::ifstream is(path);
        if (!is) throw ConfigError({"cannot read config file '" + path + "'"});
        std::stringstream ss;
        ss << is.rdbuf();
        text = ss.str();
    }
    // later lines win: drop earlier assignments of overridden keys
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError({"--set expects key=value, got '" + s + "'"});
        const std::string key = s.substr(0, eq);
        std::stringstream in(text);
        std::string line, kept;
        while (std::getline(in, line)) {
            const auto e = line.find('=');
            std::string k = e == std::string::npos ? "" : line.substr(0, e);
            k.erase(0, k.find_first_not_of(" \t"));
            k.erase(k.find_last_not_of(" \t") + 1);
            if (k != key) kept += line + '\n';
        }
        text = kept + s + '\n';
    }
    return parse_config(text);
}

Snapshot snapshot_of(const State& s) {
    Snapshot snap;
    snap.n = s.grid()->n();
    snap.lengths = s.grid()->lengths();
    snap.t = s.t;
    snap.names = {"v1", "v2", "v3", "omega", "b"};
    snap.fields = {to_physical(s.v[0]), to_physical(s.v[1]), to_physical(s.v[2]),
                   to_physical(s.omega), to_physical(s.b)};
    return snap;
}

void print_reports(const std::vector<CheckReport>& reports, bool as_json) {
    for (const auto& r : reports) {
        if (as_json) {
            std::cout << r.to_json().dump() << '\n';
        } else {
            std::printf("%-22s %s  max_violation=%.3e  violations=%zu\n", r.name.c_str(),
                        r.passed ? "PASS" : "FAIL", r.max_violation, r.violations.size());
            for (std::size_t i = 0; i < r.violations.size() && i < 3; ++i) {
                const auto& v = r.violations[i];
                std::printf("    record %zu t=%.6g: %s (%.3e)\n", v.index, v.t, v.what.c_str(), v.amount);
            }
        }
    }
}

bool all_passed(const std::vector<CheckReport>& reports) {
    return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed; });
}

int cmd_simulate(const std::string& config_path, const std::vector<std::string>& sets, bool quiet) {
    const RunConfig cfg = config_with_overrides(config_path, sets);
    const GridPtr grid = make_grid(cfg);
    const InitialData init = build_initial(cfg.initial, grid, cfg.bounds);

    SimulateOptions opts;
    opts.C_est = cfg.C_est;
    opts.keep_states = cfg.output.snapshot_every > 0;
    const Trajectory traj = simulate(grid, init.v, init.omega, init.b, cfg.model, cfg.bounds,
                                     cfg.integrator, opts);

    const fs::path dir(cfg.output.dir);
    fs::create_directories(dir);
    {
        std::ofstream os(dir / "config.txt");
        os << serialize(cfg);
    }
    write_records_csv((dir / "trajectory.csv").string(), traj.records);
    write_snapshot((dir / "snapshot_initial.bin").string(), snapshot_of(traj.initial_state));
    write_snapshot((dir / "snapshot_final.bin").string(), snapshot_of(traj.final_state));
    if (cfg.output.snapshot_every > 0) {
        for (std::size_t i = 0; i < traj.states.size(); i += cfg.output.snapshot_every) {
            char name[64];
            std::snprintf(name, sizeof name, "snapshot_%06zu.bin", i);
            write_snapshot((dir / name).string(), snapshot_of(traj.states[i]));
        }
    }

    VerifyOptions vo;
    vo.coefficients = CheckCoefficients::from(cfg.model);
    vo.h2_ceiling = cfg.integrator.h2_ceiling;
    const auto reports = verify_all(traj.records, vo);
    json rep = {{"termination", to_string(traj.reason)},
                {"t_final", traj.final_state.t},
                {"steps", traj.steps},
                {"rejected_steps", traj.rejected},
                {"records", traj.records.size()},
                {"grid", grid->n()},
                {"quadrature_grid", grid->m()},
                {"retained_modes", grid->retained_count()},
                {"checks", json::array()}};
    if (traj.tstar) rep["tstar"] = *traj.tstar;
    for (const auto& r : reports) rep["checks"].push_back(r.to_json());
    std::ofstream(dir / "report.json") << rep.dump(2) << '\n';

    if (!quiet) {
        std::printf("termination: %s at t=%.10g after %ld steps (%zu records)\n",
                    to_string(traj.reason), traj.final_state.t, traj.steps, traj.records.size());
        print_reports(reports, false);
        std::printf("output written to %s\n", dir.string().c_str());
    }
    if (traj.reason == Termination::BlowupDetected || traj.reason == Termination::StepUnderflow) {
        return kBlowup;
    }
    return all_passed(reports) ? kOk : kVerification;
}

int cmd_tstar(double delta, const std::string& snapshot, const InitialBounds& bounds, double kappa2,
              double C_est, bool as_json) {
    bounds.validate();
    if (!(kappa2 > 0.0)) throw ConfigError({"kappa2 must be positive"});
    if (!(C_est > 0.0)) throw ConfigError({"C_est must be positive"});
    if (!snapshot.empty()) {
        const Snapshot s = read_snapshot(snapshot);
        const GridPtr grid = SpectralGrid::create(s.n, s.lengths);
        auto field = [&](const std::string& name) {
            const auto it = std::find(s.names.begin(), s.names.end(), name);
            if (it == s.names.end()) throw ConfigError({"snapshot lacks field '" + name + "'"});
            return to_spectral(grid, s.fields[it - s.names.begin()]);
        };
        VelocityField v(grid);
        v[0] = field("v1");
        v[1] = field("v2");
        v[2] = field("v3");
        delta = h2_delta(v, field("omega"), field("b"));
    }
    if (!(delta >= 0.0)) throw ConfigError({"delta must be nonnegative"});
    const EstimateConstants ec = estimate_constants(bounds, kappa2, C_est);
    const double T = existence_time(delta, bounds, kappa2, C_est);
    if (as_json) {
        json j = {{"delta", delta}, {"Q1", ec.q.Q1}, {"Q2", ec.q.Q2}, {"Q3", ec.q.Q3},
                  {"beta", ec.exps.beta}, {"beta_bar", ec.exps.beta_bar}, {"C_est", C_est},
                  {"tstar", T}};
        std::cout << j.dump(2) << '\n';
    } else {
        std::printf("delta    = %.17g\n", delta);
        std::printf("Q1       = %.17g\n", ec.q.Q1);
        std::printf("Q2       = %.17g\n", ec.q.Q2);
        std::printf("Q3       = %.17g\n", ec.q.Q3);
        std::printf("beta     = %.17g\n", ec.exps.beta);
        std::printf("beta_bar = %.17g\n", ec.exps.beta_bar);
        std::printf("T*       = %.17g\n", T);
    }
    return kOk;
}

int cmd_verify(const std::string& input, const std::string& config_path, double eps, bool as_json) {
    fs::path csv(input);
    fs::path cfg_file = config_path;
    if (fs::is_directory(csv)) {
        if (cfg_file.empty() && fs::exists(csv / "config.txt")) cfg_file = csv / "config.txt";
        csv /= "trajectory.csv";
    }
    VerifyOptions vo;
    vo.max_principle_eps = eps;
    if (!cfg_file.empty()) {
        const RunConfig cfg = load_config(cfg_file.string());
        vo.coefficients = CheckCoefficients::from(cfg.model);
        vo.h2_ceiling = cfg.integrator.h2_ceiling;
    }
    const auto records = read_records_csv(csv.string());
    if (records.size() < 2) {
        throw std::runtime_error("trajectory " + csv.string() + " has fewer than two records");
    }
    const auto reports = verify_all(records, vo);
    print_reports(reports, as_json);
    const bool ok = all_passed(reports);
    if (!as_json) {
        std::printf("%s: %zu records, %s\n", csv.string().c_str(), records.size(),
                    ok ? "all checks passed" : "CHECKS FAILED");
    }
    return ok ? kOk : kVerification;
}

int cmd_oracle_check(int states, std::uint64_t seed, int points, double oversampling) {
    const ModelParams params;
    const InitialBounds bounds{0.5, 0.5, 2.0};
    const CutoffSet cut = make_cutoff_set(thresholds_at(bounds, params.kappa2, 0.0));
    const GridPtr grid = SpectralGrid::create({4, 4, 4}, params.L, {.oversampling = oversampling});
    std::mt19937_64 rng(seed);
    bool ok = true;
    for (int s = 0; s < states; ++s) {
        const bool const_mu = s % 4 == 3;
        const State st = random_oracle_state(grid, rng, const_mu);
        const RhsBundle fast = galerkin_rhs(st, cut, params);
        const RhsBundle slow = rhs_bruteforce(st, cut, params, {.points = points});
        const double err = relative_distance(fast, slow);
        const double tol = const_mu ? 1e-10 : 1e-6;
        const bool pass = err <= tol;
        ok = ok && pass;
        std::printf("state %2d %-12s rel_err=%.3e tol=%.0e %s\n", s, const_mu ? "constant-mu" : "random",
                    err, tol, pass ? "PASS" : "FAIL");
    }
    std::printf("oracle-check: %s\n", ok ? "PASS" : "FAIL");
    return ok ? kOk : kVerification;
}

int cmd_cutoff_table(double b_star, double omega_star, double omega_dstar, int samples,
                     const std::string& out) {
    if (!(b_star > 0.0 && omega_star > 0.0 && omega_dstar >= omega_star)) {
        throw ConfigError({"thresholds must satisfy b_star > 0 and 0 < omega_star <= omega_dstar"});
    }
    if (samples < 2) throw ConfigError({"samples must be at least 2"});
    const Cutoff Psi = make_psi_upper(b_star);
    const Cutoff Phi = make_phi_twosided(omega_star, omega_dstar);
    const Cutoff psi = make_psi_lower(b_star);
    const Cutoff phi = make_phi_lower(omega_star);
    std::ofstream file;
    if (!out.empty()) {
        file.open(out);
        if (!file) throw std::runtime_error("cannot open " + out);
    }
    std::ostream& os = out.empty() ? std::cout : file;
    os << "x_b,Psi,Psi_d1,Psi_d2,psi,psi_d1,psi_d2,x_w,Phi,Phi_d1,Phi_d2,phi,phi_d1,phi_d2\n";
    os.precision(17);
    const double bmax = 2.0 * b_star;
    const double wmax = 3.0 * omega_dstar;
    for (int i = 0; i < samples; ++i) {
        const double s = static_cast<double>(i) / (samples - 1);
        const double xb = s * bmax;
        const double xw = s * wmax;
        os << xb << ',' << Psi(xb) << ',' << Psi.d1(xb) << ',' << Psi.d2(xb) << ',' << psi(xb) << ','
           << psi.d1(xb) << ',' << psi.d2(xb) << ',' << xw << ',' << Phi(xw) << ',' << Phi.d1(xw)
           << ',' << Phi.d2(xw) << ',' << phi(xw) << ',' << phi.d1(xw) << ',' << phi.d2(xw) << '\n';
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Truncated Galerkin solver for the Kolmogorov two-equation model"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "Run a simulation and write CSV, snapshots and report");
    std::string sim_config;
    std::vector<std::string> sim_sets;
    bool sim_quiet = false;
    sim->add_option("-c,--config", sim_config, "Config file (key = value)");
    sim->add_option("-s,--set", sim_sets, "Override a config key, e.g. --set grid.n1=32");
    sim->add_flag("-q,--quiet", sim_quiet, "Suppress the summary");

    auto* ts = app.add_subcommand("tstar", "Existence-time lower bound and its constants");
    double ts_delta = 0.0, ts_kappa2 = 1.0, ts_C = 1.0;
    InitialBounds ts_bounds;
    std::string ts_snapshot;
    bool ts_json = false;
    ts->add_option("--delta", ts_delta, "Summed squared H2 norms of the initial data");
    ts->add_option("--snapshot", ts_snapshot, "Compute delta from an initial-data snapshot");
    ts->add_option("--b-min", ts_bounds.b_min, "Lower bound of b0");
    ts->add_option("--omega-min", ts_bounds.omega_min, "Lower bound of omega0");
    ts->add_option("--omega-max", ts_bounds.omega_max, "Upper bound of omega0");
    ts->add_option("--kappa2", ts_kappa2, "Reaction coefficient kappa2");
    ts->add_option("--C-est", ts_C, "Constant of the a priori estimate");
    ts->add_flag("--json", ts_json, "Emit JSON");

    auto* ver = app.add_subcommand("verify", "Re-run the checks on a saved trajectory");
    std::string ver_input, ver_config;
    double ver_eps = 1e-3;
    bool ver_json = false;
    ver->add_option("input", ver_input, "Output directory or trajectory CSV")->required();
    ver->add_option("-c,--config", ver_config, "Config supplying model coefficients");
    ver->add_option("--eps", ver_eps, "Slack of the maximum-principle check");
    ver->add_flag("--json", ver_json, "One JSON object per check");

    auto* orc = app.add_subcommand("oracle-check", "Compare the fast RHS with brute-force quadrature");
    int orc_states = 20, orc_points = 64;
    std::uint64_t orc_seed = 2024;
    double orc_os = 2.0;
    orc->add_option("--states", orc_states, "Number of random states");
    orc->add_option("--seed", orc_seed, "RNG seed");
    orc->add_option("--points", orc_points, "Quadrature points per axis");
    orc->add_option("--oversampling", orc_os, "Oversampling factor of the fast path");

    auto* tab = app.add_subcommand("cutoff-table", "Tabulate the four cutoff families");
    double tab_b = 1.0, tab_ws = 1.0, tab_wds = 1.0;
    int tab_n = 201;
    std::string tab_out;
    tab->add_option("--b-star", tab_b, "b threshold");
    tab->add_option("--omega-star", tab_ws, "Lower omega threshold");
    tab->add_option("--omega-dstar", tab_wds, "Upper omega threshold");
    tab->add_option("--samples", tab_n, "Number of rows");
    tab->add_option("-o,--out", tab_out, "CSV path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_config, sim_sets, sim_quiet);
        if (ts->parsed()) return cmd_tstar(ts_delta, ts_snapshot, ts_bounds, ts_kappa2, ts_C, ts_json);
        if (ver->parsed()) return cmd_verify(ver_input, ver_config, ver_eps, ver_json);
        if (orc->parsed()) return cmd_oracle_check(orc_states, orc_seed, orc_points, orc_os);
        if (tab->parsed()) return cmd_cutoff_table(tab_b, tab_ws, tab_wds, tab_n, tab_out);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kConfig;
    } catch (const AdmissibilityError& e) {
        std::cerr << "inadmissible initial data: " << e.what() << '\n';
        return kAdmissibility;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    }
    return kOk;
}
