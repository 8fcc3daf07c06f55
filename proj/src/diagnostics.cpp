#include "kolmo/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace kolmo {

namespace {

constexpr double kActivityTol = 1e-12;

bool differs(double fx, double x) {
    return std::abs(fx - x) > kActivityTol * std::max(1.0, std::abs(x));
}

double quad_integral(const GridPtr& g, double sum) {
    return sum * g->volume() / static_cast<double>(g->quadrature_size());
}

}  // namespace

DiagnosticsRecord record(const State& state, const CutoffSet& cutoffs, const ModelParams& params) {
    const GridPtr& grid = state.grid();
    const Thresholds& th = cutoffs.thresholds;
    DiagnosticsRecord r;
    r.t = state.t;
    r.b_star = th.b_star;
    r.omega_star = th.omega_star;
    r.omega_dstar = th.omega_dstar;
    r.mu_star = th.mu_star;

    const SymTensor dv = sym_gradient(state.v);
    r.v_l2sq = l2_norm_sq(state.v);
    r.v_grad_sq = seminorm_sq(state.v, 1);
    r.v_sym_sq = frobenius_norm_sq(dv);
    r.w_l2sq = l2_norm_sq(state.omega);
    r.w_grad_sq = seminorm_sq(state.omega, 1);
    r.b_l2sq = l2_norm_sq(state.b);
    r.b_grad_sq = seminorm_sq(state.b, 1);
    r.v_h1 = hk_norm(state.v, 1);
    r.v_h2 = hk_norm(state.v, 2);
    r.w_h1 = hk_norm(state.omega, 1);
    r.w_h2 = hk_norm(state.omega, 2);
    r.b_h1 = hk_norm(state.b, 1);
    r.b_h2 = hk_norm(state.b, 2);

    const auto wq = to_quadrature(state.omega);
    const auto bq = to_quadrature(state.b);
    std::array<std::vector<double>, 6> dq;
    for (int p = 0; p < 6; ++p) dq[p] = to_quadrature(dv[p]);
    const auto gw = gradient(state.omega);
    const auto gb = gradient(state.b);
    std::array<std::vector<double>, 3> gwq, gbq;
    for (int a = 0; a < 3; ++a) {
        gwq[a] = to_quadrature(gw[a]);
        gbq[a] = to_quadrature(gb[a]);
    }

    const std::size_t nq = grid->quadrature_size();
    r.w_min = r.b_min = r.mu_min = std::numeric_limits<double>::infinity();
    r.w_max = r.b_max = r.mu_max = -std::numeric_limits<double>::infinity();
    double sv = 0, sw = 0, sb = 0;
    std::size_t nPsi = 0, nPhi = 0, npsi = 0, nphi = 0;
    for (std::size_t i = 0; i < nq; ++i) {
        const double w = wq[i];
        const double b = bq[i];
        const double Psi = cutoffs.Psi(b);
        const double Phi = cutoffs.Phi(w);
        const double mu = Psi / Phi;
        r.w_min = std::min(r.w_min, w);
        r.w_max = std::max(r.w_max, w);
        r.b_min = std::min(r.b_min, b);
        r.b_max = std::max(r.b_max, b);
        r.mu_min = std::min(r.mu_min, mu);
        r.mu_max = std::max(r.mu_max, mu);
        const double d2 = dq[0][i] * dq[0][i] + dq[1][i] * dq[1][i] + dq[2][i] * dq[2][i] +
                          2.0 * (dq[3][i] * dq[3][i] + dq[4][i] * dq[4][i] + dq[5][i] * dq[5][i]);
        sv += mu * d2;
        sw += mu * (gwq[0][i] * gwq[0][i] + gwq[1][i] * gwq[1][i] + gwq[2][i] * gwq[2][i]);
        sb += mu * (gbq[0][i] * gbq[0][i] + gbq[1][i] * gbq[1][i] + gbq[2][i] * gbq[2][i]);
        nPsi += differs(Psi, b);
        nPhi += differs(Phi, w);
        npsi += differs(cutoffs.psi(b), b);
        nphi += differs(cutoffs.phi(w), w);
    }
    r.b_abs_max = std::max(std::abs(r.b_min), std::abs(r.b_max));
    r.diss_v = quad_integral(grid, sv);
    r.diss_w = quad_integral(grid, sw);
    r.diss_b = quad_integral(grid, sb);
    const double inv = 1.0 / static_cast<double>(nq);
    r.act_Psi = nPsi * inv;
    r.act_Phi = nPhi * inv;
    r.act_psi = npsi * inv;
    r.act_phi = nphi * inv;

    const RhsBundle rhs = galerkin_rhs(state, cutoffs, params);
    r.res_v = 2.0 * inner(rhs.dv, state.v) + 2.0 * params.nu0 * th.mu_star * r.v_sym_sq;
    r.res_w = 2.0 * inner(rhs.domega, state.omega) + 2.0 * params.kappa1 * th.mu_star * r.w_grad_sq;
    r.res_b = 2.0 * inner(rhs.db, state.b) + 2.0 * params.kappa3 * th.mu_star * r.b_grad_sq -
              2.0 * params.kappa4 * r.b_abs_max * r.mu_max * r.v_grad_sq;

    r.hermitian_defect = std::max({hermitian_defect(state.v), hermitian_defect(state.omega),
                                   hermitian_defect(state.b)});
    r.divergence_defect = divergence_defect(state.v);
    return r;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

struct Column {
    const char* name;
    double DiagnosticsRecord::*field;
};

constexpr Column kColumns[] = {
    {"t", &DiagnosticsRecord::t},
    {"v_l2sq", &DiagnosticsRecord::v_l2sq},
    {"v_grad_sq", &DiagnosticsRecord::v_grad_sq},
    {"v_sym_sq", &DiagnosticsRecord::v_sym_sq},
    {"w_l2sq", &DiagnosticsRecord::w_l2sq},
    {"w_grad_sq", &DiagnosticsRecord::w_grad_sq},
    {"b_l2sq", &DiagnosticsRecord::b_l2sq},
    {"b_grad_sq", &DiagnosticsRecord::b_grad_sq},
    {"v_h1", &DiagnosticsRecord::v_h1},
    {"v_h2", &DiagnosticsRecord::v_h2},
    {"w_h1", &DiagnosticsRecord::w_h1},
    {"w_h2", &DiagnosticsRecord::w_h2},
    {"b_h1", &DiagnosticsRecord::b_h1},
    {"b_h2", &DiagnosticsRecord::b_h2},
    {"w_min", &DiagnosticsRecord::w_min},
    {"w_max", &DiagnosticsRecord::w_max},
    {"b_min", &DiagnosticsRecord::b_min},
    {"b_max", &DiagnosticsRecord::b_max},
    {"b_abs_max", &DiagnosticsRecord::b_abs_max},
    {"mu_min", &DiagnosticsRecord::mu_min},
    {"mu_max", &DiagnosticsRecord::mu_max},
    {"diss_v", &DiagnosticsRecord::diss_v},
    {"diss_w", &DiagnosticsRecord::diss_w},
    {"diss_b", &DiagnosticsRecord::diss_b},
    {"act_Psi", &DiagnosticsRecord::act_Psi},
    {"act_Phi", &DiagnosticsRecord::act_Phi},
    {"act_psi", &DiagnosticsRecord::act_psi},
    {"act_phi", &DiagnosticsRecord::act_phi},
    {"res_v", &DiagnosticsRecord::res_v},
    {"res_w", &DiagnosticsRecord::res_w},
    {"res_b", &DiagnosticsRecord::res_b},
    {"b_star", &DiagnosticsRecord::b_star},
    {"omega_star", &DiagnosticsRecord::omega_star},
    {"omega_dstar", &DiagnosticsRecord::omega_dstar},
    {"mu_star", &DiagnosticsRecord::mu_star},
    {"hermitian_defect", &DiagnosticsRecord::hermitian_defect},
    {"divergence_defect", &DiagnosticsRecord::divergence_defect},
};

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        out.push_back(cell);
    }
    return out;
}

}  // namespace

const std::vector<std::string>& record_columns() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& c : kColumns) n.emplace_back(c.name);
        return n;
    }();
    return names;
}

std::vector<double> record_values(const DiagnosticsRecord& r) {
    std::vector<double> v;
    v.reserve(std::size(kColumns));
    for (const auto& c : kColumns) v.push_back(r.*(c.field));
    return v;
}

DiagnosticsRecord record_from_values(const std::vector<double>& values) {
    if (values.size() != std::size(kColumns)) {
        throw std::invalid_argument("record_from_values: wrong number of values");
    }
    DiagnosticsRecord r;
    for (std::size_t i = 0; i < values.size(); ++i) r.*(kColumns[i].field) = values[i];
    return r;
}

void write_records_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    const auto& names = record_columns();
    for (std::size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << names[i];
    os << '\n' << std::setprecision(17);
    for (const auto& r : records) {
        const auto vals = record_values(r);
        for (std::size_t i = 0; i < vals.size(); ++i) os << (i ? "," : "") << vals[i];
        os << '\n';
    }
}

std::vector<DiagnosticsRecord> read_records_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open trajectory CSV " + path);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("trajectory CSV is empty: " + path);
    const auto header = split_csv(line);
    const auto& expected = record_columns();
    if (header != expected) {
        std::string msg = "unknown trajectory CSV schema in " + path + ": ";
        if (header.size() != expected.size()) {
            msg += "expected " + std::to_string(expected.size()) + " columns, found " +
                   std::to_string(header.size());
        } else {
            for (std::size_t i = 0; i < header.size(); ++i) {
                if (header[i] != expected[i]) {
                    msg += "column " + std::to_string(i) + " is '" + header[i] + "', expected '" +
                           expected[i] + "'";
                    break;
                }
            }
        }
        throw std::runtime_error(msg);
    }
    std::vector<DiagnosticsRecord> out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != expected.size()) {
            throw std::runtime_error("trajectory CSV line " + std::to_string(lineno) +
                                     " has the wrong number of fields");
        }
        std::vector<double> vals;
        vals.reserve(cells.size());
        for (const auto& c : cells) {
            try {
                vals.push_back(std::stod(c));
            } catch (const std::exception&) {
                // stod rejects "nan"/"inf" spellings on some libcs
                if (c == "nan" || c == "-nan") vals.push_back(std::numeric_limits<double>::quiet_NaN());
                else if (c == "inf") vals.push_back(std::numeric_limits<double>::infinity());
                else if (c == "-inf") vals.push_back(-std::numeric_limits<double>::infinity());
                else throw std::runtime_error("trajectory CSV line " + std::to_string(lineno) +
                                              ": bad number '" + c + "'");
            }
        }
        out.push_back(record_from_values(vals));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Checks

nlohmann::json CheckReport::to_json() const {
    nlohmann::json j = {{"check", name},
                        {"passed", passed},
                        {"max_violation", max_violation},
                        {"violation_count", violations.size()},
                        {"details", details}};
    auto& list = j["violations"] = nlohmann::json::array();
    for (std::size_t i = 0; i < violations.size() && i < 20; ++i) {
        const auto& v = violations[i];
        list.push_back({{"index", v.index}, {"t", v.t}, {"amount", v.amount}, {"what", v.what}});
    }
    return j;
}

namespace {

void note(CheckReport& rep, std::size_t idx, double t, double amount, const std::string& what) {
    // NaN compares false everywhere; treat it as a violation.
    if (amount > 0.0 || std::isnan(amount)) {
        rep.passed = false;
        rep.violations.push_back({idx, t, amount, what});
        rep.max_violation = std::isnan(amount) ? amount : std::max(rep.max_violation, amount);
    }
}

}  // namespace

CheckReport check_energy_monotonicity(const std::vector<DiagnosticsRecord>& recs,
                                      const CheckCoefficients& k, double slack) {
    CheckReport rep;
    rep.name = "energy_monotonicity";
    for (std::size_t i = 1; i < recs.size(); ++i) {
        const auto& a = recs[i - 1];
        const auto& b = recs[i];
        const double dt = b.t - a.t;
        note(rep, i, b.t, b.v_l2sq - a.v_l2sq * (1.0 + slack), "||v||^2 increased");
        note(rep, i, b.t, b.w_l2sq - a.w_l2sq * (1.0 + slack), "||omega||^2 increased");
        const double diss_v =
            2.0 * k.nu0 * dt * 0.5 * (a.mu_star * a.v_sym_sq + b.mu_star * b.v_sym_sq);
        const double diss_w =
            2.0 * k.kappa1 * dt * 0.5 * (a.mu_star * a.w_grad_sq + b.mu_star * b.w_grad_sq);
        note(rep, i, b.t, (b.v_l2sq - a.v_l2sq) + diss_v - slack * a.v_l2sq,
             "velocity dissipation budget");
        note(rep, i, b.t, (b.w_l2sq - a.w_l2sq) + diss_w - slack * a.w_l2sq,
             "omega dissipation budget");
    }
    rep.details = {{"pairs", recs.empty() ? 0 : recs.size() - 1}, {"slack", slack}};
    return rep;
}

CheckReport check_b_growth(const std::vector<DiagnosticsRecord>& recs, const CheckCoefficients& k,
                           double slack) {
    CheckReport rep;
    rep.name = "b_growth";
    for (std::size_t i = 1; i < recs.size(); ++i) {
        const auto& a = recs[i - 1];
        const auto& b = recs[i];
        const double dt = b.t - a.t;
        const double diss =
            2.0 * k.kappa3 * dt * 0.5 * (a.mu_star * a.b_grad_sq + b.mu_star * b.b_grad_sq);
        const double source = 2.0 * k.kappa4 * dt * std::max(a.b_abs_max, b.b_abs_max) *
                              std::max(a.mu_max, b.mu_max) * 0.5 * (a.v_grad_sq + b.v_grad_sq);
        note(rep, i, b.t, (b.b_l2sq - a.b_l2sq) + diss - source - slack * a.b_l2sq,
             "b energy budget");
    }
    rep.details = {{"pairs", recs.empty() ? 0 : recs.size() - 1}, {"slack", slack}};
    return rep;
}

CheckReport check_max_principles(const std::vector<DiagnosticsRecord>& recs, double eps) {
    CheckReport rep;
    rep.name = "max_principles";
    double w_low = 0, w_high = 0, b_low = 0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto& r = recs[i];
        const double lo = r.omega_star - r.w_min;
        const double hi = r.w_max - r.omega_dstar;
        const double bl = r.b_star - r.b_min;
        w_low = std::max(w_low, lo);
        w_high = std::max(w_high, hi);
        b_low = std::max(b_low, bl);
        note(rep, i, r.t, lo - eps, "omega below omega_star");
        note(rep, i, r.t, hi - eps, "omega above omega_dstar");
        note(rep, i, r.t, bl - eps, "b below b_star");
        if (!std::isfinite(r.w_min) || !std::isfinite(r.w_max) || !std::isfinite(r.b_min)) {
            note(rep, i, r.t, std::numeric_limits<double>::quiet_NaN(), "non-finite extrema");
        }
    }
    rep.max_violation = std::max({w_low, w_high, b_low, 0.0});
    rep.details = {{"eps", eps},
                   {"omega_low", w_low},
                   {"omega_high", w_high},
                   {"b_low", b_low},
                   {"max_violation", rep.max_violation}};
    return rep;
}

CheckReport check_truncation_inactive(const std::vector<DiagnosticsRecord>& recs) {
    CheckReport rep;
    rep.name = "truncation_inactive";
    double worst = 0.0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto& r = recs[i];
        const double a = std::max({r.act_Psi, r.act_Phi, r.act_psi, r.act_phi});
        worst = std::max(worst, a);
        note(rep, i, r.t, a, "cutoff active");
    }
    rep.max_violation = worst;
    rep.details = {{"max_activity_fraction", worst}};
    return rep;
}

CheckReport check_mu_floor(const std::vector<DiagnosticsRecord>& recs, double tol) {
    CheckReport rep;
    rep.name = "mu_floor";
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto& r = recs[i];
        margin = std::min(margin, r.mu_min - r.mu_star);
        note(rep, i, r.t, r.mu_star - tol - r.mu_min, "mu below mu_star");
    }
    rep.details = {{"tol", tol}, {"min_margin", recs.empty() ? 0.0 : margin}};
    return rep;
}

CheckReport check_korn(const std::vector<DiagnosticsRecord>& recs, double rel_tol) {
    CheckReport rep;
    rep.name = "korn";
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto& r = recs[i];
        const double gap = std::abs(r.v_sym_sq - 0.5 * r.v_grad_sq);
        note(rep, i, r.t, gap - rel_tol * std::max(r.v_grad_sq, 1e-300), "||Dv||^2 != ||grad v||^2/2");
    }
    rep.details = {{"rel_tol", rel_tol}};
    return rep;
}

CheckReport check_h2_ceiling(const std::vector<DiagnosticsRecord>& recs, double ceiling) {
    CheckReport rep;
    rep.name = "h2_bounded";
    double peak = 0.0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto& r = recs[i];
        const double m = std::max({r.v_h2, r.w_h2, r.b_h2});
        peak = std::max(peak, m);
        note(rep, i, r.t, std::isfinite(m) ? m - ceiling : std::numeric_limits<double>::quiet_NaN(),
             "H2 norm above ceiling");
    }
    rep.details = {{"ceiling", ceiling}, {"peak_h2", peak}};
    return rep;
}

CheckReport check_structure(const std::vector<DiagnosticsRecord>& recs, double tol) {
    CheckReport rep;
    rep.name = "structure";
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto& r = recs[i];
        note(rep, i, r.t, r.hermitian_defect - tol, "Hermitian symmetry broken");
        note(rep, i, r.t, r.divergence_defect - tol, "velocity not divergence-free");
    }
    rep.details = {{"tol", tol}};
    return rep;
}

std::vector<CheckReport> verify_all(const std::vector<DiagnosticsRecord>& recs,
                                    const VerifyOptions& opts) {
    return {check_energy_monotonicity(recs, opts.coefficients),
            check_b_growth(recs, opts.coefficients),
            check_max_principles(recs, opts.max_principle_eps),
            check_truncation_inactive(recs),
            check_mu_floor(recs),
            check_korn(recs),
            check_h2_ceiling(recs, opts.h2_ceiling),
            check_structure(recs)};
}

RefinementComparison compare_refinement(const CheckReport& coarse, const CheckReport& fine) {
    RefinementComparison c;
    c.coarse = coarse.max_violation;
    c.fine = fine.max_violation;
    c.shrinks = c.fine < c.coarse;
    return c;
}

double h2_delta(const VelocityField& v0, const ScalarField& omega0, const ScalarField& b0) {
    const double v = hk_norm(v0, 2);
    const double w = hk_norm(omega0, 2);
    const double b = hk_norm(b0, 2);
    return v * v + w * w + b * b;
}

}  // namespace kolmo
