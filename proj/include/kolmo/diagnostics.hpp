#pragma once

// Per-record measurements of a trajectory and the post-hoc checks of the
// energy inequalities, maximum principles, viscosity floor and truncation
// activity. Every check is a pure function of the records, so a saved CSV
// can be re-verified without the states.

#include <string>
#include <vector>

#include "json.hpp"
#include "kolmo/cutoffs.hpp"
#include "kolmo/galerkin.hpp"
#include "kolmo/model.hpp"

namespace kolmo {

struct DiagnosticsRecord {
    double t = 0.0;

    // squared L2 norms and seminorms
    double v_l2sq = 0, v_grad_sq = 0, v_sym_sq = 0;
    double w_l2sq = 0, w_grad_sq = 0;
    double b_l2sq = 0, b_grad_sq = 0;
    // H1 / H2 norms
    double v_h1 = 0, v_h2 = 0, w_h1 = 0, w_h2 = 0, b_h1 = 0, b_h2 = 0;

    // extrema over the quadrature grid
    double w_min = 0, w_max = 0, b_min = 0, b_max = 0, b_abs_max = 0;
    double mu_min = 0, mu_max = 0;

    // int mu |D v|^2, int mu |grad w|^2, int mu |grad b|^2
    double diss_v = 0, diss_w = 0, diss_b = 0;

    // share of quadrature points where a cutoff differs from the identity
    double act_Psi = 0, act_Phi = 0, act_psi = 0, act_phi = 0;

    // instantaneous residuals of the energy inequalities; <= 0 when satisfied
    double res_v = 0, res_w = 0, res_b = 0;

    double b_star = 0, omega_star = 0, omega_dstar = 0, mu_star = 0;

    double hermitian_defect = 0, divergence_defect = 0;
};

/// Measure one state. `cutoffs` should be built at state.t.
DiagnosticsRecord record(const State& state, const CutoffSet& cutoffs, const ModelParams& params);

/// Column names of the trajectory CSV, in order.
const std::vector<std::string>& record_columns();
std::vector<double> record_values(const DiagnosticsRecord& r);
DiagnosticsRecord record_from_values(const std::vector<double>& values);

void write_records_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records);
/// Throws std::runtime_error with a descriptive message on an unknown schema.
std::vector<DiagnosticsRecord> read_records_csv(const std::string& path);

struct Violation {
    std::size_t index = 0;  // record index (second record of a pair for step checks)
    double t = 0.0;
    double amount = 0.0;
    std::string what;
};

struct CheckReport {
    std::string name;
    bool passed = true;
    double max_violation = 0.0;
    std::vector<Violation> violations;
    nlohmann::json details = nlohmann::json::object();

    nlohmann::json to_json() const;
};

/// Coefficients entering the inequalities (all 1 in the default model).
struct CheckCoefficients {
    double nu0 = 1.0, kappa1 = 1.0, kappa3 = 1.0, kappa4 = 1.0;
    static CheckCoefficients from(const ModelParams& p) {
        return {p.nu0, p.kappa1, p.kappa3, p.kappa4};
    }
};

/// ||v||^2 and ||omega||^2 nonincreasing (relative slack), plus the
/// integrated dissipation forms over each step.
CheckReport check_energy_monotonicity(const std::vector<DiagnosticsRecord>& recs,
                                      const CheckCoefficients& k = {}, double slack = 1e-8);
/// Integrated b budget over each step.
CheckReport check_b_growth(const std::vector<DiagnosticsRecord>& recs,
                           const CheckCoefficients& k = {}, double slack = 1e-8);
/// Pointwise threshold bounds with slack eps.
CheckReport check_max_principles(const std::vector<DiagnosticsRecord>& recs, double eps = 1e-3);
CheckReport check_truncation_inactive(const std::vector<DiagnosticsRecord>& recs);
CheckReport check_mu_floor(const std::vector<DiagnosticsRecord>& recs, double tol = 1e-12);
/// ||D v||^2 = 1/2 ||grad v||^2 for every record.
CheckReport check_korn(const std::vector<DiagnosticsRecord>& recs, double rel_tol = 1e-10);
CheckReport check_h2_ceiling(const std::vector<DiagnosticsRecord>& recs, double ceiling = 1e12);
CheckReport check_structure(const std::vector<DiagnosticsRecord>& recs, double tol = 1e-10);

struct VerifyOptions {
    CheckCoefficients coefficients;
    double max_principle_eps = 1e-3;
    double h2_ceiling = 1e12;
};

std::vector<CheckReport> verify_all(const std::vector<DiagnosticsRecord>& recs,
                                    const VerifyOptions& opts = {});

/// Whether the maximum-principle violation of a finer run is strictly below
/// that of a coarser one. Two zero violations do not count as shrinking.
struct RefinementComparison {
    double coarse = 0.0;
    double fine = 0.0;
    bool shrinks = false;
};
RefinementComparison compare_refinement(const CheckReport& coarse, const CheckReport& fine);

/// delta = ||v0||_{2,2}^2 + ||omega0||_{2,2}^2 + ||b0||_{2,2}^2.
double h2_delta(const VelocityField& v0, const ScalarField& omega0, const ScalarField& b0);

}  // namespace kolmo
