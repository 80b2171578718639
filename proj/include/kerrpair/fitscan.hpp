#ifndef KERRPAIR_FITSCAN_HPP
#define KERRPAIR_FITSCAN_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kerrpair/cascade.hpp"
#include "kerrpair/metrics.hpp"

namespace kerrpair {

enum class TauPolicy { fixed, formula, optimize };
enum class Objective { fidelity, probability, both };

struct ScanSpec {
    Scheme scheme = Scheme::single_rail;
    // axis values in MHz (nu convention)
    std::vector<double> g_mhz;
    std::vector<double> kappa_c_mhz;
    std::vector<double> kappa_i_mhz;
    std::vector<double> chi_e_mhz; // single-rail axis
    std::vector<double> chi_c_mhz; // dual-rail axis
    Objective objective = Objective::fidelity;
    TauPolicy tau_policy = TauPolicy::formula;
    double tau_fixed_us = 0.0; // with TauPolicy::fixed
    CascadeOptions cascade{};

    std::size_t grid_size() const;
    void validate() const;
};

struct ScanRecord {
    double g_mhz = 0.0, kappa_c_mhz = 0.0, kappa_i_mhz = 0.0;
    double chi_e_mhz = 0.0, chi_c_mhz = 0.0;
    double tau_us = 0.0;
    double fidelity = 0.0;
    double p_post = 0.0; // dual-rail only
    double p1 = 0.0, p2 = 0.0;
    double dominant_fraction = 0.0;
    std::string flags; // ';'-joined, "error:..." on failure
    bool failed = false;
};

struct PulseOptimum {
    double tau_star;
    double objective_value;
    bool at_bracket_edge;
};

struct DriveOptimum {
    double g_star;
    double objective_value;
    double tau_star;
    bool at_bracket_edge;
};

// Evaluates one grid point: resolves tau from the policy, runs the cascade,
// extracts metrics. The building block for scans and optimizers.
ScanRecord evaluate_point(const ModelParams& params_without_tau, const ScanSpec& spec);

// Golden-section search for tau in [0.5, 1.5] tau_ideal (widened once to
// [0.25, 2.5] if the optimum sits at an edge), tolerance 1e-4/g.
PulseOptimum optimize_pulse(const ModelParams& params, Scheme scheme, Objective objective,
                            const CascadeOptions& options = {});

enum class DriveObjectiveSource { simulation, empirical_model };

struct DriveOptions {
    double g_lo_mhz = 2.0;
    double g_hi_mhz = 50.0;
    double rel_tol = 0.02;
    DriveObjectiveSource source = DriveObjectiveSource::simulation;
    TauPolicy tau_policy = TauPolicy::formula;
    Objective objective = Objective::fidelity;
    CascadeOptions cascade{};
};

// Maximizes the objective over g with tau resolved by the policy at each g.
DriveOptimum optimize_drive(const ModelParams& params_without_g, Scheme scheme,
                            const DriveOptions& options = {});

// Cartesian-product scan; rows are evaluated by a worker pool but emitted in
// deterministic axis-nesting order (g outermost, chi innermost). Failures are
// recorded per-row and do not abort the scan.
std::vector<ScanRecord> run_scan(const ScanSpec& spec, int workers = 1);

void write_scan_csv(std::ostream& os, Scheme scheme, const std::vector<ScanRecord>& records);
std::vector<ScanRecord> read_scan_csv(std::istream& is);

struct FitResult {
    std::vector<std::string> terms;
    std::vector<double> coefficients;
    std::vector<double> stderrs;
    double residual_norm = 0.0;
    double condition_number = 0.0;
    std::size_t n_records = 0;
};

enum class FitResponse { infidelity, improbability };

// Unweighted OLS of 1-F (or 1-P) on the dimensionless ratio terms, via QR.
// Standard errors come from the residual variance and (X^T X)^{-1}.
FitResult fit_model(const std::vector<ScanRecord>& records,
                    const std::vector<std::string>& terms,
                    FitResponse response = FitResponse::infidelity);

} // namespace kerrpair

#endif
