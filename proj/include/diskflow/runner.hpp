#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "diskflow/config.hpp"

namespace diskflow {

/// Pass/fail thresholds shared by the runner checks and the acceptance binary.
namespace tolerance {
inline constexpr double mass_drift = 1e-10;
inline constexpr double lyapunov_increase = 1e-10;
inline constexpr double kick_ratio = 0.1;
inline constexpr double translation_ratio = 0.15;
inline constexpr double omega_exponent = -2.0;
inline constexpr double omega_band = 0.2;
inline constexpr double semigroup_exponent = -0.5;
inline constexpr double semigroup_band = 0.05;
inline constexpr double profile_ratio = 0.5;
inline constexpr double neutral_ell_exponent = -1.15;
inline constexpr double higher_mode_exponent = -1.2;
inline constexpr double elliptic_relative = 1e-8;
inline constexpr double leray_relative = 1e-10;
inline constexpr double added_mass_relative = 1e-8;
inline constexpr double energy_slack = 1e-8;
inline constexpr double kato_vs_imex = 1e-3;
inline constexpr double improved_base_band = 0.05;
inline constexpr double improved_difference_exponent = -0.25;
inline constexpr double refinement_fraction = 0.25;
}  // namespace tolerance

struct SummaryRow {
    std::string label;
    double p = 0.0;
    double q = 0.0;
    double expected = 0.0;
    double fitted = 0.0;
    double residual = 0.0;
    bool checked = false;  // pass is meaningful only for checked rows
    bool pass = true;
};

struct RunResult {
    std::vector<SummaryRow> summary;
    std::vector<std::string> files;
    std::vector<std::string> warnings;
    bool checks_failed = false;
};

/// Executes the configured experiment and writes its tables into output_dir.
RunResult run_experiment(const ExperimentConfig& cfg);

/// CLI entry: loads the config, runs, prints diagnostics. Returns 0 on
/// success, 2 when requested checks fail, 1 on any error.
int run_config_file(const std::string& path, std::ostream& out, std::ostream& err);

/// Thread count from DISKFLOW_THREADS (1 when unset or invalid).
int threads_from_environment();

}  // namespace diskflow
