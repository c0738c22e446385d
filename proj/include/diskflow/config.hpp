#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

namespace diskflow {

enum class Experiment { evolve_stokes, evolve_ns, kato, fit_decay, compare_asymptotic, mode_heat };

Experiment parse_experiment(const std::string& s);
std::string to_string(Experiment e);

/// Resolved experiment configuration. Text form: `key = value` lines under
/// `[section]` headers; `#` starts a comment.
struct ExperimentConfig {
    // [physical]
    double nu = 1.0;
    double m = 6.283185307179586;
    bool homogeneous = true;
    double inertia = 0.0;  // used only when homogeneous = false

    // [grid]
    int n_points = 2048;
    double r_max = 100.0;
    double stretch = 3.0;

    // [time]
    double dt = 0.01;
    double t_end = 100.0;
    double t_first = 1.0;          // first output time
    double output_ratio = 1.189207115002721;  // 2^(1/4)

    // [spectral]
    int k_max = 1;
    int n_theta = 0;
    bool dealias = true;

    // [initial_data]
    std::string preset;
    std::string field_file;
    double amplitude = 1.0;
    double width = 1.0;
    double q = 1.5;      // integrability index of the tail data
    double delta = 0.02;
    int heat_k = 0;      // mode-heat: angular index of the scalar system
    double alpha = 0.0;  // mode-heat: boundary coefficient, 0 selects 4 pi / (pi + m)

    // [experiment]
    Experiment experiment = Experiment::evolve_stokes;
    std::vector<double> norms{2.0, 4.0, std::numeric_limits<double>::infinity()};
    std::string output_dir = ".";
    bool checks = false;

    // [fit]
    double fit_t_min = 10.0;
    double fit_t_max = 100.0;
    double tolerance = 0.05;
    std::string input_file;  // fit-decay: time-series file to read
    std::string column;      // fit-decay: column to fit

    // [nonlinear]
    int kato_max_iters = 30;
    double kato_tol = 1e-12;
    double blowup_factor = 10.0;
    double cfl = 0.5;

    void validate() const;
};

/// Parses config text. When `[initial_data] preset` is set, the preset's
/// defaults are the base and other keys override them. Errors name the key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Applies `section.key = value` to cfg.
void set_config_value(ExperimentConfig& cfg, const std::string& section, const std::string& key,
                      const std::string& value);

/// Canonical text of every field, one section per block.
std::string render_config(const ExperimentConfig& cfg);

}  // namespace diskflow
