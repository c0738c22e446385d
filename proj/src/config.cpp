#include "diskflow/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "diskflow/error.hpp"
#include "diskflow/presets.hpp"
#include "diskflow/radial_grid.hpp"

namespace diskflow {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double to_double(const std::string& key, const std::string& v) {
    if (v == "inf" || v == "infinity") return kInf;
    double x = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size()) throw Error("config-parse", key + ": not a number: '" + v + "'");
    return x;
}

int to_int(const std::string& key, const std::string& v) {
    int x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size()) throw Error("config-parse", key + ": not an integer: '" + v + "'");
    return x;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw Error("config-parse", key + ": not a boolean: '" + v + "'");
}

struct Entry {
    const char* section;
    const char* key;
    std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

#define DF_DOUBLE(sec, name)                                                                              \
    Entry{sec, #name, [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.name = to_double(k, v); }, \
          [](const ExperimentConfig& c) { return fmt(c.name); }}
#define DF_INT(sec, name)                                                                              \
    Entry{sec, #name, [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.name = to_int(k, v); }, \
          [](const ExperimentConfig& c) { return std::to_string(c.name); }}
#define DF_BOOL(sec, name)                                                                              \
    Entry{sec, #name, [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.name = to_bool(k, v); }, \
          [](const ExperimentConfig& c) { return std::string(c.name ? "true" : "false"); }}
#define DF_STRING(sec, name)                                                                            \
    Entry{sec, #name, [](ExperimentConfig& c, const std::string&, const std::string& v) { c.name = v; }, \
          [](const ExperimentConfig& c) { return c.name; }}

const std::vector<Entry>& entries() {
    static const std::vector<Entry> table = {
        DF_DOUBLE("physical", nu),
        DF_DOUBLE("physical", m),
        DF_BOOL("physical", homogeneous),
        DF_DOUBLE("physical", inertia),
        DF_INT("grid", n_points),
        DF_DOUBLE("grid", r_max),
        DF_DOUBLE("grid", stretch),
        DF_DOUBLE("time", dt),
        DF_DOUBLE("time", t_end),
        DF_DOUBLE("time", t_first),
        DF_DOUBLE("time", output_ratio),
        DF_INT("spectral", k_max),
        DF_INT("spectral", n_theta),
        DF_BOOL("spectral", dealias),
        DF_STRING("initial_data", preset),
        DF_STRING("initial_data", field_file),
        DF_DOUBLE("initial_data", amplitude),
        DF_DOUBLE("initial_data", width),
        DF_DOUBLE("initial_data", q),
        DF_DOUBLE("initial_data", delta),
        DF_INT("initial_data", heat_k),
        DF_DOUBLE("initial_data", alpha),
        Entry{"experiment", "experiment",
              [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                  try {
                      c.experiment = parse_experiment(v);
                  } catch (const Error&) {
                      throw Error("config-parse", k + ": unknown experiment '" + v + "'");
                  }
              },
              [](const ExperimentConfig& c) { return to_string(c.experiment); }},
        Entry{"experiment", "norms",
              [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                  std::vector<double> ps;
                  std::stringstream ss(v);
                  std::string item;
                  while (std::getline(ss, item, ',')) ps.push_back(to_double(k, trim(item)));
                  if (ps.empty()) throw Error("config-parse", k + ": empty list");
                  c.norms = ps;
              },
              [](const ExperimentConfig& c) {
                  std::string s;
                  for (std::size_t i = 0; i < c.norms.size(); ++i) s += (i ? ", " : "") + fmt(c.norms[i]);
                  return s;
              }},
        DF_STRING("experiment", output_dir),
        DF_BOOL("experiment", checks),
        DF_DOUBLE("fit", fit_t_min),
        DF_DOUBLE("fit", fit_t_max),
        DF_DOUBLE("fit", tolerance),
        DF_STRING("fit", input_file),
        DF_STRING("fit", column),
        DF_INT("nonlinear", kato_max_iters),
        DF_DOUBLE("nonlinear", kato_tol),
        DF_DOUBLE("nonlinear", blowup_factor),
        DF_DOUBLE("nonlinear", cfl),
    };
    return table;
}

struct Line {
    int number;
    std::string section, key, value;
};

std::vector<Line> tokenize(const std::string& text) {
    std::vector<Line> out;
    std::stringstream ss(text);
    std::string raw, section;
    int number = 0;
    while (std::getline(ss, raw)) {
        ++number;
        const std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw Error("config-parse", "line " + std::to_string(number) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("config-parse", "line " + std::to_string(number) + ": expected key = value, got '" + line + "'");
        out.push_back({number, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
    }
    return out;
}

}  // namespace

Experiment parse_experiment(const std::string& s) {
    if (s == "evolve-stokes") return Experiment::evolve_stokes;
    if (s == "evolve-ns") return Experiment::evolve_ns;
    if (s == "kato") return Experiment::kato;
    if (s == "fit-decay") return Experiment::fit_decay;
    if (s == "compare-asymptotic") return Experiment::compare_asymptotic;
    if (s == "mode-heat") return Experiment::mode_heat;
    throw Error("invalid-argument", "unknown experiment '" + s + "'");
}

std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::evolve_stokes: return "evolve-stokes";
        case Experiment::evolve_ns: return "evolve-ns";
        case Experiment::kato: return "kato";
        case Experiment::fit_decay: return "fit-decay";
        case Experiment::compare_asymptotic: return "compare-asymptotic";
        case Experiment::mode_heat: return "mode-heat";
    }
    return "?";
}

void set_config_value(ExperimentConfig& cfg, const std::string& section, const std::string& key,
                      const std::string& value) {
    for (const Entry& e : entries()) {
        if (section == e.section && key == e.key) {
            e.set(cfg, section + "." + key, value);
            return;
        }
    }
    throw Error("config-parse", (section.empty() ? key : section + "." + key) + ": unknown key");
}

ExperimentConfig parse_config(const std::string& text) {
    const std::vector<Line> lines = tokenize(text);
    ExperimentConfig cfg;
    for (const Line& l : lines) {
        if (l.section == "initial_data" && l.key == "preset" && !l.value.empty()) {
            if (!preset_exists(l.value)) throw Error("preset-unknown", "initial_data.preset: no preset named '" + l.value + "'");
            cfg = preset_config(l.value);
        }
    }
    for (const Line& l : lines) set_config_value(cfg, l.section, l.key, l.value);
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("config-parse", "cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void ExperimentConfig::validate() const {
    auto bad = [](const std::string& key, const std::string& why) { throw Error("config-parse", key + ": " + why); };
    if (!(nu > 0.0)) bad("physical.nu", "must be positive");
    if (!(m > 0.0)) bad("physical.m", "must be positive");
    if (!homogeneous && !(inertia > 0.0)) bad("physical.inertia", "must be positive for a non-homogeneous disk");
    if (n_points < 16) bad("grid.n_points", "must be at least 16");
    if (!(r_max > 2.0)) bad("grid.r_max", "must exceed 2");
    if (!(stretch >= 0.0)) bad("grid.stretch", "must be nonnegative");
    if (!(dt > 0.0)) bad("time.dt", "must be positive");
    if (!(t_end > 0.0)) bad("time.t_end", "must be positive");
    if (!(t_first > 0.0)) bad("time.t_first", "must be positive");
    if (!(output_ratio > 1.0)) bad("time.output_ratio", "must exceed 1");
    if (k_max < 1) bad("spectral.k_max", "must be at least 1");
    if (n_theta < 0) bad("spectral.n_theta", "must be nonnegative");
    if (experiment != Experiment::fit_decay && preset.empty() && field_file.empty())
        bad("initial_data.preset", "either a preset or a field_file is required");
    if (!preset.empty() && !preset_exists(preset)) bad("initial_data.preset", "unknown preset '" + preset + "'");
    if (heat_k < 0) bad("initial_data.heat_k", "must be nonnegative");
    if (!(alpha >= 0.0)) bad("initial_data.alpha", "must be nonnegative");
    for (double p : norms)
        if (!(p >= 1.0)) bad("experiment.norms", "every p must be >= 1");
    if (!(fit_t_min >= 1.0) || !(fit_t_max > fit_t_min)) bad("fit.fit_t_min", "need 1 <= fit_t_min < fit_t_max");
    if (!(tolerance > 0.0)) bad("fit.tolerance", "must be positive");
    if (experiment == Experiment::fit_decay && (input_file.empty() || column.empty()))
        bad("fit.input_file", "fit-decay needs input_file and column");
    if (kato_max_iters < 0) bad("nonlinear.kato_max_iters", "must be nonnegative");
    if (!(kato_tol > 0.0)) bad("nonlinear.kato_tol", "must be positive");
    if (!(blowup_factor > 1.0)) bad("nonlinear.blowup_factor", "must exceed 1");
    if (!(cfl > 0.0)) bad("nonlinear.cfl", "must be positive");
}

std::string render_config(const ExperimentConfig& cfg) {
    std::string out, section;
    for (const Entry& e : entries()) {
        if (section != e.section) {
            section = e.section;
            out += "[" + section + "]\n";
        }
        out += std::string(e.key) + " = " + e.get(cfg) + "\n";
    }
    return out;
}

}  // namespace diskflow
