#include "diskflow/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "diskflow/analysis.hpp"
#include "diskflow/error.hpp"
#include "diskflow/navier_stokes.hpp"
#include "diskflow/presets.hpp"

namespace diskflow {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", x);
    return buf;
}

std::string p_label(double p) {
    if (std::isinf(p)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", p);
    return buf;
}

/// Whitespace table with the resolved config as a comment header.
class Table {
public:
    Table(const std::string& path, const ExperimentConfig& cfg, const std::vector<std::string>& columns)
        : out_(path) {
        if (!out_) throw Error("io", "cannot write '" + path + "'");
        out_ << "# diskflow " << to_string(cfg.experiment) << "\n";
        std::stringstream ss(render_config(cfg));
        std::string line;
        while (std::getline(ss, line)) out_ << "# " << line << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? " " : "") << columns[i];
        out_ << "\n";
    }
    void row(const std::vector<double>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) out_ << (i ? " " : "") << num(v[i]);
        out_ << "\n";
    }
    void raw(const std::string& s) { out_ << s << "\n"; }

private:
    std::ofstream out_;
};

PhysicalParams make_params(const ExperimentConfig& c) {
    return c.homogeneous ? PhysicalParams::make(c.nu, c.m) : PhysicalParams::make(c.nu, c.m, false, c.inertia);
}

std::vector<double> output_times(const ExperimentConfig& c) {
    std::vector<double> ts = geometric_times(c.t_first, c.t_end, c.output_ratio);
    if (ts.empty() || std::abs(ts.back() - c.t_end) > 1e-9 * c.t_end) ts.push_back(c.t_end);
    return ts;
}

ModeDecomposition initial_data(const ExperimentConfig& c) {
    if (!c.field_file.empty()) return with_k_max(read_field_file(c.field_file), c.k_max);
    return preset_initial_data(c.preset, build_grid(c.n_points, c.r_max, c.stretch), c);
}

std::string path_in(const ExperimentConfig& c, const std::string& name) {
    return (std::filesystem::path(c.output_dir) / name).string();
}

// Appends a decay-fit row; fits that cannot be formed become warnings.
void add_fit(RunResult& res, const std::string& label, const std::vector<double>& t, const std::vector<double>& v,
             const ExperimentConfig& c, double p, double q, double expected) {
    try {
        const DecayFit f = fit_decay(t, v, c.fit_t_min, c.fit_t_max);
        res.summary.push_back({label, p, q, expected, f.exponent, f.residual, false, true});
    } catch (const Error& e) {
        res.warnings.push_back(label + ": no fit (" + std::string(e.what()) + ")");
    }
}

SummaryRow* find_row(RunResult& res, const std::string& label) {
    for (auto& r : res.summary)
        if (r.label == label) return &r;
    return nullptr;
}

void check_band(RunResult& res, const std::string& label, double target, double band) {
    if (SummaryRow* r = find_row(res, label)) {
        r->expected = target;
        r->checked = true;
        r->pass = std::abs(r->fitted - target) <= band;
    }
}

void check_upper(RunResult& res, const std::string& label, double bound) {
    if (SummaryRow* r = find_row(res, label)) {
        r->expected = bound;
        r->checked = true;
        r->pass = r->fitted <= bound;
    }
}

std::vector<std::string> state_columns(const ExperimentConfig& c) {
    std::vector<std::string> cols{"t", "ell_x", "ell_y", "omega"};
    for (double p : c.norms) cols.push_back("norm_L" + p_label(p));
    return cols;
}

void run_stokes(const ExperimentConfig& c, RunResult& res) {
    const PhysicalParams params = make_params(c);
    const ModeDecomposition d0 = initial_data(c);
    const GridPtr grid = d0.grid;
    const StokesState s0 = init_stokes(d0, params);
    const AsymptoticMomenta am = asymptotic_momenta(s0);
    const DynBCParams zsys = DynBCParams::z_system(params);
    const double Mabs = std::hypot(am.M_vec[0], am.M_vec[1]);
    const bool asymptotic = c.experiment == Experiment::compare_asymptotic;

    std::vector<std::string> cols = state_columns(c);
    for (const char* extra : {"profile_err_L2", "profile_err_L4", "mass_phi", "mass_psi"}) cols.push_back(extra);
    const std::string file = path_in(c, "stokes.dat");
    Table table(file, c, cols);
    res.files.push_back(file);

    std::vector<double> ts, om, ell, e2;
    std::vector<std::vector<double>> norms(c.norms.size());
    double added_mass_err = 0.0;
    bool added_mass_defined = false;
    auto observe = [&](const StokesState& s) {
        if (!(s.t > 0.0)) return;
        const ModeDecomposition& d = s.decomp;
        std::vector<double> row{s.t, d.rigid.ell[0], d.rigid.ell[1], d.rigid.omega};
        for (std::size_t k = 0; k < c.norms.size(); ++k) {
            norms[k].push_back(weighted_field_norm(*grid, d, c.norms[k], params));
            row.push_back(norms[k].back());
        }
        const ModeDecomposition U = lamb_oseen_profile(grid, s.t, params.nu, am.M_vec, s.k_max);
        const double err2 = profile_error(s, U, 2.0);
        row.push_back(err2);
        row.push_back(profile_error(s, U, 4.0));
        row.push_back(mass(s.z_phi, zsys, *grid));
        row.push_back(mass(s.z_psi, zsys, *grid));
        table.row(row);
        ts.push_back(s.t);
        om.push_back(std::abs(d.rigid.omega));
        ell.push_back(std::hypot(d.rigid.ell[0], d.rigid.ell[1]));
        e2.push_back(std::sqrt(s.t) * err2);
        if (asymptotic && std::abs(d.rigid.ell[0]) > 0.0) {
            added_mass_err = std::max(added_mass_err, added_mass_pairing(d, 1).relative_error);
            added_mass_defined = true;
        }
    };
    const StokesState fin = evolve_stokes(s0, c.t_end, c.dt, output_times(c), observe);

    for (std::size_t k = 0; k < c.norms.size(); ++k) {
        const double p = c.norms[k];
        add_fit(res, "norm_L" + p_label(p), ts, norms[k], c, p, 1.0, expected_exponent(RateKind::semigroup, p, 1.0).exponent);
    }
    if (std::any_of(om.begin(), om.end(), [](double x) { return x > 0.0; }))
        add_fit(res, "omega", ts, om, c, kNaN, kNaN, tolerance::omega_exponent);
    if (std::any_of(ell.begin(), ell.end(), [](double x) { return x > 0.0; }))
        add_fit(res, "ell", ts, ell, c, kNaN, kNaN, -1.0);

    if (asymptotic && Mabs > 0.0) {
        const double t = fin.t;
        const auto& l = fin.decomp.rigid.ell;
        const double ratio = 8.0 * kPi * params.nu * t * (l[0] * am.M_vec[0] + l[1] * am.M_vec[1]) / (Mabs * Mabs);
        res.summary.push_back({"translation_ratio", kNaN, kNaN, 1.0, ratio, std::abs(ratio - 1.0), false, true});
        if (e2.size() >= 2) {
            // e(t_end) against e at the sample closest to t_end / 10.
            std::size_t j = 0;
            for (std::size_t i = 0; i < ts.size(); ++i)
                if (std::abs(std::log(ts[i] * 10.0 / t)) < std::abs(std::log(ts[j] * 10.0 / t))) j = i;
            const double r = e2.back() / e2[j];
            res.summary.push_back({"profile_ratio", kNaN, kNaN, tolerance::profile_ratio, r, kNaN, false, true});
        }
        if (added_mass_defined)
            res.summary.push_back({"added_mass", kNaN, kNaN, 0.0, added_mass_err, added_mass_err, false, true});
    }

    if (c.preset == "w-bump-k1") check_band(res, "omega", tolerance::omega_exponent, tolerance::omega_band);
    if (c.preset == "translating-disk") {
        check_band(res, "norm_L2", tolerance::semigroup_exponent, tolerance::semigroup_band);
        check_band(res, "translation_ratio", 1.0, tolerance::translation_ratio);
        check_upper(res, "profile_ratio", tolerance::profile_ratio);
        check_upper(res, "added_mass", tolerance::added_mass_relative);
        if (SummaryRow* r = find_row(res, "added_mass")) r->expected = 0.0;
    }
    if (c.preset == "neutral-buoyancy") check_upper(res, "ell", tolerance::neutral_ell_exponent);
    if (c.preset == "higher-modes-only") check_upper(res, "norm_L2", tolerance::higher_mode_exponent);
}

NonlinearConfig nonlinear_config(const ExperimentConfig& c, NonlinearMode mode) {
    NonlinearConfig n;
    n.mode = mode;
    n.k_max = c.k_max;
    n.n_theta = c.n_theta;
    n.dealias = c.dealias;
    n.kato_max_iters = c.kato_max_iters;
    n.kato_tol = c.kato_tol;
    n.blowup_factor = c.blowup_factor;
    n.cfl = c.cfl;
    return n;
}

void run_ns(const ExperimentConfig& c, RunResult& res) {
    const PhysicalParams params = make_params(c);
    const ModeDecomposition d0 = initial_data(c);
    const GridPtr grid = d0.grid;
    const StokesState s0 = init_stokes(d0, params);
    const NonlinearConfig nc = nonlinear_config(c, NonlinearMode::imex);

    std::vector<std::string> cols = state_columns(c);
    for (double p : c.norms) cols.push_back("diff_norm_L" + p_label(p));
    cols.push_back("energy");
    const std::string file = path_in(c, "ns.dat");
    Table table(file, c, cols);
    res.files.push_back(file);

    std::vector<double> ts;
    std::vector<std::vector<double>> base(c.norms.size()), diff(c.norms.size());
    auto observe = [&](const StokesState& v, const StokesState& lin) {
        if (!(v.t > 0.0)) return;
        const ModeDecomposition& d = v.decomp;
        const ModeDecomposition delta = d.axpby(1.0, -1.0, lin.decomp);
        std::vector<double> row{v.t, d.rigid.ell[0], d.rigid.ell[1], d.rigid.omega};
        for (std::size_t k = 0; k < c.norms.size(); ++k) {
            base[k].push_back(weighted_field_norm(*grid, d, c.norms[k], params));
            row.push_back(base[k].back());
        }
        for (std::size_t k = 0; k < c.norms.size(); ++k) {
            diff[k].push_back(weighted_field_norm(*grid, delta, c.norms[k], params));
            row.push_back(diff[k].back());
        }
        row.push_back(kinetic_energy(d, params));
        table.row(row);
        ts.push_back(v.t);
    };
    evolve_ns_paired(s0, nc, c.t_end, c.dt, output_times(c), observe);

    for (std::size_t k = 0; k < c.norms.size(); ++k) {
        const double p = c.norms[k];
        if (p < 2.0 || std::isinf(p)) continue;
        add_fit(res, "norm_L" + p_label(p), ts, base[k], c, p, c.q, expected_exponent(RateKind::semigroup, p, c.q).exponent);
        add_fit(res, "diff_norm_L" + p_label(p), ts, diff[k], c, p, c.q, expected_exponent(RateKind::ns_diff, p, c.q).exponent);
    }
    if (c.preset == "ns-small-q32") {
        check_band(res, "norm_L2", expected_exponent(RateKind::semigroup, 2.0, c.q).exponent, tolerance::improved_base_band);
        check_upper(res, "diff_norm_L2", tolerance::improved_difference_exponent);
    }
}

void run_kato(const ExperimentConfig& c, RunResult& res) {
    const PhysicalParams params = make_params(c);
    const ModeDecomposition d0 = initial_data(c);
    const GridPtr grid = d0.grid;
    const StokesState s0 = init_stokes(d0, params);
    const KatoResult kr = kato_solve(s0, nonlinear_config(c, NonlinearMode::kato), c.t_end, c.dt);
    const KatoDiagnostics& dg = kr.diagnostics;

    const std::string file = path_in(c, "kato.dat");
    {
        Table table(file, c, {"n", "G_n", "ratio"});
        for (std::size_t n = 0; n < dg.G_n.size(); ++n) {
            // ratio_n = |Y_{n+1} - Y_n| / |Y_n - Y_{n-1}|
            const double ratio = n >= 1 && n - 1 < dg.contraction_ratios.size() ? dg.contraction_ratios[n - 1] : kNaN;
            table.row({static_cast<double>(n), dg.G_n[n], ratio});
        }
    }
    res.files.push_back(file);

    const std::string sfile = path_in(c, "kato_series.dat");
    {
        Table table(sfile, c, state_columns(c));
        for (double t_out : output_times(c)) {
            const auto j = static_cast<std::size_t>(std::llround((t_out - s0.t) / c.dt));
            if (j >= kr.times.size()) continue;
            const ModeDecomposition& d = kr.series[j];
            std::vector<double> row{s0.t + kr.times[j], d.rigid.ell[0], d.rigid.ell[1], d.rigid.omega};
            for (double p : c.norms) row.push_back(weighted_field_norm(*grid, d, p, params));
            table.row(row);
        }
    }
    res.files.push_back(sfile);

    double max_ratio = 0.0;
    for (double r : dg.contraction_ratios) max_ratio = std::max(max_ratio, r);
    bool decreasing = true;
    for (std::size_t n = 1; n < dg.differences.size(); ++n) decreasing = decreasing && dg.differences[n] < dg.differences[n - 1];
    res.summary.push_back({"kato_max_ratio", kNaN, kNaN, 1.0, max_ratio, kNaN, true,
                           dg.converged && decreasing && max_ratio < 1.0});
    res.summary.push_back({"kato_iterations", kNaN, kNaN, kNaN, static_cast<double>(dg.iterations), kNaN, false, true});
    res.summary.push_back({"kato_C0", kNaN, kNaN, kNaN, dg.C0, kNaN, false, true});
    res.summary.push_back({"kato_mu0", kNaN, kNaN, kNaN, dg.mu0_estimate, kNaN, false, true});

    const StokesState imex = evolve_ns(s0, nonlinear_config(c, NonlinearMode::imex), s0.t + kr.times.back(), c.dt);
    const double ref = weighted_field_norm(*grid, imex.decomp, 2.0, params);
    const double gap = weighted_field_norm(*grid, kr.series.back().axpby(1.0, -1.0, imex.decomp), 2.0, params);
    const double rel = ref > 0.0 ? gap / ref : gap;
    res.summary.push_back({"kato_vs_imex", 2.0, kNaN, tolerance::kato_vs_imex, rel, kNaN, true, rel <= tolerance::kato_vs_imex});
}

void run_mode_heat(const ExperimentConfig& c, RunResult& res) {
    if (c.preset != "unit-kick-k0")
        throw Error("invalid-argument", "mode-heat runs the unit-kick-k0 preset (scalar data)");
    const PhysicalParams params = make_params(c);
    const GridPtr grid = build_grid(c.n_points, c.r_max, c.stretch);
    DynBCParams bc;
    bc.k = c.heat_k;
    bc.nu = c.nu;
    bc.alpha_tilde = c.alpha > 0.0 ? c.alpha : params.alpha0();
    bc.validate();
    ScalarModeState s0;
    s0.y.assign(static_cast<std::size_t>(grid->n_points), 0.0);
    s0.ell = c.amplitude;
    s0.y[0] = c.amplitude;
    const bool with_mass = bc.k == 0;
    const double M0 = with_mass ? mass(s0, bc, *grid) : kNaN;

    std::vector<std::string> cols{"t", "ell"};
    if (with_mass) cols.push_back("mass");
    for (double p : c.norms) cols.push_back("norm_L" + p_label(p));
    const std::string file = path_in(c, "heat.dat");
    Table table(file, c, cols);
    res.files.push_back(file);

    double drift = 0.0;
    std::vector<double> ts;
    std::vector<std::vector<double>> norms(c.norms.size());
    auto observe = [&](const ScalarModeState& s) {
        std::vector<double> row{s.t, s.ell};
        if (with_mass) {
            const double M = mass(s, bc, *grid);
            drift = std::max(drift, std::abs(M - M0) / std::abs(M0));
            row.push_back(M);
        }
        for (std::size_t k = 0; k < c.norms.size(); ++k) {
            norms[k].push_back(mode_norm(s, bc, *grid, c.norms[k]));
            row.push_back(norms[k].back());
        }
        table.row(row);
        ts.push_back(s.t);
    };
    const ScalarModeState fin = evolve(grid, s0, bc, c.t_end, c.dt, output_times(c), observe);
    if (with_mass) {
        res.summary.push_back({"mass_drift", kNaN, kNaN, 0.0, drift, drift, true, drift <= tolerance::mass_drift});
        const double ratio = 4.0 * kPi * c.nu * fin.t * fin.ell / M0;
        res.summary.push_back({"kick_ratio", kNaN, kNaN, 1.0, ratio, std::abs(ratio - 1.0), true,
                               std::abs(ratio - 1.0) <= tolerance::kick_ratio});
    }
    for (std::size_t k = 0; k < c.norms.size(); ++k)
        add_fit(res, "norm_L" + p_label(c.norms[k]), ts, norms[k], c, c.norms[k], 1.0,
                expected_exponent(RateKind::semigroup, c.norms[k], 1.0).exponent);
}

void run_fit(const ExperimentConfig& c, RunResult& res) {
    std::ifstream in(c.input_file);
    if (!in) throw Error("io", "cannot read '" + c.input_file + "'");
    std::string line;
    std::vector<std::string> header;
    std::vector<double> t, v;
    int col = -1;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        if (header.empty()) {
            std::string name;
            while (ss >> name) header.push_back(name);
            for (std::size_t i = 0; i < header.size(); ++i)
                if (header[i] == c.column) col = static_cast<int>(i);
            if (col < 0) throw Error("invalid-argument", "fit.column: no column '" + c.column + "' in " + c.input_file);
            if (header[0] != "t") throw Error("invalid-argument", "fit.input_file: first column must be t");
            continue;
        }
        std::vector<double> vals;
        double x;
        while (ss >> x) vals.push_back(x);
        if (static_cast<int>(vals.size()) <= col) throw Error("io", "short row in " + c.input_file);
        t.push_back(vals[0]);
        v.push_back(std::abs(vals[static_cast<std::size_t>(col)]));
    }
    const DecayFit f = fit_decay(t, v, c.fit_t_min, c.fit_t_max);
    res.summary.push_back({"fit:" + c.column, kNaN, kNaN, kNaN, f.exponent, f.residual, false, true});
}

void write_summary(const ExperimentConfig& c, RunResult& res) {
    const std::string file = path_in(c, "summary.dat");
    Table table(file, c, {"experiment", "p", "q", "expected", "fitted", "residual", "pass"});
    const std::string name = c.preset.empty() ? to_string(c.experiment) : c.preset;
    for (const SummaryRow& r : res.summary) {
        table.raw(name + ":" + r.label + " " + num(r.p) + " " + num(r.q) + " " + num(r.expected) + " " +
                  num(r.fitted) + " " + num(r.residual) + " " + (r.checked ? (r.pass ? "yes" : "no") : "-"));
        if (r.checked && !r.pass) res.checks_failed = true;
    }
    res.files.push_back(file);
}

}  // namespace

int threads_from_environment() {
    const char* s = std::getenv("DISKFLOW_THREADS");
    if (s == nullptr) return 1;
    const int n = std::atoi(s);
    return n >= 1 ? n : 1;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    RunResult res;
    if (cfg.experiment != Experiment::fit_decay && cfg.r_max < 6.0 * std::sqrt(cfg.nu * cfg.t_end))
        res.warnings.push_back("r_max = " + p_label(cfg.r_max) + " is below 6 sqrt(nu t_end) = " +
                               p_label(6.0 * std::sqrt(cfg.nu * cfg.t_end)) + "; far-field truncation may show");
    std::filesystem::create_directories(cfg.output_dir);
    set_num_threads(threads_from_environment());
    switch (cfg.experiment) {
        case Experiment::evolve_stokes:
        case Experiment::compare_asymptotic: run_stokes(cfg, res); break;
        case Experiment::evolve_ns: run_ns(cfg, res); break;
        case Experiment::kato: run_kato(cfg, res); break;
        case Experiment::mode_heat: run_mode_heat(cfg, res); break;
        case Experiment::fit_decay: run_fit(cfg, res); break;
    }
    write_summary(cfg, res);
    return res;
}

int run_config_file(const std::string& path, std::ostream& out, std::ostream& err) {
    try {
        const ExperimentConfig cfg = load_config(path);
        const RunResult res = run_experiment(cfg);
        for (const auto& w : res.warnings) err << "warning: " << w << "\n";
        for (const auto& r : res.summary) {
            out << r.label << " = " << num(r.fitted);
            if (r.checked) out << (r.pass ? "  [pass]" : "  [FAIL]") << " (target " << num(r.expected) << ")";
            out << "\n";
        }
        for (const auto& f : res.files) out << "wrote " << f << "\n";
        if (cfg.checks && res.checks_failed) return 2;
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace diskflow
