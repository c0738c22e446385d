#include "diskflow/presets.hpp"

#include <cmath>

#include "diskflow/error.hpp"
#include "diskflow/navier_stokes.hpp"

namespace diskflow {

namespace {

// Compact mode-k >= 2 profile s^2 (1 - s^2)^4: no-slip at r = 1 holds exactly.
double clamped_bump(double r, double width) {
    const double s = (r - 1.0) / width;
    return s < 1.0 ? s * s * std::pow(1.0 - s * s, 4) : 0.0;
}

void scale_to_norm(ModeDecomposition& d, const PhysicalParams& p, double target) {
    const double n = weighted_field_norm(*d.grid, d, 2.0, p);
    if (n > 0.0) d = d.axpby(target / n, 0.0, d);
}

}  // namespace

double compact_bump(double r, double width) {
    const double s = (r - 1.0) / width;
    return s < 1.0 ? std::pow(1.0 - s * s, 4) : 0.0;
}

const std::vector<PresetInfo>& preset_list() {
    static const std::vector<PresetInfo> list = {
        {"unit-kick-k0", "k=0 dynamic-BC scalar system, zero interior data and boundary value 1"},
        {"w-bump-k1", "swirl bump W = A b(r), disk spinning, m = 2 pi"},
        {"translating-disk", "disk moving with velocity (A, 0) and co-moving fluid bump, m = 2 pi"},
        {"neutral-buoyancy", "translating-disk data with m = pi (zero asymptotic momentum)"},
        {"higher-modes-only", "compact psi_2 and phi_3 profiles, disk at rest"},
        {"ns-small-q32", "swirl tail r^(-4/3 - delta) plus compact modes 1-2, Navier-Stokes q = 3/2 run"},
        {"kato-small", "compact modes 0-2 with L2 norm A, Kato iteration on [0, 1]"},
    };
    return list;
}

bool preset_exists(const std::string& name) {
    for (const auto& p : preset_list())
        if (p.name == name) return true;
    return false;
}

ExperimentConfig preset_config(const std::string& name) {
    if (!preset_exists(name)) throw Error("preset-unknown", "no preset named '" + name + "'");
    ExperimentConfig c;
    c.preset = name;
    if (name == "unit-kick-k0") {
        c.experiment = Experiment::mode_heat;
    } else if (name == "w-bump-k1") {
        c.experiment = Experiment::evolve_stokes;
    } else if (name == "translating-disk") {
        c.experiment = Experiment::compare_asymptotic;
    } else if (name == "neutral-buoyancy") {
        c.experiment = Experiment::evolve_stokes;
        c.m = kPi;
    } else if (name == "higher-modes-only") {
        c.experiment = Experiment::evolve_stokes;
        c.k_max = 3;
        c.width = 2.0;
    } else if (name == "ns-small-q32") {
        c.experiment = Experiment::evolve_ns;
        c.n_points = 4096;
        c.r_max = 3000.0;
        c.stretch = 7.0;
        c.dt = 0.05;
        c.t_end = 200.0;
        c.fit_t_max = 200.0;
        c.k_max = 4;
        c.amplitude = 0.02;
        c.output_ratio = std::pow(2.0, 0.125);
    } else if (name == "kato-small") {
        c.experiment = Experiment::kato;
        c.n_points = 1024;
        c.r_max = 40.0;
        c.t_end = 1.0;
        c.t_first = 0.125;
        c.output_ratio = 2.0;
        c.k_max = 4;
        c.amplitude = 1e-2;
        c.fit_t_min = 1.0;
        c.fit_t_max = 10.0;
    }
    return c;
}

ModeDecomposition preset_initial_data(const std::string& name, GridPtr grid, const ExperimentConfig& cfg) {
    if (!preset_exists(name)) throw Error("preset-unknown", "no preset named '" + name + "'");
    const RadialGrid& g = *grid;
    const double A = cfg.amplitude, w = cfg.width;
    if (name == "ns-small-q32") return tail_data(grid, cfg.q, A, cfg.k_max, cfg.delta);

    ModeDecomposition d = ModeDecomposition::zeros(grid, cfg.k_max);
    for (int i = 0; i < g.n_points; ++i) {
        const double r = g.r(i);
        if (name == "unit-kick-k0" || name == "translating-disk" || name == "neutral-buoyancy") {
            // Phi = -r b(r): v = (A, 0) on the disk, fluid bump of width w.
            d.Phi[i] = -A * r * compact_bump(r, w);
        } else if (name == "w-bump-k1") {
            d.W[i] = A * compact_bump(r, w);
        } else if (name == "higher-modes-only") {
            if (cfg.k_max < 3) throw Error("invalid-argument", "higher-modes-only needs k_max >= 3");
            d.psi_k[0][i] = A * clamped_bump(r, w);
            d.phi_k[1][i] = 0.5 * A * clamped_bump(r, w);
        } else if (name == "kato-small") {
            d.Phi[i] = -r * compact_bump(r, 1.0);
            d.W[i] = compact_bump(r, 1.5);
            if (cfg.k_max >= 2) d.psi_k[0][i] = 0.5 * clamped_bump(r, 2.0);
        }
    }
    d.enforce_no_slip();
    d.sync_rigid();
    if (name == "kato-small") {
        const PhysicalParams p = cfg.homogeneous ? PhysicalParams::make(cfg.nu, cfg.m)
                                                 : PhysicalParams::make(cfg.nu, cfg.m, false, cfg.inertia);
        scale_to_norm(d, p, A);
    }
    return d;
}

}  // namespace diskflow
