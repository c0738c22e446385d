#include "diskflow/stokes.hpp"

#include <algorithm>
#include <cmath>

#include "diskflow/elliptic.hpp"

namespace diskflow {

StokesState init_stokes(const ModeDecomposition& decomp, const PhysicalParams& params, double theta) {
    params.validate();
    StokesState s;
    s.grid = decomp.grid;
    s.params = params;
    s.k_max = decomp.k_max;
    s.theta = theta;
    s.t = 0.0;
    const RadialGrid& g = *s.grid;

    s.w.y = decomp.W;
    s.w.ell = decomp.W[0];
    s.z_psi = z_transform(StreamPair{decomp.Psi, decomp.Psi[0]}, g, false);
    s.z_phi = z_transform(StreamPair{decomp.Phi, decomp.Phi[0]}, g, true);
    s.z_psi.y[0] = s.z_psi.ell;
    s.z_phi.y[0] = s.z_phi.ell;
    for (auto* m : {&s.w, &s.z_psi, &s.z_phi}) {
        m->y.back() = 0.0;
        m->t = 0.0;
    }
    for (int k = 2; k <= s.k_max; ++k) {
        for (int channel = 0; channel < 2; ++channel) {
            ScalarModeState z;
            z.y = z_transform_mode(channel == 0 ? decomp.psi_k[k - 2] : decomp.phi_k[k - 2], g, k);
            z.y.front() = 0.0;
            z.y.back() = 0.0;
            (channel == 0 ? s.z_cos : s.z_sin).push_back(std::move(z));
        }
    }
    s.decomp = ModeDecomposition::zeros(s.grid, s.k_max);
    s.decomp.rigid.h = decomp.rigid.h;
    s.decomp.rigid.theta = decomp.rigid.theta;
    rebuild_decomposition(s);
    return s;
}

void rebuild_decomposition(StokesState& s) {
    const RadialGrid& g = *s.grid;
    ModeDecomposition& d = s.decomp;
    d.W = s.w.y;
    d.W[0] = s.w.ell;
    d.Psi = invert_z(s.z_psi, g).psi;
    d.Phi = invert_z(s.z_phi, g).psi;
    for (double& v : d.Phi) v = -v;
    for (int k = 2; k <= s.k_max; ++k) {
        d.psi_k[k - 2] = invert_z_mode(s.z_cos[k - 2].y, g, k);
        d.phi_k[k - 2] = invert_z_mode(s.z_sin[k - 2].y, g, k);
    }
    d.sync_rigid();
}

StokesStepper::StokesStepper(const StokesState& like, double dt) : dt_(dt) {
    w_ = std::make_unique<DynBCStepper>(like.grid, DynBCParams::w_system(like.params, like.theta), dt);
    z_ = std::make_unique<DynBCStepper>(like.grid, DynBCParams::z_system(like.params, like.theta), dt);
    for (int k = 2; k <= like.k_max; ++k)
        high_.push_back(std::make_unique<DynBCStepper>(
            like.grid, DynBCParams::higher_mode(k, like.params.nu, like.theta), dt));
}

void StokesStepper::step(StokesState& s, const ModeDecomposition* forcing) const {
    const RadialGrid& g = *s.grid;
    const RigidState before = s.decomp.rigid;
    if (forcing == nullptr) {
        w_->step_inplace(s.w);
        z_->step_inplace(s.z_psi);
        z_->step_inplace(s.z_phi);
        for (int k = 2; k <= s.k_max; ++k) {
            high_[k - 2]->step_inplace(s.z_cos[k - 2]);
            high_[k - 2]->step_inplace(s.z_sin[k - 2]);
        }
    } else {
        const ModeDecomposition& F = *forcing;
        const ScalarSource sw{F.W, F.rigid.omega};
        const ScalarModeState zp = z_transform(StreamPair{F.Psi, F.Psi[0]}, g, false);
        const ScalarModeState zf = z_transform(StreamPair{F.Phi, F.Phi[0]}, g, true);
        const ScalarSource sp{zp.y, zp.ell};
        const ScalarSource sf{zf.y, zf.ell};
        w_->step_inplace(s.w, &sw);
        z_->step_inplace(s.z_psi, &sp);
        z_->step_inplace(s.z_phi, &sf);
        for (int k = 2; k <= s.k_max; ++k) {
            const int kf = std::min(k, F.k_max + 1);
            if (kf > F.k_max) {
                high_[k - 2]->step_inplace(s.z_cos[k - 2]);
                high_[k - 2]->step_inplace(s.z_sin[k - 2]);
                continue;
            }
            const ScalarSource sc{z_transform_mode(F.psi_k[k - 2], g, k), 0.0};
            const ScalarSource ss{z_transform_mode(F.phi_k[k - 2], g, k), 0.0};
            high_[k - 2]->step_inplace(s.z_cos[k - 2], &sc);
            high_[k - 2]->step_inplace(s.z_sin[k - 2], &ss);
        }
    }
    s.t += dt_;
    rebuild_decomposition(s);
    RigidState& r = s.decomp.rigid;
    for (int c = 0; c < 2; ++c) r.h[c] = before.h[c] + 0.5 * dt_ * (before.ell[c] + r.ell[c]);
    r.theta = before.theta + 0.5 * dt_ * (before.omega + r.omega);
}

StokesState step_stokes(const StokesState& state, double dt) {
    StokesState s = state;
    StokesStepper(s, dt).step(s);
    return s;
}

StokesState evolve_stokes(const StokesState& state0, double t_end, double dt,
                          const std::vector<double>& output_times, const StokesObserver& observe) {
    if (!(dt > 0.0)) throw Error("invalid-argument", "dt must be positive");
    if (!(t_end >= state0.t)) throw Error("invalid-argument", "t_end precedes the initial time");
    StokesState s = state0;
    std::vector<double> outs = output_times;
    std::sort(outs.begin(), outs.end());
    std::size_t next = 0;
    const double eps = 1e-9 * dt;
    auto emit = [&]() {
        while (next < outs.size() && outs[next] <= s.t + eps) {
            if (observe && outs[next] >= state0.t - eps) observe(s);
            ++next;
        }
    };
    emit();
    const long nsteps = static_cast<long>(std::ceil((t_end - s.t) / dt - 1e-9));
    if (nsteps <= 0) return s;
    const StokesStepper stepper(s, dt);
    const double t0 = s.t;
    for (long j = 0; j < nsteps; ++j) {
        const double remaining = t_end - s.t;
        if (remaining < dt - eps) {
            StokesStepper(s, remaining).step(s);
            s.t = t_end;
        } else {
            stepper.step(s);
            s.t = t0 + static_cast<double>(j + 1) * dt;
        }
        emit();
    }
    return s;
}

std::vector<double> lamb_oseen_stream(const RadialGrid& grid, double t, double nu) {
    if (!(t > 0.0)) throw Error("nonpositive-time", "t must be positive");
    std::vector<double> p(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) {
        const double r = grid.r(i);
        p[i] = -std::expm1(-r * r / (4.0 * nu * t)) / (2.0 * kPi * r);
    }
    return p;
}

std::vector<double> disk_corrected_stream(const RadialGrid& grid, double t, double nu) {
    if (!(t > 0.0)) throw Error("nonpositive-time", "t must be positive");
    const double s = 4.0 * nu * t;
    std::vector<double> p(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) {
        const double r = grid.r(i);
        p[i] = (std::exp(-1.0 / s) - std::exp(-r * r / s) + 1.0 / s) / (2.0 * kPi * r);
    }
    return p;
}

ModeDecomposition lamb_oseen_profile(GridPtr grid, double t, double nu, const std::array<double, 2>& M_vec,
                                     int k_max, bool disk_corrected) {
    ModeDecomposition d = ModeDecomposition::zeros(grid, k_max);
    const std::vector<double> p =
        disk_corrected ? disk_corrected_stream(*grid, t, nu) : lamb_oseen_stream(*grid, t, nu);
    for (std::size_t i = 0; i < p.size(); ++i) {
        d.Psi[i] = M_vec[1] * p[i];
        d.Phi[i] = -M_vec[0] * p[i];
    }
    d.sync_rigid();
    return d;
}

Mode1Pressure recover_mode1_pressure(const StokesState& state) {
    const RadialGrid& g = *state.grid;
    const DynBCStepper op(state.grid, DynBCParams::z_system(state.params, state.theta), 1.0);
    const double nu = state.params.nu;
    const double mp = state.params.m / kPi;
    auto channel = [&](const ScalarModeState& z, double& beta, double& alt) {
        const double rate_z = -op.apply_operator(z)[0] / op.mass_weight(0);
        const double ell_rate = 0.5 * rate_z;
        std::vector<double> y = z.y;
        y[0] = z.ell;
        const double dz = derivative_at(g, y, 0);
        beta = ell_rate - nu * dz;
        alt = nu * dz - mp * ell_rate;
    };
    Mode1Pressure out;
    channel(state.z_psi, out.beta_psi, out.beta_psi_alt);
    channel(state.z_phi, out.beta_phi, out.beta_phi_alt);
    return out;
}

std::vector<TimedRigid> reconstruct_trajectory(const std::vector<TimedRigid>& series) {
    std::vector<TimedRigid> out = series;
    if (out.empty()) return out;
    out[0].rigid.h = {0.0, 0.0};
    out[0].rigid.theta = 0.0;
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double dt = out[i].t - out[i - 1].t;
        for (int c = 0; c < 2; ++c)
            out[i].rigid.h[c] = out[i - 1].rigid.h[c] + 0.5 * dt * (out[i - 1].rigid.ell[c] + out[i].rigid.ell[c]);
        out[i].rigid.theta = out[i - 1].rigid.theta + 0.5 * dt * (out[i - 1].rigid.omega + out[i].rigid.omega);
    }
    return out;
}

AsymptoticMomenta asymptotic_momenta(const StokesState& state0) {
    const DynBCParams zp = DynBCParams::z_system(state0.params, state0.theta);
    AsymptoticMomenta a;
    const double f = state0.params.m - kPi;
    a.M_vec = {f * state0.decomp.rigid.ell[0], f * state0.decomp.rigid.ell[1]};
    a.M_phi = mass(state0.z_phi, zp, *state0.grid);
    a.M_psi = mass(state0.z_psi, zp, *state0.grid);
    return a;
}

}  // namespace diskflow
