#include "diskflow/navier_stokes.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "diskflow/error.hpp"

namespace diskflow {

namespace {

std::atomic<int> g_threads{1};

// Runs body(begin, end) over contiguous chunks of [0, n).
template <class F>
void parallel_chunks(int n, F body) {
    const int nt = std::min(g_threads.load(), std::max(1, n / 256));
    if (nt <= 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    const int chunk = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        const int b = t * chunk, e = std::min(n, b + chunk);
        if (b < e) pool.emplace_back([=] { body(b, e); });
    }
    for (auto& th : pool) th.join();
}

int next_pow2(int n) {
    int p = 1;
    while (p < n) p *= 2;
    return p;
}

// Angular derivative of a spectral field: (c cos + s sin)' = k s cos - k c sin.
SpectralField theta_derivative(const SpectralField& s) {
    SpectralField d = SpectralField::zeros(s.grid, s.k_max);
    for (int k = 1; k <= s.k_max; ++k) {
        const std::size_t n = s.vr_c[k].size();
        for (std::size_t i = 0; i < n; ++i) {
            d.vr_c[k][i] = k * s.vr_s[k][i];
            d.vr_s[k][i] = -k * s.vr_c[k][i];
            d.vt_c[k][i] = k * s.vt_s[k][i];
            d.vt_s[k][i] = -k * s.vt_c[k][i];
        }
    }
    return d;
}

SpectralField r_derivative(const SpectralField& s) {
    const RadialGrid& g = *s.grid;
    SpectralField d = SpectralField::zeros(s.grid, s.k_max);
    for (int k = 0; k <= s.k_max; ++k) {
        d.vr_c[k] = radial_derivative(g, s.vr_c[k]);
        d.vr_s[k] = radial_derivative(g, s.vr_s[k]);
        d.vt_c[k] = radial_derivative(g, s.vt_c[k]);
        d.vt_s[k] = radial_derivative(g, s.vt_s[k]);
    }
    return d;
}

}  // namespace

void set_num_threads(int n) { g_threads = std::max(1, n); }
int num_threads() { return g_threads.load(); }

int NonlinearConfig::resolved_n_theta() const {
    return n_theta > 0 ? n_theta : std::max(16, next_pow2(3 * k_max + 1));
}

void NonlinearConfig::validate() const {
    if (k_max < 1) throw Error("config-invalid", "k_max must be at least 1");
    const int nt = resolved_n_theta();
    if (nt < 2 * k_max + 2) throw Error("config-invalid", "n_theta must be at least 2 k_max + 2");
    if (dealias && nt < 3 * k_max) throw Error("config-invalid", "dealiasing needs n_theta >= 3 k_max");
    if (kato_max_iters < 0) throw Error("config-invalid", "kato_max_iters must be nonnegative");
    if (!(kato_tol > 0.0)) throw Error("config-invalid", "kato_tol must be positive");
    if (!(blowup_factor > 1.0)) throw Error("config-invalid", "blowup_factor must exceed 1");
    if (!(cfl > 0.0)) throw Error("config-invalid", "cfl must be positive");
}

NonlinearOperator::NonlinearOperator(GridPtr grid, const PhysicalParams& params, const NonlinearConfig& config)
    : grid_(grid), config_(config), n_theta_(config.resolved_n_theta()),
      projector_(grid, params, config.k_max) {
    config_.validate();
}

SpectralField NonlinearOperator::convection(const ModeDecomposition& d) const {
    const int K = config_.k_max;
    if (!config_.dealias && n_theta_ < 3 * K + 1)
        throw Error("resolution-insufficient", "products of modes <= k_max alias on n_theta points");
    const ModeDecomposition dk = d.k_max == K ? d : with_k_max(d, K);
    const SpectralField s = to_spectral(dk);
    const PolarField v = synthesize(s, n_theta_);
    const PolarField vr = synthesize(r_derivative(s), n_theta_);
    const PolarField vth = synthesize(theta_derivative(s), n_theta_);

    const RadialGrid& g = *grid_;
    const double l1 = dk.rigid.ell[0], l2 = dk.rigid.ell[1];
    PolarField out = PolarField::zeros(grid_, n_theta_);
    std::vector<double> cs(n_theta_), sn(n_theta_);
    for (int j = 0; j < n_theta_; ++j) {
        cs[j] = std::cos(2.0 * kPi * j / n_theta_);
        sn[j] = std::sin(2.0 * kPi * j / n_theta_);
    }
    const int nt = std::max(1, std::min(g_threads.load(), g.n_points / 256));
    std::vector<double> chunk_max(static_cast<std::size_t>(nt) + 1, 0.0);
    parallel_chunks(g.n_points, [&](int b, int e) {
        const int chunk = (g.n_points + nt - 1) / nt;
        double vm = 0.0;
        for (int i = b; i < e; ++i) {
            const double r = g.r(i);
            for (int j = 0; j < n_theta_; ++j) {
                const double Vr = v.vr(i, j), Vt = v.vt(i, j);
                vm = std::max(vm, std::hypot(Vr, Vt));
                const double ar = l1 * cs[j] + l2 * sn[j] - Vr;
                const double at = -l1 * sn[j] + l2 * cs[j] - Vt;
                out.vr(i, j) = ar * vr.vr(i, j) + at / r * vth.vr(i, j) - at * Vt / r;
                out.vt(i, j) = ar * vr.vt(i, j) + at / r * vth.vt(i, j) + at * Vr / r;
            }
        }
        chunk_max[static_cast<std::size_t>(b / chunk)] = vm;
    });
    double vmax = std::hypot(l1, l2) + std::abs(dk.rigid.omega);
    for (double x : chunk_max) vmax = std::max(vmax, x);
    last_max_speed_ = vmax;
    SpectralField N = analyze(out, K);
    if (config_.dealias) {
        // 2/3 rule: only modes below n_theta / 3 are free of aliasing.
        const int k_keep = (n_theta_ - 1) / 3;
        for (int k = k_keep + 1; k <= K; ++k) {
            std::fill(N.vr_c[k].begin(), N.vr_c[k].end(), 0.0);
            std::fill(N.vr_s[k].begin(), N.vr_s[k].end(), 0.0);
            std::fill(N.vt_c[k].begin(), N.vt_c[k].end(), 0.0);
            std::fill(N.vt_s[k].begin(), N.vt_s[k].end(), 0.0);
        }
    }
    N.ball_ell = {0.0, 0.0};
    N.ball_omega = 0.0;
    return N;
}

ModeDecomposition NonlinearOperator::operator()(const ModeDecomposition& d) const {
    if (config_.zero_nonlinearity) return ModeDecomposition::zeros(grid_, config_.k_max);
    return projector_.project(convection(d));
}

ModeDecomposition nonlinear_term(const ModeDecomposition& d, const PhysicalParams& params,
                                 const NonlinearConfig& config) {
    return NonlinearOperator(d.grid, params, config)(d);
}

double kinetic_energy(const ModeDecomposition& d, const PhysicalParams& params) {
    return 0.5 * inner_product(d, d, params);
}

ImexStepper::ImexStepper(const StokesState& like, const NonlinearConfig& config, double dt)
    : config_(config), linear_(like, dt), op_(like.grid, like.params, config) {
    if (config.mode != NonlinearMode::imex) throw Error("config-invalid", "IMEX stepper needs mode = imex");
    if (like.k_max != config.k_max) throw Error("config-invalid", "state k_max differs from config k_max");
}

void ImexStepper::step(StokesState& s) {
    if (config_.zero_nonlinearity) {
        linear_.step(s);
        return;
    }
    ModeDecomposition N = op_(s.decomp);
    const double vmax = op_.last_max_speed();
    const double limit = config_.cfl * s.grid->h_min() / std::max(vmax, 1e-300);
    if (linear_.dt() > limit)
        throw Error("cfl-violated", "dt exceeds " + std::to_string(limit) + " for max|V| = " + std::to_string(vmax));
    const ModeDecomposition forcing = previous_ ? N.axpby(1.5, -0.5, *previous_) : N;
    const double before = weighted_field_norm(*s.grid, s.decomp, 2.0, s.params);
    linear_.step(s, &forcing);
    const double after = weighted_field_norm(*s.grid, s.decomp, 2.0, s.params);
    if (!std::isfinite(after) || (before > 0.0 && after > config_.blowup_factor * before))
        throw Error("blow-up", "L2 norm grew from " + std::to_string(before) + " to " + std::to_string(after));
    previous_ = std::move(N);
}

StokesState step_ns(const StokesState& state, const NonlinearConfig& config, double dt) {
    StokesState s = state;
    ImexStepper(s, config, dt).step(s);
    s.t = state.t + dt;
    return s;
}

StokesState evolve_ns_paired(const StokesState& state0, const NonlinearConfig& config, double t_end,
                             double dt, const std::vector<double>& output_times,
                             const PairedObserver& observe) {
    if (!(dt > 0.0)) throw Error("invalid-argument", "dt must be positive");
    if (!(t_end >= state0.t)) throw Error("invalid-argument", "t_end precedes the initial time");
    StokesState s = state0, lin = state0;
    std::vector<double> outs = output_times;
    std::sort(outs.begin(), outs.end());
    std::size_t next = 0;
    const double eps = 1e-9 * dt;
    auto emit = [&]() {
        while (next < outs.size() && outs[next] <= s.t + eps) {
            if (observe && outs[next] >= state0.t - eps) observe(s, lin);
            ++next;
        }
    };
    emit();
    // Fixed dt keeps AB2 on a uniform grid; the final time is rounded up to a step.
    const long nsteps = static_cast<long>(std::ceil((t_end - s.t) / dt - 1e-9));
    if (nsteps <= 0) return s;
    ImexStepper stepper(s, config, dt);
    const StokesStepper linear(s, dt);
    const double t0 = s.t;
    for (long j = 0; j < nsteps; ++j) {
        stepper.step(s);
        if (observe) linear.step(lin);
        s.t = lin.t = t0 + static_cast<double>(j + 1) * dt;
        emit();
    }
    return s;
}

StokesState evolve_ns(const StokesState& state0, const NonlinearConfig& config, double t_end, double dt,
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
    ImexStepper stepper(s, config, dt);
    const double t0 = s.t;
    for (long j = 0; j < nsteps; ++j) {
        stepper.step(s);
        s.t = t0 + static_cast<double>(j + 1) * dt;
        emit();
    }
    return s;
}

double kato_triple_norm(const std::vector<double>& times, const std::vector<ModeDecomposition>& ys,
                        const PhysicalParams& params) {
    double g = 0.0;
    for (std::size_t j = 0; j < ys.size(); ++j) {
        const double t = times[j];
        const RadialGrid& grid = *ys[j].grid;
        double v = weighted_field_norm(grid, ys[j], 2.0, params);
        if (t > 0.0) {
            v = std::max(v, std::pow(t, 0.375) * weighted_field_norm(grid, ys[j], 8.0, params));
            v = std::max(v, std::sqrt(t) * std::hypot(ys[j].rigid.ell[0], ys[j].rigid.ell[1]));
        }
        g = std::max(g, v);
    }
    return g;
}

KatoResult kato_solve(const StokesState& state0, const NonlinearConfig& config, double t_end, double dt) {
    if (config.mode != NonlinearMode::kato) throw Error("config-invalid", "kato_solve needs mode = kato");
    if (state0.k_max != config.k_max) throw Error("config-invalid", "state k_max differs from config k_max");
    if (!(dt > 0.0) || !(t_end > state0.t)) throw Error("invalid-argument", "need dt > 0 and t_end > t0");
    const long nsteps = static_cast<long>(std::ceil((t_end - state0.t) / dt - 1e-9));
    const StokesStepper linear(state0, dt);
    const NonlinearOperator op(state0.grid, state0.params, config);
    const PhysicalParams& params = state0.params;

    KatoResult res;
    res.times.resize(static_cast<std::size_t>(nsteps) + 1);
    std::vector<ModeDecomposition> y0;
    y0.reserve(res.times.size());
    StokesState s = state0;
    s.t = 0.0;
    for (long j = 0; j <= nsteps; ++j) {
        if (j > 0) linear.step(s);
        res.times[j] = static_cast<double>(j) * dt;  // time since the initial state
        y0.push_back(s.decomp);
    }

    KatoDiagnostics& dg = res.diagnostics;
    std::vector<ModeDecomposition> y = y0;
    dg.G_n.push_back(kato_triple_norm(res.times, y, params));
    const double G0 = dg.G_n[0];
    if (G0 == 0.0) {
        dg.converged = true;
        dg.mu0_estimate = 0.0;
        res.series = std::move(y);
        return res;
    }

    const StokesState zero = init_stokes(ModeDecomposition::zeros(state0.grid, state0.k_max), params, state0.theta);
    int rising = 0;
    for (int n = 0; n < config.kato_max_iters; ++n) {
        std::vector<ModeDecomposition> next;
        next.reserve(y.size());
        next.push_back(y0[0]);
        StokesState u = zero;
        for (long j = 1; j <= nsteps; ++j) {
            const ModeDecomposition F = op(y[static_cast<std::size_t>(j - 1)]);
            linear.step(u, &F);
            next.push_back(y0[static_cast<std::size_t>(j)].axpby(1.0, 1.0, u.decomp));
        }
        std::vector<ModeDecomposition> diff;
        diff.reserve(y.size());
        for (std::size_t j = 0; j < y.size(); ++j) diff.push_back(next[j].axpby(1.0, -1.0, y[j]));
        const double dn = kato_triple_norm(res.times, diff, params);
        dg.differences.push_back(dn);
        if (dg.differences.size() > 1) {
            const double prev = dg.differences[dg.differences.size() - 2];
            const double ratio = prev > 0.0 ? dn / prev : 0.0;
            dg.contraction_ratios.push_back(ratio);
            rising = ratio > 1.0 ? rising + 1 : 0;
        }
        y = std::move(next);
        dg.G_n.push_back(kato_triple_norm(res.times, y, params));
        dg.iterations = n + 1;
        if (rising >= 3) throw Error("no-contraction", "Kato iterates diverge; data exceed the smallness threshold");
        if (dn <= config.kato_tol * G0) {
            dg.converged = true;
            break;
        }
    }

    // Smallest C0 for which G_{n+1} <= G_0 + 2 C0 G_n^2 holds on the computed iterates.
    double C0 = 0.0;
    for (std::size_t n = 0; n + 1 < dg.G_n.size(); ++n)
        C0 = std::max(C0, (dg.G_n[n + 1] - G0) / (2.0 * dg.G_n[n] * dg.G_n[n]));
    dg.C0 = C0;
    if (C0 == 0.0) {
        dg.mu0_estimate = G0;
    } else {
        const double disc = 1.0 - 8.0 * C0 * G0;
        dg.mu0_estimate = disc >= 0.0 ? (1.0 - std::sqrt(disc)) / (4.0 * C0) : kInf;
    }
    res.series = std::move(y);
    return res;
}

ModeDecomposition tail_data(GridPtr grid, double q, double amplitude, int k_max, double delta, double r_cut,
                            double compact_fraction) {
    if (!(q > 1.0 && q <= 2.0)) throw Error("invalid-argument", "q must lie in (1, 2]");
    const RadialGrid& g = *grid;
    if (r_cut <= 0.0) r_cut = 0.8 * g.r_max;
    if (r_cut <= 4.0 || r_cut > g.r_max) throw Error("invalid-argument", "r_cut must lie in (4, r_max]");
    const double gamma = 2.0 / q + delta;
    const double r_taper = 0.75 * r_cut;
    ModeDecomposition d = ModeDecomposition::zeros(grid, k_max);
    for (int i = 0; i < g.n_points; ++i) {
        const double r = g.r(i);
        double chi = 1.0;
        if (r >= r_cut) {
            chi = 0.0;
        } else if (r > r_taper) {
            const double c = std::cos(0.5 * kPi * (r - r_taper) / (r_cut - r_taper));
            chi = c * c;
        }
        d.W[i] = amplitude * std::pow(r, -gamma) * chi;
        const double s1 = r - 1.0;
        d.Phi[i] = s1 < 1.0 ? -compact_fraction * amplitude * r * std::pow(1.0 - s1 * s1, 4) : 0.0;
        if (k_max >= 2) {
            const double s2 = 0.5 * (r - 1.0);
            d.psi_k[0][i] = s2 < 1.0 ? 0.5 * compact_fraction * amplitude * s2 * s2 * std::pow(1.0 - s2 * s2, 4) : 0.0;
        }
    }
    d.enforce_no_slip();
    d.sync_rigid();
    return d;
}

ImprovedDecayResult improved_decay_experiment(const ModeDecomposition& V0, const PhysicalParams& params,
                                              const NonlinearConfig& config, double p, double t_end,
                                              double dt, double fit_min, double fit_max) {
    const StokesState s0 = init_stokes(with_k_max(V0, config.k_max), params);
    ImprovedDecayResult res;
    const RadialGrid& g = *s0.grid;
    auto observe = [&](const StokesState& v, const StokesState& lin) {
        res.times.push_back(v.t);
        res.base_norms.push_back(weighted_field_norm(g, v.decomp, p, params));
        res.difference_norms.push_back(weighted_field_norm(g, v.decomp.axpby(1.0, -1.0, lin.decomp), p, params));
    };
    evolve_ns_paired(s0, config, t_end, dt, geometric_times(1.0, t_end, std::pow(2.0, 0.125)), observe);
    res.base = fit_decay(res.times, res.base_norms, fit_min, fit_max);
    res.difference = fit_decay(res.times, res.difference_norms, fit_min, fit_max);
    return res;
}

}  // namespace diskflow
