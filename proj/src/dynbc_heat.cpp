#include "diskflow/dynbc_heat.hpp"

#include <algorithm>
#include <cmath>

namespace diskflow {

void DynBCParams::validate() const {
    if (!(nu > 0.0)) throw Error("invalid-argument", "nu must be positive");
    if (!(theta >= 0.5 && theta <= 1.0)) throw Error("invalid-argument", "theta must lie in [0.5, 1]");
    if (variant == BCVariant::dynamic) {
        if (k != 0 && k != 1) throw Error("invalid-argument", "dynamic variant needs k in {0,1}");
        if (!(alpha_tilde > 0.0)) throw Error("invalid-argument", "alpha_tilde must be positive");
    } else if (k < 1) {
        throw Error("invalid-argument", "dirichlet variant needs k >= 1");
    }
}

DynBCParams DynBCParams::z_system(const PhysicalParams& p, double theta) {
    return DynBCParams{0, p.alpha0(), p.nu, BCVariant::dynamic, theta};
}

DynBCParams DynBCParams::w_system(const PhysicalParams& p, double theta) {
    return DynBCParams{1, p.alpha_w(), p.nu, BCVariant::dynamic, theta};
}

DynBCParams DynBCParams::higher_mode(int mode, double nu, double theta) {
    if (mode < 2) throw Error("invalid-argument", "higher modes start at k = 2");
    return DynBCParams{mode - 1, 1.0, nu, BCVariant::dirichlet, theta};
}

DynBCStepper::DynBCStepper(GridPtr grid, DynBCParams params, double dt)
    : grid_(std::move(grid)), params_(params), dt_(dt) {
    params_.validate();
    if (!(dt > 0.0)) throw Error("invalid-argument", "dt must be positive");
    const RadialGrid& g = *grid_;
    const int n = g.n_points;
    if (n < 3) throw Error("invalid-argument", "grid too small");
    first_ = params_.variant == BCVariant::dynamic ? 0 : 1;
    last_ = n - 2;

    const double nu = params_.nu;
    const double k2 = static_cast<double>(params_.k) * params_.k;
    lower_.assign(n, 0.0);
    diag_.assign(n, 0.0);
    upper_.assign(n, 0.0);
    for (int j = 0; j + 1 < n; ++j) {
        const double a = g.r(j), b = g.r(j + 1);
        const double kappa = nu * (a + b) / (2.0 * (b - a));
        diag_[j] += kappa;
        diag_[j + 1] += kappa;
        upper_[j] -= kappa;
        lower_[j + 1] -= kappa;
    }
    for (int i = 0; i < n; ++i) diag_[i] += nu * k2 * g.quad_weights[i] / (g.r(i) * g.r(i));
    dmass_ = g.quad_weights;
    if (params_.variant == BCVariant::dynamic) {
        diag_[0] += nu * params_.k;
        dmass_[0] += 1.0 / params_.alpha_tilde;
    }

    // Thomas factorisation of D + theta dt A on [first_, last_].
    const double td = params_.theta * dt_;
    cprime_.assign(n, 0.0);
    denom_.assign(n, 0.0);
    for (int i = first_; i <= last_; ++i) {
        const double b = dmass_[i] + td * diag_[i];
        const double a = (i > first_) ? td * lower_[i] : 0.0;
        const double c = (i < last_) ? td * upper_[i] : 0.0;
        const double den = (i > first_) ? b - a * cprime_[i - 1] : b;
        if (!(std::abs(den) > 0.0)) throw Error("solver-failure", "singular implicit system");
        denom_[i] = den;
        cprime_[i] = c / den;
    }
}

std::vector<double> DynBCStepper::apply_operator(const ScalarModeState& s) const {
    const int n = grid_->n_points;
    std::vector<double> u(s.y.begin(), s.y.end());
    u.resize(n, 0.0);
    u[0] = params_.variant == BCVariant::dynamic ? s.ell : 0.0;
    u[n - 1] = 0.0;
    std::vector<double> out(n, 0.0);
    for (int i = first_; i <= last_; ++i) {
        double v = diag_[i] * u[i];
        if (i > 0) v += lower_[i] * u[i - 1];
        v += upper_[i] * u[i + 1];
        out[i] = v;
    }
    return out;
}

void DynBCStepper::step_inplace(ScalarModeState& s, const ScalarSource* source) const {
    const RadialGrid& g = *grid_;
    const int n = g.n_points;
    if (static_cast<int>(s.y.size()) != n) throw Error("invalid-argument", "state length does not match grid");
    const bool dyn = params_.variant == BCVariant::dynamic;
    s.y[0] = dyn ? s.ell : 0.0;
    s.y[n - 1] = 0.0;

    const double expl = (1.0 - params_.theta) * dt_;
    std::vector<double> rhs(n, 0.0);
    for (int i = first_; i <= last_; ++i) {
        double au = diag_[i] * s.y[i] + upper_[i] * s.y[i + 1];
        if (i > 0) au += lower_[i] * s.y[i - 1];
        rhs[i] = dmass_[i] * s.y[i] - expl * au;
    }
    if (source != nullptr) {
        for (int i = std::max(first_, 1); i <= last_; ++i) rhs[i] += dt_ * g.quad_weights[i] * source->f[i];
        if (dyn) rhs[0] += dt_ * (g.quad_weights[0] * source->f[0] + source->g / params_.alpha_tilde);
    }

    const double td = params_.theta * dt_;
    std::vector<double>& u = s.y;
    for (int i = first_; i <= last_; ++i) {
        const double a = (i > first_) ? td * lower_[i] : 0.0;
        const double prev = (i > first_) ? u[i - 1] : 0.0;
        u[i] = (rhs[i] - a * prev) / denom_[i];
    }
    for (int i = last_ - 1; i >= first_; --i) u[i] -= cprime_[i] * u[i + 1];

    s.ell = dyn ? u[0] : 0.0;
    s.t += dt_;
}

ScalarModeState DynBCStepper::step(const ScalarModeState& s, const ScalarSource* source) const {
    ScalarModeState out = s;
    step_inplace(out, source);
    return out;
}

ScalarModeState step(const GridPtr& grid, const ScalarModeState& state,
                     const DynBCParams& params, double dt) {
    return DynBCStepper(grid, params, dt).step(state);
}

ScalarModeState evolve(const GridPtr& grid, const ScalarModeState& state0,
                       const DynBCParams& params, double t_end, double dt,
                       const std::vector<double>& output_times, const ScalarObserver& observe) {
    if (!(dt > 0.0)) throw Error("invalid-argument", "dt must be positive");
    ScalarModeState s = state0;
    if (!(t_end >= s.t)) throw Error("invalid-argument", "t_end precedes the initial time");
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
    const double span = t_end - s.t;
    const long nsteps = static_cast<long>(std::ceil(span / dt - 1e-9));
    if (nsteps <= 0) return s;
    const DynBCStepper stepper(grid, params, dt);
    const double t0 = s.t;
    for (long j = 0; j < nsteps; ++j) {
        const double remaining = t_end - s.t;
        if (remaining < dt - eps) {
            DynBCStepper(grid, params, remaining).step_inplace(s);
            s.t = t_end;
        } else {
            stepper.step_inplace(s);
            s.t = t0 + static_cast<double>(j + 1) * dt;
        }
        emit();
    }
    return s;
}

double mass(const ScalarModeState& state, const DynBCParams& params, const RadialGrid& grid) {
    if (params.variant != BCVariant::dynamic || params.k != 0)
        throw Error("unsupported-variant", "mass is defined for the dynamic k = 0 system");
    double s = 0.0;
    for (int i = 0; i < grid.n_points; ++i) s += grid.quad_weights[i] * state.y[i];
    return 2.0 * kPi * s + 2.0 * kPi / params.alpha_tilde * state.ell;
}

double lyapunov_functional(const ScalarModeState& state, const DynBCParams& params,
                           const RadialGrid& grid, double p) {
    double s = 0.0;
    for (int i = 0; i < grid.n_points; ++i) s += grid.quad_weights[i] * std::pow(std::abs(state.y[i]), p);
    s *= 2.0 * kPi;
    if (params.variant == BCVariant::dynamic) s += 2.0 * kPi / params.alpha_tilde * std::pow(std::abs(state.ell), p);
    return s;
}

double mode_norm(const ScalarModeState& state, const DynBCParams& params,
                 const RadialGrid& grid, double p) {
    if (std::isinf(p)) {
        double m = std::abs(state.ell);
        for (double v : state.y) m = std::max(m, std::abs(v));
        return m;
    }
    return std::pow(lyapunov_functional(state, params, grid, p), 1.0 / p);
}

std::vector<double> gaussian_profile(const RadialGrid& grid, double t, double nu) {
    if (!(t > 0.0)) throw Error("nonpositive-time", "t must be positive");
    std::vector<double> g(grid.n_points);
    const double s = 4.0 * nu * t;
    for (int i = 0; i < grid.n_points; ++i) g[i] = std::exp(-grid.r(i) * grid.r(i) / s) / (kPi * s);
    return g;
}

}  // namespace diskflow
