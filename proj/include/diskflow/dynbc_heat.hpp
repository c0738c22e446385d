#pragma once

#include <functional>
#include <vector>

#include "diskflow/radial_grid.hpp"

namespace diskflow {

enum class BCVariant { dynamic, dirichlet };

/// Parameters of  y_t = nu((1/r)(r y_r)_r - k^2 y / r^2),  y(1) = ell,
/// ell' = alpha_tilde * nu * (y_r(1) - k y(1))  (dynamic)  or  y(1) = 0 (dirichlet).
struct DynBCParams {
    int k = 0;
    double alpha_tilde = 1.0;
    double nu = 1.0;
    BCVariant variant = BCVariant::dynamic;
    /// theta-method weight: 1 = implicit Euler, 0.5 = Crank-Nicolson.
    double theta = 1.0;

    void validate() const;
    static DynBCParams z_system(const PhysicalParams& p, double theta = 1.0);
    static DynBCParams w_system(const PhysicalParams& p, double theta = 1.0);
    /// Dirichlet problem for angular mode k >= 2, evolved with index k - 1.
    static DynBCParams higher_mode(int mode, double nu, double theta = 1.0);
};

struct ScalarModeState {
    std::vector<double> y;
    double ell = 0.0;
    double t = 0.0;
};

/// Optional forcing: f in the fluid, g on the ball (ell' gains g).
struct ScalarSource {
    std::vector<double> f;
    double g = 0.0;
};

/// Cached implicit operator for a fixed (grid, params, dt).
class DynBCStepper {
public:
    DynBCStepper(GridPtr grid, DynBCParams params, double dt);

    ScalarModeState step(const ScalarModeState& s, const ScalarSource* source = nullptr) const;
    void step_inplace(ScalarModeState& s, const ScalarSource* source = nullptr) const;

    double dt() const { return dt_; }
    const DynBCParams& params() const { return params_; }
    const GridPtr& grid() const { return grid_; }

    /// Diagonal (lumped) mass of unknown i; index 0 carries the ball weight.
    double mass_weight(int i) const { return dmass_[static_cast<std::size_t>(i)]; }
    /// Semi-discrete operator applied to the state: returns (A u)_i for all nodes.
    std::vector<double> apply_operator(const ScalarModeState& s) const;

private:
    GridPtr grid_;
    DynBCParams params_;
    double dt_;
    int first_ = 0;
    int last_ = 0;
    std::vector<double> dmass_;
    std::vector<double> lower_, diag_, upper_;   // operator A (tridiagonal)
    std::vector<double> cprime_, denom_;         // factorisation of D + theta dt A
};

ScalarModeState step(const GridPtr& grid, const ScalarModeState& state,
                     const DynBCParams& params, double dt);

using ScalarObserver = std::function<void(const ScalarModeState&)>;

/// Steps from state0.t to t_end; calls `observe` whenever a requested output time is reached.
ScalarModeState evolve(const GridPtr& grid, const ScalarModeState& state0,
                       const DynBCParams& params, double t_end, double dt,
                       const std::vector<double>& output_times = {},
                       const ScalarObserver& observe = {});

/// 2 pi sum w_i y_i + (2 pi / alpha_tilde) ell; defined for the dynamic k = 0 system.
double mass(const ScalarModeState& state, const DynBCParams& params, const RadialGrid& grid);

/// (2 pi sum w_i |y_i|^p + (2 pi / alpha_tilde)|ell|^p)^(1/p); max(|y|,|ell|) for p = inf.
double mode_norm(const ScalarModeState& state, const DynBCParams& params,
                 const RadialGrid& grid, double p);

/// Lyapunov functional for j(y) = |y|^p (no root taken).
double lyapunov_functional(const ScalarModeState& state, const DynBCParams& params,
                           const RadialGrid& grid, double p);

/// exp(-r^2/(4 nu t)) / (4 pi nu t) at the grid nodes.
std::vector<double> gaussian_profile(const RadialGrid& grid, double t, double nu);

}  // namespace diskflow
