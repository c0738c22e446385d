#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "diskflow/dynbc_heat.hpp"
#include "diskflow/fields.hpp"

namespace diskflow {

/// Linear fluid-disk state. The evolved unknowns are W (mode 0), the two
/// mode-1 transforms Z_Psi, Z_Phi, and z_k for k >= 2; `decomp` is rebuilt
/// from them after every step.
struct StokesState {
    GridPtr grid;
    PhysicalParams params;
    int k_max = 1;
    double theta = 1.0;  // time-stepping weight shared by all blocks
    double t = 0.0;
    ScalarModeState w, z_psi, z_phi;
    std::vector<ScalarModeState> z_cos, z_sin;  // entry k - 2
    ModeDecomposition decomp;
};

StokesState init_stokes(const ModeDecomposition& decomp, const PhysicalParams& params, double theta = 1.0);

/// Recomputes `decomp` (and the rigid velocities) from the evolved unknowns.
void rebuild_decomposition(StokesState& s);

/// One step of every block for a fixed dt; optional forcing given as a
/// projected field (the Navier-Stokes driver passes P F(V) here).
class StokesStepper {
public:
    StokesStepper(const StokesState& like, double dt);
    void step(StokesState& s, const ModeDecomposition* forcing = nullptr) const;
    double dt() const { return dt_; }

private:
    double dt_;
    std::unique_ptr<DynBCStepper> w_, z_;
    std::vector<std::unique_ptr<DynBCStepper>> high_;
};

StokesState step_stokes(const StokesState& state, double dt);

using StokesObserver = std::function<void(const StokesState&)>;

StokesState evolve_stokes(const StokesState& state0, double t_end, double dt,
                          const std::vector<double>& output_times = {},
                          const StokesObserver& observe = {});

/// psi_tilde(t, r) = (1 - exp(-r^2 / 4 nu t)) / (2 pi r).
std::vector<double> lamb_oseen_stream(const RadialGrid& grid, double t, double nu);
/// psi_hat(t, r) = (exp(-1/4 nu t) - exp(-r^2/4 nu t) + 1/4 nu t) / (2 pi r) for r >= 1.
std::vector<double> disk_corrected_stream(const RadialGrid& grid, double t, double nu);

/// Mode-1 decomposition of U_M: Psi = M_2 psi_tilde, Phi = -M_1 psi_tilde.
ModeDecomposition lamb_oseen_profile(GridPtr grid, double t, double nu,
                                     const std::array<double, 2>& M_vec, int k_max = 1,
                                     bool disk_corrected = false);

struct Mode1Pressure {
    double beta_psi = 0.0;      // l_2' - nu d_r Z_Psi(1)
    double beta_phi = 0.0;      // l_1' - nu d_r Z_Phi(1)
    double beta_psi_alt = 0.0;  // nu d_r Z_Psi(1) - (m/pi) l_2'
    double beta_phi_alt = 0.0;  // nu d_r Z_Phi(1) - (m/pi) l_1'
};

/// Mode-1 pressure coefficients (q_1 = beta / r) from the boundary relations.
Mode1Pressure recover_mode1_pressure(const StokesState& state);

struct TimedRigid {
    double t = 0.0;
    RigidState rigid;
};

/// Fills h(t) = int ell, theta(t) = int omega by the trapezoid rule.
std::vector<TimedRigid> reconstruct_trajectory(const std::vector<TimedRigid>& series);

struct AsymptoticMomenta {
    std::array<double, 2> M_vec{0.0, 0.0};  // (m - pi) ell_0
    double M_phi = 0.0;                     // quadrature mass of Z_Phi
    double M_psi = 0.0;                     // quadrature mass of Z_Psi
};

AsymptoticMomenta asymptotic_momenta(const StokesState& state0);

}  // namespace diskflow
