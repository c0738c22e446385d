#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "diskflow/analysis.hpp"
#include "diskflow/fields.hpp"
#include "diskflow/stokes.hpp"

namespace diskflow {

enum class NonlinearMode { imex, kato };

/// Worker threads for the pointwise convection product (default 1).
void set_num_threads(int n);
int num_threads();

struct NonlinearConfig {
    NonlinearMode mode = NonlinearMode::imex;
    int k_max = 4;
    int n_theta = 0;  // 0 picks the smallest power of two with 3 k_max + 1 points
    bool dealias = true;
    int kato_max_iters = 30;
    double kato_tol = 1e-12;  // relative to G_0
    double blowup_factor = 10.0;
    double cfl = 0.5;
    bool zero_nonlinearity = false;

    int resolved_n_theta() const;
    void validate() const;
};

/// Evaluates F(V) = (ell_V - V) . grad V on the fluid (zero on the disk) and
/// its Leray projection. Holds the cached projector for one grid and k_max.
class NonlinearOperator {
public:
    NonlinearOperator(GridPtr grid, const PhysicalParams& params, const NonlinearConfig& config);

    /// Unprojected convection term, angular modes 0..k_max.
    SpectralField convection(const ModeDecomposition& d) const;
    /// P F(V).
    ModeDecomposition operator()(const ModeDecomposition& d) const;
    /// Largest |V| seen by the last evaluation (fluid samples and disk speed).
    double last_max_speed() const { return last_max_speed_; }
    const NonlinearConfig& config() const { return config_; }

private:
    GridPtr grid_;
    NonlinearConfig config_;
    int n_theta_;
    LerayProjector projector_;
    mutable double last_max_speed_ = 0.0;
};

ModeDecomposition nonlinear_term(const ModeDecomposition& d, const PhysicalParams& params,
                                 const NonlinearConfig& config);

/// Half the m/pi-weighted L^2 norm squared: fluid energy plus (m |ell|^2 + J omega^2) / 2.
double kinetic_energy(const ModeDecomposition& d, const PhysicalParams& params);

/// Implicit Stokes block plus explicit convection: Adams-Bashforth 2 after an
/// explicit Euler start. Guards: CFL (dt <= cfl * h_min / max|V|) and blow-up.
class ImexStepper {
public:
    ImexStepper(const StokesState& like, const NonlinearConfig& config, double dt);
    void step(StokesState& s);
    /// Forgets the stored convection term (next step is an Euler start).
    void reset() { previous_.reset(); }
    double dt() const { return linear_.dt(); }

private:
    NonlinearConfig config_;
    StokesStepper linear_;
    NonlinearOperator op_;
    std::optional<ModeDecomposition> previous_;
};

/// One Euler-start IMEX step.
StokesState step_ns(const StokesState& state, const NonlinearConfig& config, double dt);

StokesState evolve_ns(const StokesState& state0, const NonlinearConfig& config, double t_end, double dt,
                      const std::vector<double>& output_times = {}, const StokesObserver& observe = {});

using PairedObserver = std::function<void(const StokesState& nonlinear, const StokesState& linear)>;

/// Runs the IMEX evolution and the linear evolution from the same data in
/// lockstep; the observer sees both at every output time.
StokesState evolve_ns_paired(const StokesState& state0, const NonlinearConfig& config, double t_end,
                             double dt, const std::vector<double>& output_times,
                             const PairedObserver& observe);

struct KatoDiagnostics {
    std::vector<double> G_n;
    std::vector<double> differences;        // triple norm of Y_{n+1} - Y_n
    std::vector<double> contraction_ratios;  // differences[n] / differences[n-1]
    double C0 = 0.0;
    double mu0_estimate = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct KatoResult {
    std::vector<double> times;
    std::vector<ModeDecomposition> series;  // final iterate at each time
    KatoDiagnostics diagnostics;
};

/// sup over samples of max{t^{3/8} |Y|_8, |Y|_2, t^{1/2} |ell_Y|}.
double kato_triple_norm(const std::vector<double>& times, const std::vector<ModeDecomposition>& ys,
                        const PhysicalParams& params);

/// Successive approximations Y_{n+1} = S(t) V_0 + K Y_n. K is a left-endpoint
/// rectangle rule in time with S applied by marching the Stokes stepper.
KatoResult kato_solve(const StokesState& state0, const NonlinearConfig& config, double t_end, double dt);

/// Swirl with tail r^{-gamma}, gamma = 2/q + delta, cut off smoothly before
/// r_cut (default 0.8 r_max), plus compact mode-1 and mode-2 content of relative
/// size compact_fraction so the convection term is not a pure gradient.
ModeDecomposition tail_data(GridPtr grid, double q, double amplitude, int k_max, double delta = 0.02,
                            double r_cut = 0.0, double compact_fraction = 0.25);

struct ImprovedDecayResult {
    DecayFit base;        // |V(t)|_p
    DecayFit difference;  // |V(t) - S(t) V_0|_p
    std::vector<double> times, base_norms, difference_norms;
};

ImprovedDecayResult improved_decay_experiment(const ModeDecomposition& V0, const PhysicalParams& params,
                                              const NonlinearConfig& config, double p, double t_end,
                                              double dt, double fit_min, double fit_max);

}  // namespace diskflow
