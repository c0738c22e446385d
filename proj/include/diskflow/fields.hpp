#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "diskflow/radial_grid.hpp"

namespace diskflow {

/// Disk translation velocity, angular velocity, and integrated position/angle.
struct RigidState {
    std::array<double, 2> ell{0.0, 0.0};
    double omega = 0.0;
    std::array<double, 2> h{0.0, 0.0};
    double theta = 0.0;
};

/// Mode 0 swirl W, mode-1 stream profiles Psi (cos) and Phi (sin), and
/// stream profiles psi_k (cos k theta), phi_k (sin k theta) for k = 2..k_max.
struct ModeDecomposition {
    GridPtr grid;
    int k_max = 1;
    std::vector<double> W, Psi, Phi;
    std::vector<std::vector<double>> psi_k, phi_k;  // entry k - 2
    RigidState rigid;

    static ModeDecomposition zeros(GridPtr grid, int k_max);

    /// Cosine / sine stream profile for mode k >= 1 (k = 1 gives Psi / Phi).
    std::vector<double>& cos_profile(int k) { return k == 1 ? Psi : psi_k[k - 2]; }
    std::vector<double>& sin_profile(int k) { return k == 1 ? Phi : phi_k[k - 2]; }
    const std::vector<double>& cos_profile(int k) const { return k == 1 ? Psi : psi_k[k - 2]; }
    const std::vector<double>& sin_profile(int k) const { return k == 1 ? Phi : phi_k[k - 2]; }

    /// Sets (ell, omega) from the boundary traces.
    void sync_rigid();
    /// Adjusts node 2 (and node 0 for k >= 2) so the no-slip relations hold exactly.
    void enforce_no_slip();
    /// Linear combination a*this + b*other (same grid and k_max).
    ModeDecomposition axpby(double a, double b, const ModeDecomposition& other) const;
};

/// Physical samples on the fluid grid: v[i * n_theta + j] at (r_i, 2 pi j / n_theta).
/// The disk part is carried through its averages (ball_ell, ball_omega).
struct PolarField {
    GridPtr grid;
    int n_theta = 0;
    std::vector<double> v_r, v_theta;
    std::array<double, 2> ball_ell{0.0, 0.0};
    double ball_omega = 0.0;

    double& vr(int i, int j) { return v_r[static_cast<std::size_t>(i) * n_theta + j]; }
    double& vt(int i, int j) { return v_theta[static_cast<std::size_t>(i) * n_theta + j]; }
    double vr(int i, int j) const { return v_r[static_cast<std::size_t>(i) * n_theta + j]; }
    double vt(int i, int j) const { return v_theta[static_cast<std::size_t>(i) * n_theta + j]; }
    static PolarField zeros(GridPtr grid, int n_theta);
};

/// Angular Fourier coefficients of (v_r, v_theta), index [k][i], k = 0..k_max.
struct SpectralField {
    GridPtr grid;
    int k_max = 0;
    std::vector<std::vector<double>> vr_c, vr_s, vt_c, vt_s;
    std::array<double, 2> ball_ell{0.0, 0.0};
    double ball_omega = 0.0;

    static SpectralField zeros(GridPtr grid, int k_max);
};

/// Smallest power of two >= max(16, 4 k_max + 4).
int default_n_theta(int k_max);

SpectralField to_spectral(const ModeDecomposition& d);
PolarField synthesize(const SpectralField& s, int n_theta);
SpectralField analyze(const PolarField& f, int k_max);

ModeDecomposition decompose(const PolarField& field, const PhysicalParams& params, int k_max,
                            double div_tol = 1e-2);
PolarField reconstruct(const ModeDecomposition& d, int n_theta = 0);
RigidState extract_rigid(const ModeDecomposition& d);

/// L^2 inner product with the disk weighted by m/pi: fluid integral + m ell.ell' + J omega omega'.
double inner_product(const ModeDecomposition& a, const ModeDecomposition& b, const PhysicalParams& p);
double inner_product(const PolarField& a, const PolarField& b, const PhysicalParams& p);

/// (int_F |V|^p + (m/pi) int_B |V|^p)^(1/p); p = inf gives the sup norm.
double weighted_field_norm(const RadialGrid& grid, const ModeDecomposition& d, double p,
                           const PhysicalParams& params);
/// L^p norm over the fluid annulus only.
double fluid_lp_norm(const ModeDecomposition& d, double p);
/// int_B |ell + omega x_perp|^p dx.
double ball_lp_integral(const std::array<double, 2>& ell, double omega, double p);

/// Orthogonal projection (in the m/pi-weighted L^2 product) onto discrete
/// divergence-free fields that are rigid on the disk. One cached sparse
/// factorisation per angular channel.
class LerayProjector {
public:
    LerayProjector(GridPtr grid, const PhysicalParams& params, int k_max);
    ModeDecomposition project(const SpectralField& f) const;
    ModeDecomposition project(const PolarField& f) const;
    int k_max() const { return k_max_; }

private:
    struct Channel;
    GridPtr grid_;
    PhysicalParams params_;
    int k_max_;
    std::vector<std::shared_ptr<const Channel>> cos_, sin_;
    std::vector<double> project_channel(const Channel& ch, const std::vector<double>& vr,
                                        const std::vector<double>& vt, double ball) const;
};

ModeDecomposition project_leray(const PolarField& field, const PhysicalParams& params, int k_max = -1);

/// Potential-flow test field: grad(cos theta / r) in the fluid, -e_1 on the disk
/// (direction 2: grad(sin theta / r), -e_2).
ModeDecomposition kirchhoff_test_field(GridPtr grid, int direction, int k_max = 1);

struct AddedMassPairing {
    double fluid = 0.0;           // int over 1 < r < r_max of v . grad(psi_bar)
    double outer_boundary = 0.0;  // int over r = r_max of psi_bar v . n
    double expected = 0.0;        // -pi ell_{V,direction}
    double relative_error = 0.0;  // |fluid - outer - expected| / |expected|
};

/// Evaluates the fluid integral on the piecewise-linear stream interpolant
/// (Gauss-Legendre per interval) and compares with -pi ell.
AddedMassPairing added_mass_pairing(const ModeDecomposition& d, int direction);

/// Field file: "# ell_x ell_y omega = a b c", header "r, W, Psi, Phi, psi_2, phi_2, ...".
void write_field_file(const std::string& path, const ModeDecomposition& d,
                      const std::string& header_comment = "");
ModeDecomposition read_field_file(const std::string& path);

}  // namespace diskflow
