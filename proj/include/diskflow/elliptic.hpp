#pragma once

#include <vector>

#include "diskflow/dynbc_heat.hpp"
#include "diskflow/radial_grid.hpp"

namespace diskflow {

/// A mode-1 stream profile with its boundary value psi(1) = ell.
struct StreamPair {
    std::vector<double> psi;
    double ell = 0.0;
};

/// z = d_r psi + psi / r (negated when `phi_sign`), ell_z = 2 ell (also negated).
ScalarModeState z_transform(const StreamPair& pair, const RadialGrid& grid, bool phi_sign = false);

/// psi(r) = ell/r + (1/r) int_1^r s z(s) ds with ell = ell_z / 2.
StreamPair invert_z(const ScalarModeState& z, const RadialGrid& grid);

/// z_k = d_r psi_k + k psi_k / r for angular mode k.
std::vector<double> z_transform_mode(const std::vector<double>& psi, const RadialGrid& grid, int k);

/// psi_k(r) = r^{-k} int_1^r s^k z_k(s) ds (trapezoid, psi_k(1) = 0).
std::vector<double> invert_z_mode(const std::vector<double>& z, const RadialGrid& grid, int k);

struct DrzReport {
    double lhs = 0.0;         // ||z / r||
    double rhs = 0.0;         // ||d_r z|| + eps_p |z(1)|
    double ratio = 0.0;       // lhs / rhs (0 when both vanish)
    bool violation = false;   // lhs > 0 while rhs = 0
    double r_max = 0.0;
};

DrzReport check_drz_bound(const std::vector<double>& z, const RadialGrid& grid, double p);

struct WEllipticReport {
    double norm_drr = 0.0;      // ||d_rr w||
    double norm_mixed = 0.0;    // ||d_r w / r - w / r^2||
    double norm_w_r2 = 0.0;     // ||w / r^2||
    double norm_f = 0.0;        // ||d_rr w + d_r w / r - w / r^2||
    double a = 0.0;             // d_r w(1) - w(1)
    double b = 0.0;             // w(1)
    double ratio_main = 0.0;    // (norm_drr + norm_mixed) / (norm_f + |a|)
    double ratio_lower = 0.0;   // norm_w_r2 / (norm_f + |a|)
};

WEllipticReport check_w_elliptic(const std::vector<double>& w, const RadialGrid& grid, double p);

/// Second derivative: three-point inside, derivative of the first derivative at the ends.
std::vector<double> radial_second_derivative(const RadialGrid& grid, const std::vector<double>& f);

}  // namespace diskflow
