#include "diskflow/elliptic.hpp"

#include <cmath>

namespace diskflow {

ScalarModeState z_transform(const StreamPair& pair, const RadialGrid& grid, bool phi_sign) {
    if (static_cast<int>(pair.psi.size()) != grid.n_points)
        throw Error("invalid-argument", "profile length does not match grid");
    const double sgn = phi_sign ? -1.0 : 1.0;
    ScalarModeState z;
    z.y = z_transform_mode(pair.psi, grid, 1);
    for (double& v : z.y) v *= sgn;
    z.ell = sgn * 2.0 * pair.ell;
    return z;
}

StreamPair invert_z(const ScalarModeState& z, const RadialGrid& grid) {
    if (static_cast<int>(z.y.size()) != grid.n_points)
        throw Error("invalid-argument", "profile length does not match grid");
    StreamPair out;
    out.ell = 0.5 * z.ell;
    const std::vector<double> c = cumulative_weighted_integral(grid, z.y);
    out.psi.resize(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) out.psi[i] = (out.ell + c[i]) / grid.r(i);
    return out;
}

std::vector<double> z_transform_mode(const std::vector<double>& psi, const RadialGrid& grid, int k) {
    std::vector<double> z = radial_derivative(grid, psi);
    for (int i = 0; i < grid.n_points; ++i) z[i] += k * psi[i] / grid.r(i);
    return z;
}

std::vector<double> invert_z_mode(const std::vector<double>& z, const RadialGrid& grid, int k) {
    std::vector<double> psi(grid.n_points, 0.0);
    for (int i = 0; i + 1 < grid.n_points; ++i) {
        const double h = grid.r(i + 1) - grid.r(i);
        const double q = std::pow(grid.r(i) / grid.r(i + 1), k);
        psi[i + 1] = q * psi[i] + 0.5 * h * (q * z[i] + z[i + 1]);
    }
    return psi;
}

DrzReport check_drz_bound(const std::vector<double>& z, const RadialGrid& grid, double p) {
    if (!(p > 1.0) || std::isinf(p)) throw Error("unsupported-p", "p must lie in (1, inf)");
    if (p == 2.0) throw Error("unsupported-p", "p = 2 is excluded");
    std::vector<double> zr(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) zr[i] = z[i] / grid.r(i);
    const std::vector<double> dz = radial_derivative(grid, z);
    DrzReport rep;
    rep.r_max = grid.r_max;
    rep.lhs = lp_norm_radial(grid, zr, p);
    rep.rhs = lp_norm_radial(grid, dz, p) + (p > 2.0 ? std::abs(z[0]) : 0.0);
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    rep.violation = rep.lhs > 0.0 && rep.rhs == 0.0;
    return rep;
}

std::vector<double> radial_second_derivative(const RadialGrid& grid, const std::vector<double>& f) {
    const int n = grid.n_points;
    const std::vector<double> d = radial_derivative(grid, f);
    std::vector<double> out(n);
    for (int i = 1; i + 1 < n; ++i) {
        const double h1 = grid.r(i) - grid.r(i - 1);
        const double h2 = grid.r(i + 1) - grid.r(i);
        out[i] = 2.0 * (f[i - 1] / (h1 * (h1 + h2)) - f[i] / (h1 * h2) + f[i + 1] / (h2 * (h1 + h2)));
    }
    out[0] = derivative_at(grid, d, 0);
    out[n - 1] = derivative_at(grid, d, n - 1);
    return out;
}

WEllipticReport check_w_elliptic(const std::vector<double>& w, const RadialGrid& grid, double p) {
    if (!(p > 1.0)) throw Error("unsupported-p", "p must exceed 1");
    const int n = grid.n_points;
    const std::vector<double> dw = radial_derivative(grid, w);
    const std::vector<double> ddw = radial_second_derivative(grid, w);
    std::vector<double> mixed(n), wr2(n), f(n);
    for (int i = 0; i < n; ++i) {
        const double r = grid.r(i);
        mixed[i] = dw[i] / r - w[i] / (r * r);
        wr2[i] = w[i] / (r * r);
        f[i] = ddw[i] + mixed[i];
    }
    WEllipticReport rep;
    rep.norm_drr = lp_norm_radial(grid, ddw, p);
    rep.norm_mixed = lp_norm_radial(grid, mixed, p);
    rep.norm_w_r2 = lp_norm_radial(grid, wr2, p);
    rep.norm_f = lp_norm_radial(grid, f, p);
    rep.a = dw[0] - w[0];
    rep.b = w[0];
    const double den = rep.norm_f + std::abs(rep.a);
    rep.ratio_main = den > 0.0 ? (rep.norm_drr + rep.norm_mixed) / den : 0.0;
    rep.ratio_lower = den > 0.0 ? rep.norm_w_r2 / den : 0.0;
    return rep;
}

}  // namespace diskflow
