#pragma once

#include <array>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "diskflow/error.hpp"

namespace diskflow {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Three-point finite-difference stencil: result = sum_j c[j] * f[offset + j].
struct Stencil {
    int offset = 0;
    std::array<double, 3> c{};
};

/// Stretched mesh r_0 = 1 < ... < r_{n-1} = r_max with weights for f(r) r dr.
struct RadialGrid {
    int n_points = 0;
    double r_max = 0.0;
    double stretch = 0.0;
    std::vector<double> nodes;
    std::vector<double> quad_weights;
    /// First-derivative stencils: centred inside, one-sided at both ends.
    std::vector<Stencil> d1;

    double r(int i) const { return nodes[static_cast<std::size_t>(i)]; }
    double h_min() const;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Fluid and disk parameters. Disk inertia defaults to m/2 (homogeneous disk).
struct PhysicalParams {
    double nu = 1.0;
    double m = 1.0;
    double inertia = 0.5;
    bool homogeneous = true;

    static PhysicalParams make(double nu, double m, bool homogeneous = true,
                               double inertia = 0.0);
    double alpha0() const { return 4.0 * kPi / (kPi + m); }
    double alpha_w() const { return 2.0 * kPi / inertia; }
    void validate() const;
};

GridPtr build_grid(int n_points, double r_max, double stretch);

/// Grid on caller-supplied nodes (at least 3, strictly increasing, first node 1).
GridPtr grid_from_nodes(std::vector<double> nodes, double stretch = 0.0);

double lp_norm_radial(const RadialGrid& grid, std::span<const double> values, double p);

/// Second-order first derivative with the grid stencils.
std::vector<double> radial_derivative(const RadialGrid& grid, std::span<const double> f);
double derivative_at(const RadialGrid& grid, std::span<const double> f, int i);

/// Cumulative integral int_1^{r_i} f(s) s ds, exact for piecewise-linear f.
std::vector<double> cumulative_weighted_integral(const RadialGrid& grid,
                                                 std::span<const double> f);

}  // namespace diskflow
