#include "diskflow/radial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace diskflow {

namespace {

Stencil centred(double h1, double h2, int i) {
    Stencil s;
    s.offset = i - 1;
    s.c = {-h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2), h1 / (h2 * (h1 + h2))};
    return s;
}

Stencil forward(double h1, double h2, int i) {
    Stencil s;
    s.offset = i;
    s.c = {-(2.0 * h1 + h2) / (h1 * (h1 + h2)), (h1 + h2) / (h1 * h2), -h1 / (h2 * (h1 + h2))};
    return s;
}

Stencil backward(double h1, double h2, int i) {
    Stencil s;
    s.offset = i - 2;
    s.c = {h2 / (h1 * (h1 + h2)), -(h1 + h2) / (h1 * h2), (2.0 * h2 + h1) / (h2 * (h1 + h2))};
    return s;
}

}  // namespace

double RadialGrid::h_min() const {
    double h = kInf;
    for (int i = 0; i + 1 < n_points; ++i) h = std::min(h, r(i + 1) - r(i));
    return h;
}

PhysicalParams PhysicalParams::make(double nu, double m, bool homogeneous, double inertia) {
    PhysicalParams p;
    p.nu = nu;
    p.m = m;
    p.homogeneous = homogeneous;
    p.inertia = homogeneous ? m / 2.0 : inertia;
    p.validate();
    return p;
}

void PhysicalParams::validate() const {
    if (!(nu > 0.0)) throw Error("invalid-argument", "nu must be positive");
    if (!(m > 0.0)) throw Error("invalid-argument", "m must be positive");
    if (!(inertia > 0.0)) throw Error("invalid-argument", "inertia must be positive");
}

GridPtr grid_from_nodes(std::vector<double> nodes, double stretch) {
    const int n = static_cast<int>(nodes.size());
    if (n < 3) throw Error("invalid-argument", "grid needs at least 3 nodes");
    if (nodes.front() != 1.0) throw Error("invalid-argument", "first node must be 1");
    for (int i = 0; i + 1 < n; ++i) {
        if (!(nodes[i + 1] > nodes[i]))
            throw Error("invalid-argument", "nodes must be strictly increasing");
    }
    auto g = std::make_shared<RadialGrid>();
    g->n_points = n;
    g->r_max = nodes.back();
    g->stretch = stretch;
    g->nodes = std::move(nodes);
    g->quad_weights.assign(n, 0.0);
    for (int i = 0; i + 1 < n; ++i) {
        const double a = g->nodes[i];
        const double b = g->nodes[i + 1];
        const double h = b - a;
        g->quad_weights[i] += h * (2.0 * a + b) / 6.0;
        g->quad_weights[i + 1] += h * (a + 2.0 * b) / 6.0;
    }
    g->d1.resize(n);
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            g->d1[i] = forward(g->r(1) - g->r(0), g->r(2) - g->r(1), 0);
        } else if (i == n - 1) {
            g->d1[i] = backward(g->r(n - 2) - g->r(n - 3), g->r(n - 1) - g->r(n - 2), i);
        } else {
            g->d1[i] = centred(g->r(i) - g->r(i - 1), g->r(i + 1) - g->r(i), i);
        }
    }
    return g;
}

GridPtr build_grid(int n_points, double r_max, double stretch) {
    if (n_points < 16) throw Error("invalid-argument", "n_points must be at least 16");
    if (!(r_max > 2.0)) throw Error("invalid-argument", "r_max must exceed 2");
    if (!(stretch >= 0.0)) throw Error("invalid-argument", "stretch must be nonnegative");
    std::vector<double> nodes(n_points);
    const double span = r_max - 1.0;
    for (int i = 0; i < n_points; ++i) {
        const double xi = static_cast<double>(i) / (n_points - 1);
        double s = xi;
        if (stretch > 0.0) s = std::expm1(stretch * xi) / std::expm1(stretch);
        nodes[i] = 1.0 + span * s;
    }
    nodes.front() = 1.0;
    nodes.back() = r_max;
    return grid_from_nodes(std::move(nodes), stretch);
}

double lp_norm_radial(const RadialGrid& grid, std::span<const double> values, double p) {
    if (static_cast<int>(values.size()) != grid.n_points)
        throw Error("invalid-argument", "values length does not match grid");
    if (!(p >= 1.0)) throw Error("invalid-argument", "p must be at least 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (int i = 0; i < grid.n_points; ++i) s += grid.quad_weights[i] * std::pow(std::abs(values[i]), p);
    return std::pow(s, 1.0 / p);
}

double derivative_at(const RadialGrid& grid, std::span<const double> f, int i) {
    const Stencil& s = grid.d1[i];
    return s.c[0] * f[s.offset] + s.c[1] * f[s.offset + 1] + s.c[2] * f[s.offset + 2];
}

std::vector<double> radial_derivative(const RadialGrid& grid, std::span<const double> f) {
    std::vector<double> d(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) d[i] = derivative_at(grid, f, i);
    return d;
}

std::vector<double> cumulative_weighted_integral(const RadialGrid& grid,
                                                 std::span<const double> f) {
    std::vector<double> out(grid.n_points, 0.0);
    for (int i = 0; i + 1 < grid.n_points; ++i) {
        const double a = grid.r(i);
        const double b = grid.r(i + 1);
        const double h = b - a;
        out[i + 1] = out[i] + h * ((2.0 * a + b) * f[i] + (a + 2.0 * b) * f[i + 1]) / 6.0;
    }
    return out;
}

}  // namespace diskflow
