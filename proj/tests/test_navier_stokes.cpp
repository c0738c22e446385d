#include <cmath>
#include <vector>

#include "diskflow/error.hpp"
#include "diskflow/navier_stokes.hpp"
#include "diskflow/presets.hpp"
#include "doctest.h"

using namespace diskflow;

namespace {

double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double mode_size(const SpectralField& s, int k) {
    return std::max({max_abs(s.vr_c[k]), max_abs(s.vr_s[k]), max_abs(s.vt_c[k]), max_abs(s.vt_s[k])});
}

// Translating disk, swirl and a mode-2 bump, all compactly supported.
ModeDecomposition mixed_data(const GridPtr& g, int k_max, double a) {
    ModeDecomposition d = ModeDecomposition::zeros(g, k_max);
    for (int i = 0; i < g->n_points; ++i) {
        const double r = g->r(i), s = r - 1.0;
        d.Phi[i] = -a * r * compact_bump(r, 1.0);
        d.Psi[i] = 0.5 * a * r * compact_bump(r, 1.5);
        d.W[i] = 0.7 * a * compact_bump(r, 2.0);
        if (k_max >= 2) d.psi_k[0][i] = a * s * s * compact_bump(r, 2.0);
    }
    d.enforce_no_slip();
    d.sync_rigid();
    return d;
}

// (ell - V) . grad V in polar components with fourth-order periodic
// differences in theta, then projected onto modes 0..k_max.
SpectralField brute_force_convection(const ModeDecomposition& d, int n_theta, int k_max) {
    const PolarField v = reconstruct(d, n_theta);
    const RadialGrid& g = *d.grid;
    const int n = g.n_points;
    PolarField out = PolarField::zeros(d.grid, n_theta);
    const double h = 2.0 * kPi / n_theta;
    auto dtheta = [&](const std::vector<double>& f, int i, int j) {
        auto at = [&](int jj) { return f[static_cast<std::size_t>(i) * n_theta + ((jj + n_theta) % n_theta)]; };
        return (-at(j + 2) + 8.0 * at(j + 1) - 8.0 * at(j - 1) + at(j - 2)) / (12.0 * h);
    };
    for (int j = 0; j < n_theta; ++j) {
        std::vector<double> vr(n), vt(n);
        for (int i = 0; i < n; ++i) {
            vr[i] = v.vr(i, j);
            vt[i] = v.vt(i, j);
        }
        const auto dvr = radial_derivative(g, vr), dvt = radial_derivative(g, vt);
        const double th = h * j;
        for (int i = 0; i < n; ++i) {
            const double r = g.r(i);
            const double ar = d.rigid.ell[0] * std::cos(th) + d.rigid.ell[1] * std::sin(th) - vr[i];
            const double at = -d.rigid.ell[0] * std::sin(th) + d.rigid.ell[1] * std::cos(th) - vt[i];
            out.vr(i, j) = ar * dvr[i] + at / r * (dtheta(v.v_r, i, j) - vt[i]);
            out.vt(i, j) = ar * dvt[i] + at / r * (dtheta(v.v_theta, i, j) + vr[i]);
        }
    }
    return analyze(out, k_max);
}

}  // namespace

TEST_SUITE("navier_stokes") {
    TEST_CASE("convection matches a finite-difference evaluation") {
        const GridPtr g = build_grid(1024, 20.0, 2.0);
        const ModeDecomposition d = mixed_data(g, 4, 1.0);
        NonlinearConfig cfg;
        cfg.k_max = 4;
        cfg.n_theta = 256;
        const SpectralField fast = NonlinearOperator(g, PhysicalParams::make(1.0, 2.0), cfg).convection(d);
        const SpectralField slow = brute_force_convection(d, 256, 4);
        double scale = 0.0;
        for (int k = 0; k <= 4; ++k) scale = std::max(scale, mode_size(slow, k));
        REQUIRE(scale > 0.1);
        for (int k = 0; k <= 4; ++k) {
            CHECK(max_abs_diff(fast.vr_c[k], slow.vr_c[k]) <= 1e-5 * scale);
            CHECK(max_abs_diff(fast.vr_s[k], slow.vr_s[k]) <= 1e-5 * scale);
            CHECK(max_abs_diff(fast.vt_c[k], slow.vt_c[k]) <= 1e-5 * scale);
            CHECK(max_abs_diff(fast.vt_s[k], slow.vt_s[k]) <= 1e-5 * scale);
        }
    }

    TEST_CASE("mode-1 data only feed modes 0 and 2") {
        const GridPtr g = build_grid(512, 20.0, 2.0);
        ModeDecomposition d = ModeDecomposition::zeros(g, 4);
        for (int i = 0; i < g->n_points; ++i) {
            const double r = g->r(i);
            d.Phi[i] = -r * compact_bump(r, 1.0);
            d.Psi[i] = 0.3 * r * compact_bump(r, 2.0);
        }
        d.enforce_no_slip();
        d.sync_rigid();
        NonlinearConfig cfg;
        cfg.k_max = 4;
        const SpectralField N = NonlinearOperator(g, PhysicalParams::make(1.0, 2.0), cfg).convection(d);
        const double big = std::max(mode_size(N, 0), mode_size(N, 2));
        CHECK(big > 1e-2);
        CHECK(mode_size(N, 1) <= 1e-12 * big);
        CHECK(mode_size(N, 3) <= 1e-12 * big);
        CHECK(mode_size(N, 4) <= 1e-12 * big);
    }

    TEST_CASE("the nonlinear term is quadratic") {
        const GridPtr g = build_grid(512, 20.0, 2.0);
        const PhysicalParams p = PhysicalParams::make(1.0, 2.0);
        NonlinearConfig cfg;
        cfg.k_max = 3;
        const NonlinearOperator op(g, p, cfg);
        const ModeDecomposition a = op(mixed_data(g, 3, 1.0));
        const ModeDecomposition b = op(mixed_data(g, 3, 0.5));
        const ModeDecomposition c = a.axpby(1.0, -4.0, b);
        CHECK(std::sqrt(inner_product(c, c, p)) <= 1e-12 * std::sqrt(inner_product(a, a, p)));
        CHECK(max_abs(op(ModeDecomposition::zeros(g, 3)).W) == 0.0);
    }

    TEST_CASE("projected nonlinearity is energy-neutral") {
        // <P F(V), V> = <F(V), V> vanishes for divergence-free V up to discretisation error.
        const GridPtr g = build_grid(4096, 20.0, 2.0);
        const PhysicalParams p = PhysicalParams::make(1.0, 2.0);
        NonlinearConfig cfg;
        cfg.k_max = 3;
        const ModeDecomposition d = mixed_data(g, 3, 1.0);
        const ModeDecomposition N = NonlinearOperator(g, p, cfg)(d);
        const double pairing = inner_product(N, d, p);
        CHECK(std::abs(pairing) <= 1e-3 * std::sqrt(inner_product(N, N, p) * inner_product(d, d, p)));
    }

    TEST_CASE("zero nonlinearity reproduces the Stokes flow exactly") {
        const GridPtr g = build_grid(512, 30.0, 2.0);
        const PhysicalParams p = PhysicalParams::make(1.0, 2.0 * kPi);
        const StokesState s0 = init_stokes(mixed_data(g, 2, 1.0), p);
        NonlinearConfig cfg;
        cfg.k_max = 2;
        cfg.zero_nonlinearity = true;
        const StokesState a = evolve_ns(s0, cfg, 2.0, 0.05);
        const StokesState b = evolve_stokes(s0, 2.0, 0.05);
        CHECK(a.decomp.W == b.decomp.W);
        CHECK(a.decomp.Phi == b.decomp.Phi);
        CHECK(a.decomp.psi_k[0] == b.decomp.psi_k[0]);
        CHECK(a.decomp.rigid.ell == b.decomp.rigid.ell);
    }

    TEST_CASE("energy does not increase for small data") {
        const GridPtr g = build_grid(512, 30.0, 2.0);
        const PhysicalParams p = PhysicalParams::make(1.0, 2.0 * kPi);
        const StokesState s0 = init_stokes(mixed_data(g, 3, 0.05), p);
        NonlinearConfig cfg;
        cfg.k_max = 3;
        ImexStepper st(s0, cfg, 0.02);
        StokesState s = s0;
        const double e0 = kinetic_energy(s.decomp, p);
        double prev = e0;
        for (int j = 0; j < 200; ++j) {
            st.step(s);
            const double e = kinetic_energy(s.decomp, p);
            REQUIRE(e <= prev + 1e-8 * e0);
            prev = e;
        }
        CHECK(prev < 0.9 * e0);
    }

    TEST_CASE("threaded convection is bitwise identical") {
        const GridPtr g = build_grid(2048, 20.0, 2.0);
        const PhysicalParams p = PhysicalParams::make(1.0, 2.0);
        NonlinearConfig cfg;
        cfg.k_max = 3;
        const NonlinearOperator op(g, p, cfg);
        const ModeDecomposition d = mixed_data(g, 3, 1.0);
        set_num_threads(1);
        const ModeDecomposition a = op(d);
        const double va = op.last_max_speed();
        set_num_threads(4);
        const ModeDecomposition b = op(d);
        const double vb = op.last_max_speed();
        set_num_threads(1);
        CHECK(a.W == b.W);
        CHECK(a.Phi == b.Phi);
        CHECK(a.psi_k[1] == b.psi_k[1]);
        CHECK(va == vb);
    }

    TEST_CASE("Kato iteration") {
        const GridPtr g = build_grid(512, 30.0, 2.0);
        const PhysicalParams p = PhysicalParams::make(1.0, 2.0 * kPi);
        NonlinearConfig cfg;
        cfg.mode = NonlinearMode::kato;
        cfg.k_max = 2;

        const KatoResult z = kato_solve(init_stokes(ModeDecomposition::zeros(g, 2), p), cfg, 0.5, 0.05);
        CHECK(z.diagnostics.converged);
        CHECK(z.diagnostics.iterations == 0);
        CHECK(z.diagnostics.G_n[0] == 0.0);

        const StokesState s0 = init_stokes(mixed_data(g, 2, 0.02), p);
        const KatoResult k = kato_solve(s0, cfg, 0.5, 0.05);
        const KatoDiagnostics& dg = k.diagnostics;
        CHECK(dg.converged);
        CHECK(dg.iterations <= 8);
        for (double r : dg.contraction_ratios) CHECK(r < 0.5);
        for (std::size_t n = 1; n < dg.differences.size(); ++n) CHECK(dg.differences[n] < dg.differences[n - 1]);
        CHECK(dg.mu0_estimate >= dg.G_n[0]);
        CHECK(k.times.size() == k.series.size());

        // The fixed point agrees with a time-stepped solution to first order in dt.
        NonlinearConfig icfg = cfg;
        icfg.mode = NonlinearMode::imex;
        const StokesState v = evolve_ns(s0, icfg, 0.5, 0.05);
        const ModeDecomposition gap = k.series.back().axpby(1.0, -1.0, v.decomp);
        CHECK(std::sqrt(inner_product(gap, gap, p)) <= 0.05 * std::sqrt(inner_product(v.decomp, v.decomp, p)));
    }

    TEST_CASE("configuration and guards") {
        const GridPtr g = build_grid(256, 20.0, 2.0);
        const PhysicalParams p = PhysicalParams::make(1.0, 2.0);
        auto kind_of = [](auto&& f) {
            try {
                f();
            } catch (const Error& e) {
                return e.kind();
            }
            return std::string("none");
        };
        NonlinearConfig bad;
        bad.k_max = 0;
        CHECK(kind_of([&] { bad.validate(); }) == "config-invalid");
        bad.k_max = 4;
        bad.n_theta = 8;
        CHECK(kind_of([&] { bad.validate(); }) == "config-invalid");
        bad.n_theta = 0;
        bad.blowup_factor = 1.0;
        CHECK(kind_of([&] { bad.validate(); }) == "config-invalid");

        NonlinearConfig alias;
        alias.k_max = 4;
        alias.n_theta = 12;
        alias.dealias = false;
        CHECK(kind_of([&] { NonlinearOperator(g, p, alias).convection(mixed_data(g, 4, 1.0)); }) ==
              "resolution-insufficient");

        NonlinearConfig cfg;
        cfg.k_max = 2;
        const StokesState s0 = init_stokes(mixed_data(g, 2, 10.0), p);
        CHECK(kind_of([&] {
                  StokesState s = s0;
                  ImexStepper(s, cfg, 5.0).step(s);
              }) == "cfl-violated");
        NonlinearConfig kato = cfg;
        kato.mode = NonlinearMode::kato;
        CHECK(kind_of([&] { ImexStepper(s0, kato, 0.01); }) == "config-invalid");
        CHECK(kind_of([&] { kato_solve(s0, cfg, 1.0, 0.1); }) == "config-invalid");
        CHECK(kind_of([&] { tail_data(g, 0.9, 1.0, 2); }) == "invalid-argument");
    }

    TEST_CASE("tail data") {
        const GridPtr g = build_grid(1024, 100.0, 3.0);
        const ModeDecomposition d = tail_data(g, 1.5, 1.0, 2);
        const double gamma = 2.0 / 1.5 + 0.02;
        for (int i = 0; i < g->n_points; ++i) {
            const double r = g->r(i);
            if (r > 3.0 && r < 60.0) REQUIRE(d.W[i] == doctest::Approx(std::pow(r, -gamma)).epsilon(1e-12));
            if (r >= 80.0) REQUIRE(d.W[i] == 0.0);
        }
        CHECK(max_abs(d.psi_k[0]) > 0.0);
        CHECK(max_abs(d.Phi) > 0.0);
    }
}
