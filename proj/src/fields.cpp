#include "diskflow/fields.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "gauss.hpp"

namespace diskflow {

namespace {

void check_same_grid(const GridPtr& a, const GridPtr& b) {
    if (a.get() != b.get() && (a->nodes != b->nodes))
        throw Error("grid-mismatch", "fields live on different grids");
}

struct TrigTable {
    std::vector<double> c, s;  // [k * n + j]
};

TrigTable trig_table(int k_max, int n) {
    TrigTable t;
    t.c.resize(static_cast<std::size_t>(k_max + 1) * n);
    t.s.resize(static_cast<std::size_t>(k_max + 1) * n);
    for (int k = 0; k <= k_max; ++k) {
        for (int j = 0; j < n; ++j) {
            const double th = 2.0 * kPi * static_cast<double>((static_cast<long>(k) * j) % n) / n;
            t.c[static_cast<std::size_t>(k) * n + j] = std::cos(th);
            t.s[static_cast<std::size_t>(k) * n + j] = std::sin(th);
        }
    }
    return t;
}

}  // namespace

ModeDecomposition ModeDecomposition::zeros(GridPtr grid, int k_max) {
    if (k_max < 1) throw Error("invalid-argument", "k_max must be at least 1");
    ModeDecomposition d;
    const auto n = static_cast<std::size_t>(grid->n_points);
    d.grid = std::move(grid);
    d.k_max = k_max;
    d.W.assign(n, 0.0);
    d.Psi.assign(n, 0.0);
    d.Phi.assign(n, 0.0);
    d.psi_k.assign(static_cast<std::size_t>(k_max - 1), std::vector<double>(n, 0.0));
    d.phi_k.assign(static_cast<std::size_t>(k_max - 1), std::vector<double>(n, 0.0));
    return d;
}

void ModeDecomposition::sync_rigid() {
    rigid.ell = {-Phi[0], Psi[0]};
    rigid.omega = W[0];
}

void ModeDecomposition::enforce_no_slip() {
    const auto& c = grid->d1[0].c;
    for (int k = 1; k <= k_max; ++k) {
        for (auto* prof : {&cos_profile(k), &sin_profile(k)}) {
            std::vector<double>& p = *prof;
            if (k == 1) {
                p[2] = ((1.0 - c[0]) * p[0] - c[1] * p[1]) / c[2];
            } else {
                p[0] = 0.0;
                p[2] = -c[1] * p[1] / c[2];
            }
        }
    }
    sync_rigid();
}

ModeDecomposition ModeDecomposition::axpby(double a, double b, const ModeDecomposition& o) const {
    check_same_grid(grid, o.grid);
    if (k_max != o.k_max) throw Error("invalid-argument", "k_max mismatch");
    ModeDecomposition r = *this;
    auto comb = [&](std::vector<double>& x, const std::vector<double>& y) {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = a * x[i] + b * y[i];
    };
    comb(r.W, o.W);
    comb(r.Psi, o.Psi);
    comb(r.Phi, o.Phi);
    for (std::size_t k = 0; k < r.psi_k.size(); ++k) {
        comb(r.psi_k[k], o.psi_k[k]);
        comb(r.phi_k[k], o.phi_k[k]);
    }
    for (int c = 0; c < 2; ++c) {
        r.rigid.ell[c] = a * rigid.ell[c] + b * o.rigid.ell[c];
        r.rigid.h[c] = a * rigid.h[c] + b * o.rigid.h[c];
    }
    r.rigid.omega = a * rigid.omega + b * o.rigid.omega;
    r.rigid.theta = a * rigid.theta + b * o.rigid.theta;
    return r;
}

PolarField PolarField::zeros(GridPtr grid, int n_theta) {
    PolarField f;
    const auto n = static_cast<std::size_t>(grid->n_points) * n_theta;
    f.grid = std::move(grid);
    f.n_theta = n_theta;
    f.v_r.assign(n, 0.0);
    f.v_theta.assign(n, 0.0);
    return f;
}

SpectralField SpectralField::zeros(GridPtr grid, int k_max) {
    SpectralField s;
    const auto n = static_cast<std::size_t>(grid->n_points);
    s.grid = std::move(grid);
    s.k_max = k_max;
    const std::vector<std::vector<double>> z(static_cast<std::size_t>(k_max + 1), std::vector<double>(n, 0.0));
    s.vr_c = s.vr_s = s.vt_c = s.vt_s = z;
    return s;
}

int default_n_theta(int k_max) {
    int n = 16;
    while (n < 4 * k_max + 4) n *= 2;
    return n;
}

SpectralField to_spectral(const ModeDecomposition& d) {
    const RadialGrid& g = *d.grid;
    SpectralField s = SpectralField::zeros(d.grid, d.k_max);
    s.vt_c[0] = d.W;
    for (int k = 1; k <= d.k_max; ++k) {
        const auto& pc = d.cos_profile(k);
        const auto& ps = d.sin_profile(k);
        for (int i = 0; i < g.n_points; ++i) {
            s.vr_s[k][i] = k * pc[i] / g.r(i);
            s.vr_c[k][i] = -k * ps[i] / g.r(i);
        }
        s.vt_c[k] = radial_derivative(g, pc);
        s.vt_s[k] = radial_derivative(g, ps);
    }
    s.ball_ell = d.rigid.ell;
    s.ball_omega = d.rigid.omega;
    return s;
}

PolarField synthesize(const SpectralField& s, int n_theta) {
    if (n_theta < 2 * s.k_max + 2) throw Error("insufficient-angular-resolution", "n_theta too small");
    PolarField f = PolarField::zeros(s.grid, n_theta);
    const TrigTable t = trig_table(s.k_max, n_theta);
    const int n = s.grid->n_points;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n_theta; ++j) {
            double vr = s.vr_c[0][i], vt = s.vt_c[0][i];
            for (int k = 1; k <= s.k_max; ++k) {
                const double c = t.c[static_cast<std::size_t>(k) * n_theta + j];
                const double sn = t.s[static_cast<std::size_t>(k) * n_theta + j];
                vr += s.vr_c[k][i] * c + s.vr_s[k][i] * sn;
                vt += s.vt_c[k][i] * c + s.vt_s[k][i] * sn;
            }
            f.vr(i, j) = vr;
            f.vt(i, j) = vt;
        }
    }
    f.ball_ell = s.ball_ell;
    f.ball_omega = s.ball_omega;
    return f;
}

SpectralField analyze(const PolarField& f, int k_max) {
    if (2 * k_max + 2 > f.n_theta) throw Error("insufficient-angular-resolution", "n_theta too small");
    SpectralField s = SpectralField::zeros(f.grid, k_max);
    const int N = f.n_theta;
    const TrigTable t = trig_table(k_max, N);
    const int n = f.grid->n_points;
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k <= k_max; ++k) {
            double rc = 0.0, rs = 0.0, tc = 0.0, ts = 0.0;
            for (int j = 0; j < N; ++j) {
                const double c = t.c[static_cast<std::size_t>(k) * N + j];
                const double sn = t.s[static_cast<std::size_t>(k) * N + j];
                rc += f.vr(i, j) * c;
                rs += f.vr(i, j) * sn;
                tc += f.vt(i, j) * c;
                ts += f.vt(i, j) * sn;
            }
            const double sc = (k == 0 ? 1.0 : 2.0) / N;
            s.vr_c[k][i] = sc * rc;
            s.vr_s[k][i] = sc * rs;
            s.vt_c[k][i] = sc * tc;
            s.vt_s[k][i] = sc * ts;
        }
    }
    s.ball_ell = f.ball_ell;
    s.ball_omega = f.ball_omega;
    return s;
}

ModeDecomposition decompose(const PolarField& field, const PhysicalParams& params, int k_max,
                            double div_tol) {
    params.validate();
    if (field.n_theta < 2 * k_max + 2)
        throw Error("insufficient-angular-resolution", "n_theta must be at least 2 k_max + 2");
    const SpectralField s = analyze(field, k_max);
    const RadialGrid& g = *field.grid;
    ModeDecomposition d = ModeDecomposition::zeros(field.grid, k_max);
    d.W = s.vt_c[0];
    double scale = 0.0, resid = 0.0;
    for (int i = 0; i < g.n_points; ++i) {
        scale = std::max({scale, std::abs(s.vt_c[0][i]), std::abs(s.vr_c[0][i])});
        resid = std::max(resid, std::abs(s.vr_c[0][i]));
    }
    for (int k = 1; k <= k_max; ++k) {
        auto& pc = d.cos_profile(k);
        auto& ps = d.sin_profile(k);
        for (int i = 0; i < g.n_points; ++i) {
            pc[i] = g.r(i) * s.vr_s[k][i] / k;
            ps[i] = -g.r(i) * s.vr_c[k][i] / k;
            scale = std::max({scale, std::abs(s.vr_s[k][i]), std::abs(s.vr_c[k][i]),
                              std::abs(s.vt_c[k][i]), std::abs(s.vt_s[k][i])});
        }
        const std::vector<double> dc = radial_derivative(g, pc);
        const std::vector<double> ds = radial_derivative(g, ps);
        for (int i = 0; i < g.n_points; ++i) {
            resid = std::max({resid, std::abs(dc[i] - s.vt_c[k][i]), std::abs(ds[i] - s.vt_s[k][i])});
        }
    }
    if (scale > 0.0 && resid > div_tol * scale)
        throw Error("not-divergence-free", "divergence residual " + std::to_string(resid / scale) +
                                               " exceeds tolerance");
    d.sync_rigid();
    return d;
}

PolarField reconstruct(const ModeDecomposition& d, int n_theta) {
    return synthesize(to_spectral(d), n_theta > 0 ? n_theta : default_n_theta(d.k_max));
}

RigidState extract_rigid(const ModeDecomposition& d) {
    RigidState r = d.rigid;
    r.ell = {-d.Phi[0], d.Psi[0]};
    r.omega = d.W[0];
    return r;
}

double inner_product(const ModeDecomposition& a, const ModeDecomposition& b, const PhysicalParams& p) {
    check_same_grid(a.grid, b.grid);
    const SpectralField sa = to_spectral(a);
    const SpectralField sb = to_spectral(b);
    const RadialGrid& g = *a.grid;
    const int kmin = std::min(a.k_max, b.k_max);
    double s = 0.0;
    for (int i = 0; i < g.n_points; ++i) {
        double v = 2.0 * kPi * (sa.vr_c[0][i] * sb.vr_c[0][i] + sa.vt_c[0][i] * sb.vt_c[0][i]);
        for (int k = 1; k <= kmin; ++k) {
            v += kPi * (sa.vr_c[k][i] * sb.vr_c[k][i] + sa.vr_s[k][i] * sb.vr_s[k][i] +
                        sa.vt_c[k][i] * sb.vt_c[k][i] + sa.vt_s[k][i] * sb.vt_s[k][i]);
        }
        s += g.quad_weights[i] * v;
    }
    s += p.m * (a.rigid.ell[0] * b.rigid.ell[0] + a.rigid.ell[1] * b.rigid.ell[1]);
    s += p.inertia * a.rigid.omega * b.rigid.omega;
    return s;
}

double inner_product(const PolarField& a, const PolarField& b, const PhysicalParams& p) {
    check_same_grid(a.grid, b.grid);
    if (a.n_theta != b.n_theta) throw Error("invalid-argument", "n_theta mismatch");
    const RadialGrid& g = *a.grid;
    const int N = a.n_theta;
    double s = 0.0;
    for (int i = 0; i < g.n_points; ++i) {
        double v = 0.0;
        for (int j = 0; j < N; ++j) v += a.vr(i, j) * b.vr(i, j) + a.vt(i, j) * b.vt(i, j);
        s += g.quad_weights[i] * v * 2.0 * kPi / N;
    }
    s += p.m * (a.ball_ell[0] * b.ball_ell[0] + a.ball_ell[1] * b.ball_ell[1]);
    s += p.inertia * a.ball_omega * b.ball_omega;
    return s;
}

double ball_lp_integral(const std::array<double, 2>& ell, double omega, double p) {
    const double l2 = ell[0] * ell[0] + ell[1] * ell[1];
    if (p == 2.0) return kPi * l2 + 0.5 * kPi * omega * omega;
    if (omega == 0.0) return kPi * std::pow(std::sqrt(l2), p);
    const auto [x, w] = detail::gauss_legendre(32);
    const int nt = 256;
    double s = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) {
        const double r = 0.5 * (x[a] + 1.0);
        double ring = 0.0;
        for (int j = 0; j < nt; ++j) {
            const double th = 2.0 * kPi * j / nt;
            const double vx = ell[0] - omega * r * std::sin(th);
            const double vy = ell[1] + omega * r * std::cos(th);
            ring += std::pow(vx * vx + vy * vy, 0.5 * p);
        }
        s += 0.5 * w[a] * r * ring * 2.0 * kPi / nt;
    }
    return s;
}

namespace {

double fluid_integral(const PolarField& f, double p, double* sup) {
    const RadialGrid& g = *f.grid;
    const int N = f.n_theta;
    double s = 0.0, mx = 0.0;
    for (int i = 0; i < g.n_points; ++i) {
        double v = 0.0;
        for (int j = 0; j < N; ++j) {
            const double m2 = f.vr(i, j) * f.vr(i, j) + f.vt(i, j) * f.vt(i, j);
            mx = std::max(mx, m2);
            if (!std::isinf(p)) v += (p == 2.0) ? m2 : std::pow(m2, 0.5 * p);
        }
        s += g.quad_weights[i] * v * 2.0 * kPi / N;
    }
    if (sup) *sup = std::sqrt(mx);
    return s;
}

}  // namespace

double weighted_field_norm(const RadialGrid& grid, const ModeDecomposition& d, double p,
                           const PhysicalParams& params) {
    if (grid.nodes != d.grid->nodes) throw Error("grid-mismatch", "decomposition lives on another grid");
    if (!(p >= 1.0)) throw Error("invalid-argument", "p must be at least 1");
    const PolarField f = reconstruct(d);
    double sup = 0.0;
    const double fl = fluid_integral(f, p, &sup);
    const auto& l = d.rigid.ell;
    if (std::isinf(p)) return std::max(sup, std::hypot(l[0], l[1]) + std::abs(d.rigid.omega));
    return std::pow(fl + params.m / kPi * ball_lp_integral(l, d.rigid.omega, p), 1.0 / p);
}

double fluid_lp_norm(const ModeDecomposition& d, double p) {
    if (!(p >= 1.0)) throw Error("invalid-argument", "p must be at least 1");
    const PolarField f = reconstruct(d);
    double sup = 0.0;
    const double fl = fluid_integral(f, p, &sup);
    return std::isinf(p) ? sup : std::pow(fl, 1.0 / p);
}

// ---------------------------------------------------------------------------
// Leray projection

struct LerayProjector::Channel {
    int k = 1;
    double ball_sign = 0.0;
    Eigen::SparseMatrix<double> E;      // full profile = E * free
    Eigen::SparseMatrix<double> Rt;     // (R E)^T
    Eigen::VectorXd weights;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

LerayProjector::LerayProjector(GridPtr grid, const PhysicalParams& params, int k_max)
    : grid_(std::move(grid)), params_(params), k_max_(k_max) {
    if (k_max < 1) throw Error("invalid-argument", "k_max must be at least 1");
    params_.validate();
    const RadialGrid& g = *grid_;
    const int n = g.n_points;
    const auto& c = g.d1[0].c;
    for (int k = 1; k <= k_max; ++k) {
        for (int channel = 0; channel < 2; ++channel) {
            auto ch = std::make_shared<Channel>();
            ch->k = k;
            const double sr = channel == 0 ? 1.0 : -1.0;
            const bool ball = (k == 1);
            ch->ball_sign = ball ? sr : 0.0;
            const int rows = 2 * n + (ball ? 1 : 0);

            std::vector<int> free_of(n, -1);
            int nf = 0;
            for (int i = 0; i < n; ++i) {
                if (i == 2 || (k >= 2 && i == 0)) continue;
                free_of[i] = nf++;
            }
            std::vector<Eigen::Triplet<double>> te;
            for (int i = 0; i < n; ++i)
                if (free_of[i] >= 0) te.emplace_back(i, free_of[i], 1.0);
            if (k == 1) te.emplace_back(2, free_of[0], (1.0 - c[0]) / c[2]);
            te.emplace_back(2, free_of[1], -c[1] / c[2]);
            ch->E.resize(n, nf);
            ch->E.setFromTriplets(te.begin(), te.end());

            std::vector<Eigen::Triplet<double>> tr;
            ch->weights.resize(rows);
            for (int i = 0; i < n; ++i) {
                tr.emplace_back(i, i, sr * k / g.r(i));
                const Stencil& s = g.d1[i];
                for (int j = 0; j < 3; ++j) tr.emplace_back(n + i, s.offset + j, s.c[j]);
                ch->weights[i] = kPi * g.quad_weights[i];
                ch->weights[n + i] = kPi * g.quad_weights[i];
            }
            if (ball) {
                tr.emplace_back(2 * n, 0, ch->ball_sign);
                ch->weights[2 * n] = params_.m;
            }
            Eigen::SparseMatrix<double> R(rows, n);
            R.setFromTriplets(tr.begin(), tr.end());
            Eigen::SparseMatrix<double> Reff = R * ch->E;
            ch->Rt = Reff.transpose();
            Eigen::SparseMatrix<double> N = ch->Rt * ch->weights.asDiagonal() * Reff;
            ch->ldlt.compute(N);
            if (ch->ldlt.info() != Eigen::Success)
                throw Error("solver-failure", "projection normal equations are singular");
            (channel == 0 ? cos_ : sin_).push_back(ch);
        }
    }
}

std::vector<double> LerayProjector::project_channel(const Channel& ch, const std::vector<double>& vr,
                                                    const std::vector<double>& vt, double ball) const {
    const int n = grid_->n_points;
    Eigen::VectorXd t(ch.weights.size());
    for (int i = 0; i < n; ++i) {
        t[i] = vr[i];
        t[n + i] = vt[i];
    }
    if (ch.ball_sign != 0.0) t[2 * n] = ball;
    const Eigen::VectorXd b = ch.Rt * ch.weights.cwiseProduct(t);
    const Eigen::VectorXd x = ch.ldlt.solve(b);
    const Eigen::VectorXd full = ch.E * x;
    return std::vector<double>(full.data(), full.data() + n);
}

ModeDecomposition LerayProjector::project(const SpectralField& f) const {
    check_same_grid(grid_, f.grid);
    const RadialGrid& g = *grid_;
    const int n = g.n_points;
    ModeDecomposition d = ModeDecomposition::zeros(grid_, k_max_);
    d.W = f.vt_c[0];
    const double wf = 2.0 * kPi * g.quad_weights[0];
    d.W[0] = (wf * f.vt_c[0][0] + params_.inertia * f.ball_omega) / (wf + params_.inertia);
    const std::vector<double> zero(n, 0.0);
    for (int k = 1; k <= k_max_; ++k) {
        const bool have = k <= f.k_max;
        d.cos_profile(k) = project_channel(*cos_[k - 1], have ? f.vr_s[k] : zero,
                                           have ? f.vt_c[k] : zero, f.ball_ell[1]);
        d.sin_profile(k) = project_channel(*sin_[k - 1], have ? f.vr_c[k] : zero,
                                           have ? f.vt_s[k] : zero, f.ball_ell[0]);
    }
    d.sync_rigid();
    return d;
}

ModeDecomposition LerayProjector::project(const PolarField& f) const {
    const int k = std::min(k_max_, f.n_theta / 2 - 1);
    return project(analyze(f, k));
}

ModeDecomposition project_leray(const PolarField& field, const PhysicalParams& params, int k_max) {
    const int k = k_max > 0 ? k_max : std::max(1, field.n_theta / 4 - 1);
    return LerayProjector(field.grid, params, k).project(field);
}

ModeDecomposition kirchhoff_test_field(GridPtr grid, int direction, int k_max) {
    if (direction != 1 && direction != 2) throw Error("invalid-argument", "direction must be 1 or 2");
    ModeDecomposition d = ModeDecomposition::zeros(grid, k_max);
    const RadialGrid& g = *grid;
    for (int i = 0; i < g.n_points; ++i) {
        if (direction == 1) d.Phi[i] = 1.0 / g.r(i);
        else d.Psi[i] = -1.0 / g.r(i);
    }
    d.sync_rigid();
    return d;
}

AddedMassPairing added_mass_pairing(const ModeDecomposition& d, int direction) {
    if (direction != 1 && direction != 2) throw Error("invalid-argument", "direction must be 1 or 2");
    const RadialGrid& g = *d.grid;
    const std::vector<double>& prof = direction == 1 ? d.Phi : d.Psi;
    // direction 1: integrand over theta is -(pi/r)(Phi' - Phi/r); direction 2: (pi/r)(Psi' - Psi/r).
    const double sgn = direction == 1 ? -1.0 : 1.0;
    const auto [x, w] = detail::gauss_legendre(4);
    double fluid = 0.0;
    for (int i = 0; i + 1 < g.n_points; ++i) {
        const double a = g.r(i), b = g.r(i + 1), h = b - a;
        const double slope = (prof[i + 1] - prof[i]) / h;
        double s = 0.0;
        for (std::size_t q = 0; q < x.size(); ++q) {
            const double r = a + 0.5 * h * (x[q] + 1.0);
            const double val = prof[i] + slope * (r - a);
            s += w[q] * (slope - val / r) / r;
        }
        fluid += sgn * kPi * 0.5 * h * s;
    }
    const int last = g.n_points - 1;
    AddedMassPairing out;
    out.fluid = fluid;
    out.outer_boundary = sgn * kPi * prof[last] / g.r(last);
    out.expected = -kPi * (direction == 1 ? d.rigid.ell[0] : d.rigid.ell[1]);
    const double err = std::abs(out.fluid - out.outer_boundary - out.expected);
    out.relative_error = std::abs(out.expected) > 0.0 ? err / std::abs(out.expected) : err;
    return out;
}

// ---------------------------------------------------------------------------
// Field files

void write_field_file(const std::string& path, const ModeDecomposition& d, const std::string& header_comment) {
    std::ofstream os(path);
    if (!os) throw Error("io-error", "cannot open " + path);
    os << std::setprecision(17) << std::scientific;
    if (!header_comment.empty()) {
        std::istringstream hs(header_comment);
        std::string line;
        while (std::getline(hs, line)) os << "# " << line << '\n';
    }
    os << "# ell_x ell_y omega = " << d.rigid.ell[0] << ' ' << d.rigid.ell[1] << ' ' << d.rigid.omega << '\n';
    os << "r, W, Psi, Phi";
    for (int k = 2; k <= d.k_max; ++k) os << ", psi_" << k << ", phi_" << k;
    os << '\n';
    const RadialGrid& g = *d.grid;
    for (int i = 0; i < g.n_points; ++i) {
        os << g.r(i) << ", " << d.W[i] << ", " << d.Psi[i] << ", " << d.Phi[i];
        for (int k = 2; k <= d.k_max; ++k) os << ", " << d.psi_k[k - 2][i] << ", " << d.phi_k[k - 2][i];
        os << '\n';
    }
}

ModeDecomposition read_field_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("io-error", "cannot open " + path);
    std::string line;
    std::array<double, 3> rigid{0.0, 0.0, 0.0};
    bool have_rigid = false;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    const std::string tag = "# ell_x ell_y omega";
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.compare(0, tag.size(), tag) == 0) {
                const auto eq = line.find('=');
                std::istringstream vs(line.substr(eq == std::string::npos ? tag.size() : eq + 1));
                if (!(vs >> rigid[0] >> rigid[1] >> rigid[2]))
                    throw Error("parse-error", "malformed rigid-data line");
                have_rigid = true;
            }
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            const auto b = cell.find_first_not_of(" \t");
            const auto e = cell.find_last_not_of(" \t\r");
            cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
        }
        if (columns.empty()) {
            columns = cells;
            if (columns.size() < 4 || columns[0] != "r" || columns[1] != "W" || columns[2] != "Psi" ||
                columns[3] != "Phi" || columns.size() % 2 != 0)
                throw Error("parse-error", "unexpected header in " + path);
            continue;
        }
        if (cells.size() != columns.size()) throw Error("parse-error", "row width mismatch in " + path);
        std::vector<double> row;
        for (const auto& c : cells) row.push_back(std::stod(c));
        rows.push_back(std::move(row));
    }
    if (rows.size() < 3) throw Error("parse-error", "field file has too few rows");
    std::vector<double> nodes;
    for (const auto& r : rows) nodes.push_back(r[0]);
    GridPtr grid = grid_from_nodes(nodes);
    const int k_max = static_cast<int>(columns.size() - 4) / 2 + 1;
    ModeDecomposition d = ModeDecomposition::zeros(grid, k_max);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        d.W[i] = rows[i][1];
        d.Psi[i] = rows[i][2];
        d.Phi[i] = rows[i][3];
        for (int k = 2; k <= k_max; ++k) {
            d.psi_k[k - 2][i] = rows[i][4 + 2 * (k - 2)];
            d.phi_k[k - 2][i] = rows[i][5 + 2 * (k - 2)];
        }
    }
    d.sync_rigid();
    if (have_rigid) {
        d.rigid.ell = {rigid[0], rigid[1]};
        d.rigid.omega = rigid[2];
    }
    return d;
}

}  // namespace diskflow
