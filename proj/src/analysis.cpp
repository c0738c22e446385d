#include "diskflow/analysis.hpp"

#include <cmath>

namespace diskflow {

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& v, double t_min, double t_max,
                   bool log_correction) {
    if (t.size() != v.size()) throw Error("invalid-argument", "series lengths differ");
    if (!(t_min >= 1.0) || !(t_max > t_min)) throw Error("invalid-argument", "fit window must satisfy 1 <= t_min < t_max");
    std::vector<double> x, y;
    const double tol = 1e-9 * t_max;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_min - tol || t[i] > t_max + tol) continue;
        if (!(v[i] > 0.0)) throw Error("nonpositive-values", "decay fits need positive samples");
        double ly = std::log(v[i]);
        if (log_correction) {
            if (!(t[i] > 1.0)) throw Error("invalid-argument", "log correction needs t > 1");
            ly -= std::log(std::log(t[i]));
        }
        x.push_back(std::log(t[i]));
        y.push_back(ly);
    }
    if (x.size() < 8) throw Error("insufficient-samples", "need at least 8 samples in the fit window");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    DecayFit f;
    f.exponent = sxy / sxx;
    const double icpt = my - f.exponent * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (icpt + f.exponent * x[i]);
        ss += e * e;
    }
    f.residual = std::sqrt(ss / n);
    f.log_correction = log_correction;
    f.t_min = t_min;
    f.t_max = t_max;
    f.samples = static_cast<int>(x.size());
    return f;
}

namespace {

[[noreturn]] void out_of_range(const std::string& what) { throw Error("out-of-range", what); }

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

}  // namespace

ExpectedExponent expected_exponent(RateKind kind, double p, double q, Regime regime) {
    const bool long_t = regime == Regime::long_time;
    switch (kind) {
    case RateKind::semigroup:
        if (!(q >= 1.0) || std::isinf(q) || !(p >= q)) out_of_range("semigroup rate needs 1 <= q <= p <= inf");
        return {inv(p) - inv(q), false};
    case RateKind::gradient:
        if (!(q > 1.0) || std::isinf(p) || !(p >= q)) out_of_range("gradient rate needs 1 < q <= p < inf");
        if (!long_t) return {-0.5 + inv(p) - inv(q), false};
        if (p >= std::max(2.0, q)) return {-inv(q), false};
        out_of_range("long-time gradient rate needs p >= max(2, q)");
    case RateKind::div_forcing:
        if (!(q > 1.0) || std::isinf(p) || !(p >= q)) out_of_range("forcing rate needs 1 < q <= p < inf");
        if (q >= 2.0 || !long_t) return {-0.5 + inv(p) - inv(q), false};
        return {-1.0 + inv(p), false};
    case RateKind::ell_decay:
        if (!(q >= 2.0) || std::isinf(q)) out_of_range("translation-speed rate needs q in [2, inf)");
        return {-(0.5 + inv(q)), false};
    case RateKind::ns_diff: {
        if (!(q > 1.0 && q <= 2.0)) out_of_range("nonlinear correction rate needs q in (1, 2]");
        if (!(p >= 2.0) || std::isinf(p)) out_of_range("nonlinear correction rate needs p in [2, inf)");
        const double q43 = 4.0 / 3.0;
        if (std::abs(q - q43) <= 1e-12) return {-(1.0 - inv(p)), true};
        if (q < q43) return {-(1.0 - inv(p)), false};
        return {-(2.0 / q - 0.5 - inv(p)), false};
    }
    }
    out_of_range("unknown rate kind");
}

RateKind parse_rate_kind(const std::string& s) {
    if (s == "semigroup") return RateKind::semigroup;
    if (s == "gradient") return RateKind::gradient;
    if (s == "div_forcing" || s == "div-forcing") return RateKind::div_forcing;
    if (s == "ell_decay" || s == "ell-decay") return RateKind::ell_decay;
    if (s == "ns_diff" || s == "ns-diff") return RateKind::ns_diff;
    throw Error("invalid-argument", "unknown rate kind '" + s + "'");
}

std::string to_string(RateKind k) {
    switch (k) {
    case RateKind::semigroup: return "semigroup";
    case RateKind::gradient: return "gradient";
    case RateKind::div_forcing: return "div_forcing";
    case RateKind::ell_decay: return "ell_decay";
    case RateKind::ns_diff: return "ns_diff";
    }
    return "?";
}

ModeDecomposition with_k_max(const ModeDecomposition& d, int k_max) {
    ModeDecomposition r = ModeDecomposition::zeros(d.grid, k_max);
    r.W = d.W;
    r.Psi = d.Psi;
    r.Phi = d.Phi;
    for (int k = 2; k <= std::min(k_max, d.k_max); ++k) {
        r.psi_k[k - 2] = d.psi_k[k - 2];
        r.phi_k[k - 2] = d.phi_k[k - 2];
    }
    r.rigid = d.rigid;
    return r;
}

double profile_error(const ModeDecomposition& a, const ModeDecomposition& b, double p) {
    if (a.grid->nodes != b.grid->nodes) throw Error("grid-mismatch", "profiles live on different grids");
    const int k = std::max(a.k_max, b.k_max);
    const ModeDecomposition diff = with_k_max(a, k).axpby(1.0, -1.0, with_k_max(b, k));
    return fluid_lp_norm(diff, p);
}

double profile_error(const StokesState& state, const ModeDecomposition& reference, double p) {
    return profile_error(state.decomp, reference, p);
}

std::vector<double> geometric_times(double t0, double t_end, double rho) {
    if (!(t0 > 0.0) || !(rho > 1.0)) throw Error("invalid-argument", "need t0 > 0 and rho > 1");
    std::vector<double> out;
    for (int j = 0;; ++j) {
        const double t = t0 * std::pow(rho, j);
        if (t > t_end * (1.0 + 1e-12)) break;
        out.push_back(t);
    }
    return out;
}

}  // namespace diskflow
