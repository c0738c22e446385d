#pragma once

#include <string>
#include <vector>

#include "diskflow/fields.hpp"
#include "diskflow/stokes.hpp"

namespace diskflow {

struct DecayFit {
    double exponent = 0.0;
    bool log_correction = false;
    double residual = 0.0;
    double t_min = 0.0;
    double t_max = 0.0;
    int samples = 0;
};

/// Least squares of log v (minus log log t when flagged) against log t on [t_min, t_max].
DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& v, double t_min, double t_max,
                   bool log_correction = false);

enum class RateKind { semigroup, gradient, div_forcing, ell_decay, ns_diff };
enum class Regime { short_time, long_time };

struct ExpectedExponent {
    double exponent = 0.0;
    bool log_corrected = false;
};

ExpectedExponent expected_exponent(RateKind kind, double p, double q, Regime regime = Regime::long_time);

RateKind parse_rate_kind(const std::string& s);
std::string to_string(RateKind k);

/// L^p(F_0) distance between the state's field and a reference decomposition.
double profile_error(const StokesState& state, const ModeDecomposition& reference, double p);
double profile_error(const ModeDecomposition& a, const ModeDecomposition& b, double p);

/// Copy of d with k_max raised (new modes zero) or lowered (modes dropped).
ModeDecomposition with_k_max(const ModeDecomposition& d, int k_max);

/// t0 * rho^j for j = 0, 1, ... while <= t_end.
std::vector<double> geometric_times(double t0, double t_end, double rho);

}  // namespace diskflow
