// Copyright 2026 LightChain Simulator Authors. Licensed under the Apache
// License, Version 2.0. http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include "lightchain/identifier.hpp"

namespace lightchain {

// The corollaries treat validator sampling as a binomial and bound its tail
// with the normal approximation; the quantile function below is the inverse
// of that normal CDF.

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

/// Standard normal quantile: Acklam's rational approximation refined by one
/// Newton step against the erfc-based CDF (absolute accuracy well under 1e-9).
inline double probit(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidParameter("probit: p must be in (0, 1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double err = normal_cdf(x) - p;
    double pdf = normal_pdf(x);
    if (pdf > 0.0) x -= err / pdf;
    return x;
}

// Ceil/floor with a small slack so that values landing a representation
// error away from an integer resolve to it.
inline double kSlack() { return 1e-12; }
inline long long ceil_slack(double x) { return static_cast<long long>(std::ceil(x - kSlack())); }
inline long long floor_slack(double x) { return static_cast<long long>(std::floor(x + kSlack())); }

/// Smallest Validators Threshold admitting any secure Signatures Threshold:
/// ceil((sqrt(f) + sqrt(f*z^2 + 4))^2 / (4(1 - f))), z = probit(1 - epsilon).
inline unsigned min_alpha(double f, double epsilon) {
    if (f < 0.0 || f >= 1.0) throw InvalidParameter("min_alpha: f must be in [0, 1)");
    double z = probit(1.0 - epsilon);
    double num = std::sqrt(f) + std::sqrt(f * z * z + 4.0);
    double val = num * num / (4.0 * (1.0 - f));
    long long a = ceil_slack(val);
    return a < 1 ? 1u : static_cast<unsigned>(a);
}

/// Integrity floor: t >= sqrt(alpha*f*(1-f)) * z + alpha*f + 1.
inline unsigned min_t_integrity(unsigned alpha, double f, double epsilon) {
    if (alpha < 1) throw InvalidParameter("min_t_integrity: alpha must be positive");
    if (f < 0.0 || f >= 1.0) throw InvalidParameter("min_t_integrity: f must be in [0, 1)");
    double z = probit(1.0 - epsilon);
    double a = static_cast<double>(alpha);
    double val = std::sqrt(a * f * (1.0 - f)) * z + a * f + 1.0;
    long long t = ceil_slack(val);
    return t < 1 ? 1u : static_cast<unsigned>(t);
}

/// Service-availability ceiling: t <= alpha*(1-f)*(1-q) / (f + (1-f)*(1-q)).
inline long long max_t_service(unsigned alpha, double f, double q) {
    if (alpha < 1) throw InvalidParameter("max_t_service: alpha must be positive");
    if (f < 0.0 || f >= 1.0) throw InvalidParameter("max_t_service: f must be in [0, 1)");
    if (q < 0.0 || q >= 1.0) throw InvalidParameter("max_t_service: q must be in [0, 1)");
    double denom = f + (1.0 - f) * (1.0 - q);
    if (denom <= 0.0) throw InvalidParameter("max_t_service: degenerate denominator");
    double val = static_cast<double>(alpha) * (1.0 - f) * (1.0 - q) / denom;
    return floor_slack(val);
}

/// Data-availability floor: t >= 1/(1-q) - 1, at least the owner's margin of 1.
inline unsigned min_t_replica(double q) {
    if (q < 0.0 || q >= 1.0) throw InvalidParameter("min_t_replica: q must be in [0, 1)");
    long long t = ceil_slack(1.0 / (1.0 - q) - 1.0);
    return t < 1 ? 1u : static_cast<unsigned>(t);
}

struct ThresholdReport {
    double f = 0.0;
    double q = 0.0;
    double epsilon = 0.0;
    unsigned alpha_min = 1;
    unsigned t_min_integrity = 1;   // at the reported alpha
    long long t_max_service = 0;    // at the reported alpha
    unsigned t_min_replica = 1;
    bool feasible = false;
    std::optional<std::pair<unsigned, unsigned>> chosen;  // (alpha, t)

    std::string to_text() const {
        std::ostringstream os;
        os << "f=" << f << '\n'
           << "q=" << q << '\n'
           << "epsilon=" << epsilon << '\n'
           << "alpha_min=" << alpha_min << '\n'
           << "t_min_integrity=" << t_min_integrity << '\n'
           << "t_max_service=" << t_max_service << '\n'
           << "t_min_replica=" << t_min_replica << '\n'
           << "feasible=" << (feasible ? 1 : 0) << '\n';
        if (chosen) os << "alpha=" << chosen->first << '\n' << "t=" << chosen->second << '\n';
        return os.str();
    }
};

/// Scans alpha upward from the closed-form minimum and reports the smallest
/// alpha admitting an integer t within the feasible band. The per-alpha
/// bounds in the report are taken at the chosen alpha, or at alpha_min when
/// no alpha works.
inline ThresholdReport solve(double f, double q, double epsilon, unsigned alpha_cap) {
    ThresholdReport rep;
    rep.f = f;
    rep.q = q;
    rep.epsilon = epsilon;
    rep.alpha_min = min_alpha(f, epsilon);
    rep.t_min_replica = min_t_replica(q);
    for (unsigned alpha = rep.alpha_min; alpha <= alpha_cap; ++alpha) {
        unsigned t_lo = std::max(min_t_integrity(alpha, f, epsilon), rep.t_min_replica);
        long long t_hi = max_t_service(alpha, f, q);
        if (static_cast<long long>(t_lo) <= t_hi) {
            rep.feasible = true;
            rep.chosen = {alpha, t_lo};
            rep.t_min_integrity = min_t_integrity(alpha, f, epsilon);
            rep.t_max_service = t_hi;
            return rep;
        }
    }
    rep.t_min_integrity = min_t_integrity(rep.alpha_min, f, epsilon);
    rep.t_max_service = max_t_service(rep.alpha_min, f, q);
    return rep;
}

}  // namespace lightchain
