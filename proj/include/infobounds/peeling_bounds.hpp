#pragma once

// Closed-form evaluators for the time-uniform deviation bounds on
//
//     P( exists t <= n : t * I(Xbar_t; mu) >= delta )
//
// and their variants (anytime, Hoeffding, multinomial, discounted), plus the
// inverse map from a risk level alpha to a threshold delta. All logarithms are
// natural.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "infobounds/errors.hpp"

namespace infobounds {

enum class BoundKind {
    Thm1,           // 2e ceil(delta log n) exp(-delta)
    Thm1Eta,        // 2 ceil(log n / log(1+eta)) exp(-delta / (1+eta))
    Thm2,           // 2 ceil(log n / log(1+eta)) exp(-(1 - eta^2/8) delta), log-concave rate
    Thm2Opt,        // 2 sqrt(e) ceil(sqrt(delta)/2 log n) exp(-delta)
    Subgaussian,    // 2 ceil(log n / log(1+eta)) exp(-(1 - eta^2/16) delta), quadratic rate
    Thm3,           // anytime: 2 e c delta^c / (c-1) exp(-delta)
    Thm3Opt,        // anytime, c = 1 + 1/log(delta): 2 e^2 delta exp(-delta)
    HoeffdingSN,    // 4e ceil(delta^2 log n) exp(-2 delta^2)
    Multinomial,    // 2e (delta log n + |A|) exp(-delta / |A|)
    Discounted,     // ceil(log nu / log(1+eta)) exp(-(2 delta^2 / B^2)(1 - eta^2/16))
    UnionBaseline,  // 2 n exp(-delta)
};

inline constexpr BoundKind kAllBoundKinds[] = {
    BoundKind::Thm1,        BoundKind::Thm1Eta,     BoundKind::Thm2,        BoundKind::Thm2Opt,
    BoundKind::Subgaussian, BoundKind::Thm3,        BoundKind::Thm3Opt,     BoundKind::HoeffdingSN,
    BoundKind::Multinomial, BoundKind::Discounted,  BoundKind::UnionBaseline,
};

inline std::string_view to_string(BoundKind k) {
    switch (k) {
    case BoundKind::Thm1: return "thm1";
    case BoundKind::Thm1Eta: return "thm1_eta";
    case BoundKind::Thm2: return "thm2";
    case BoundKind::Thm2Opt: return "thm2_opt";
    case BoundKind::Subgaussian: return "subgaussian";
    case BoundKind::Thm3: return "thm3";
    case BoundKind::Thm3Opt: return "thm3_opt";
    case BoundKind::HoeffdingSN: return "hoeffding_sn";
    case BoundKind::Multinomial: return "multinomial";
    case BoundKind::Discounted: return "discounted";
    case BoundKind::UnionBaseline: return "union";
    }
    return "?";
}

inline std::optional<BoundKind> bound_kind_from_string(std::string_view s) {
    for (BoundKind k : kAllBoundKinds)
        if (to_string(k) == s) return k;
    return std::nullopt;
}

/// Bounds indexed by a horizon-free time (no n).
inline bool is_anytime(BoundKind k) { return k == BoundKind::Thm3 || k == BoundKind::Thm3Opt; }

struct BoundQuery {
    BoundKind kind = BoundKind::Thm1;
    double delta = 1.0;
    std::uint64_t n = 1;
    double eta = 1.0;              // Thm1Eta, Thm2, Subgaussian, Discounted
    double c = 2.0;                // Thm3
    std::size_t alphabet_size = 2; // Multinomial
    double gamma = 0.99;           // Discounted
    double range_b = 1.0;          // Discounted

    void validate() const {
        auto fail = [this](const std::string& msg) {
            throw ConfigError(std::string(to_string(kind)) + ": " + msg);
        };
        if (std::isnan(delta) || delta < 0.0) fail("delta must be >= 0");
        if (!is_anytime(kind) && n < 1) fail("n must be >= 1");
        switch (kind) {
        case BoundKind::Thm1Eta:
        case BoundKind::Thm2:
        case BoundKind::Subgaussian:
            if (!(eta > 0.0) || !std::isfinite(eta)) fail("eta must be > 0");
            break;
        case BoundKind::Thm3:
            if (!(c > 1.0) || !std::isfinite(c)) fail("c must be > 1");
            [[fallthrough]];
        case BoundKind::Thm3Opt:
            if (!(delta > 1.0)) fail("delta must be > 1");
            break;
        case BoundKind::Multinomial:
            if (alphabet_size < 2) fail("alphabet size must be >= 2");
            break;
        case BoundKind::Discounted:
            if (!(gamma > 0.0 && gamma < 1.0)) fail("gamma must lie in (0,1)");
            if (!(range_b > 0.0) || !std::isfinite(range_b)) fail("B must be > 0");
            if (!(eta > 0.0 && eta < 4.0)) fail("eta must lie in (0,4)");
            break;
        default: break;
        }
    }
};

/// A probability bound as produced by a formula. `raw` may exceed 1.
struct BoundValue {
    double raw = 0.0;
    double clamped = 0.0;
    bool vacuous = false;

    static BoundValue from_raw(double r) { return {r, std::min(r, 1.0), r >= 1.0}; }
};

/// nu_gamma(n) = sum_{t=1}^n gamma^{n-t} = (1 - gamma^n) / (1 - gamma).
inline double discount_mass(double gamma, std::uint64_t n) {
    return -std::expm1(static_cast<double>(n) * std::log(gamma)) / (1.0 - gamma);
}

namespace detail {

inline constexpr double kE = 2.718281828459045235360287471352662498;

// Number of peeling slices; a horizon always needs at least one.
inline double slices(double x) { return std::max(1.0, std::ceil(x)); }

inline double raw_bound(const BoundQuery& q) {
    const double d = q.delta;
    if (std::isinf(d)) return 0.0;
    const double logn = std::log(static_cast<double>(q.n));
    // A single time point is the Cramer-Chernoff bound, whatever the slicing.
    const bool single = q.n == 1;
    switch (q.kind) {
    case BoundKind::Thm1:
        if (single) return 2.0 * std::exp(-d);
        return 2.0 * kE * slices(d * logn) * std::exp(-d);
    case BoundKind::Thm1Eta:
        if (single) return 2.0 * std::exp(-d);
        return 2.0 * slices(logn / std::log1p(q.eta)) * std::exp(-d / (1.0 + q.eta));
    case BoundKind::Thm2:
        if (single) return 2.0 * std::exp(-d);
        return 2.0 * slices(logn / std::log1p(q.eta)) * std::exp(-(1.0 - q.eta * q.eta / 8.0) * d);
    case BoundKind::Thm2Opt:
        if (single) return 2.0 * std::exp(-d);
        return 2.0 * std::sqrt(kE) * slices(0.5 * std::sqrt(d) * logn) * std::exp(-d);
    case BoundKind::Subgaussian:
        if (single) return 2.0 * std::exp(-d);
        return 2.0 * slices(logn / std::log1p(q.eta)) * std::exp(-(1.0 - q.eta * q.eta / 16.0) * d);
    case BoundKind::Thm3:
        return 2.0 * kE * q.c * std::exp(q.c * std::log(d) - d) / (q.c - 1.0);
    case BoundKind::Thm3Opt:
        return 2.0 * kE * kE * d * std::exp(-d);
    case BoundKind::HoeffdingSN:
        if (single) return 2.0 * std::exp(-2.0 * d * d);
        return 4.0 * kE * slices(d * d * logn) * std::exp(-2.0 * d * d);
    case BoundKind::Multinomial: {
        const double a = static_cast<double>(q.alphabet_size);
        return 2.0 * kE * (d * logn + a) * std::exp(-d / a);
    }
    case BoundKind::Discounted: {
        const double nu = discount_mass(q.gamma, q.n);
        const double b2 = q.range_b * q.range_b;
        return slices(std::log(nu) / std::log1p(q.eta)) *
               std::exp(-(2.0 * d * d / b2) * (1.0 - q.eta * q.eta / 16.0));
    }
    case BoundKind::UnionBaseline:
        return static_cast<double>(q.n) * 2.0 * std::exp(-d);
    }
    return 1.0;
}

} // namespace detail

inline BoundValue evaluate(const BoundQuery& q) {
    q.validate();
    return BoundValue::from_raw(detail::raw_bound(q));
}

inline BoundValue bound_thm1(double delta, std::uint64_t n) {
    return evaluate({.kind = BoundKind::Thm1, .delta = delta, .n = n});
}

/// The eta-parameterized form that the peeling argument produces before eta
/// is optimized. Read off the last step of the slicing argument rather than a
/// displayed statement.
inline BoundValue bound_thm1_eta(double delta, std::uint64_t n, double eta) {
    return evaluate({.kind = BoundKind::Thm1Eta, .delta = delta, .n = n, .eta = eta});
}

/// Valid when I(.; mu) is log-concave. Not checked: the caller asserts it.
inline BoundValue bound_thm2(double delta, std::uint64_t n, double eta) {
    return evaluate({.kind = BoundKind::Thm2, .delta = delta, .n = n, .eta = eta});
}

/// Log-concave case with eta = 2 / sqrt(delta).
inline BoundValue bound_thm2_opt(double delta, std::uint64_t n) {
    return evaluate({.kind = BoundKind::Thm2Opt, .delta = delta, .n = n});
}

inline BoundValue bound_subgaussian(double delta, std::uint64_t n, double eta) {
    return evaluate({.kind = BoundKind::Subgaussian, .delta = delta, .n = n, .eta = eta});
}

inline BoundValue bound_hoeffding_sn(double delta, std::uint64_t n) {
    return evaluate({.kind = BoundKind::HoeffdingSN, .delta = delta, .n = n});
}

inline BoundValue bound_multinomial(double delta, std::uint64_t n, std::size_t alphabet_size) {
    return evaluate({.kind = BoundKind::Multinomial, .delta = delta, .n = n, .alphabet_size = alphabet_size});
}

inline BoundValue bound_discounted(double delta, double gamma, std::uint64_t n, double range_b, double eta) {
    return evaluate({.kind = BoundKind::Discounted, .delta = delta, .n = n, .eta = eta,
                     .gamma = gamma, .range_b = range_b});
}

inline BoundValue bound_union_baseline(double delta, std::uint64_t n) {
    return evaluate({.kind = BoundKind::UnionBaseline, .delta = delta, .n = n});
}

/// Time-dependent threshold delta c / (delta - 1) * log log t + delta of the
/// anytime bound. Only defined for t >= 3, where log log t > 0.
struct AnytimeThreshold {
    double coefficient = 0.0;
    double delta = 0.0;

    std::optional<double> operator()(double t) const {
        if (!(t >= 3.0)) return std::nullopt;
        return coefficient * std::log(std::log(t)) + delta;
    }
};

struct AnytimeBound {
    AnytimeThreshold threshold;
    BoundValue bound;
};

inline AnytimeBound bound_thm3(double delta, double c) {
    BoundQuery q{.kind = BoundKind::Thm3, .delta = delta, .c = c};
    const BoundValue v = evaluate(q);
    return {{delta * c / (delta - 1.0), delta}, v};
}

/// c = 1 + 1/log(delta); the probability bound is the simplified 2 e^2 delta e^-delta.
inline AnytimeBound bound_thm3_opt(double delta) {
    BoundQuery q{.kind = BoundKind::Thm3Opt, .delta = delta};
    const BoundValue v = evaluate(q);
    const double ld = std::log(delta);
    return {{delta * (1.0 + ld) / ((delta - 1.0) * ld), delta}, v};
}

inline AnytimeThreshold anytime_threshold(const BoundQuery& q) {
    return q.kind == BoundKind::Thm3 ? bound_thm3(q.delta, q.c).threshold : bound_thm3_opt(q.delta).threshold;
}

/// Smooth majorant of the bound with every ceiling ceil(x) replaced by x + 1,
/// in log scale. Parameters other than delta are taken from `q`.
inline double log_envelope(const BoundQuery& q, double delta) {
    using detail::kE;
    const double logn = is_anytime(q.kind) ? 0.0 : std::log(static_cast<double>(q.n));
    const double d = delta;
    switch (q.kind) {
    case BoundKind::Thm1: return std::log(2.0 * kE * (d * logn + 1.0)) - d;
    case BoundKind::Thm1Eta:
        return std::log(2.0 * (logn / std::log1p(q.eta) + 1.0)) - d / (1.0 + q.eta);
    case BoundKind::Thm2:
        return std::log(2.0 * (logn / std::log1p(q.eta) + 1.0)) - (1.0 - q.eta * q.eta / 8.0) * d;
    case BoundKind::Thm2Opt: return std::log(2.0 * std::sqrt(kE) * (0.5 * std::sqrt(d) * logn + 1.0)) - d;
    case BoundKind::Subgaussian:
        return std::log(2.0 * (logn / std::log1p(q.eta) + 1.0)) - (1.0 - q.eta * q.eta / 16.0) * d;
    case BoundKind::Thm3: return std::log(2.0 * kE * q.c / (q.c - 1.0)) + q.c * std::log(d) - d;
    case BoundKind::Thm3Opt: return std::log(2.0 * kE * kE * d) - d;
    case BoundKind::HoeffdingSN: return std::log(4.0 * kE * (d * d * logn + 1.0)) - 2.0 * d * d;
    case BoundKind::Multinomial: {
        const double a = static_cast<double>(q.alphabet_size);
        return std::log(2.0 * kE * (d * logn + a)) - d / a;
    }
    case BoundKind::Discounted: {
        const double nu = discount_mass(q.gamma, q.n);
        const double b2 = q.range_b * q.range_b;
        return std::log(std::log(nu) / std::log1p(q.eta) + 1.0) -
               (2.0 * d * d / b2) * (1.0 - q.eta * q.eta / 16.0);
    }
    case BoundKind::UnionBaseline: return std::log(2.0 * static_cast<double>(q.n)) - d;
    }
    return 0.0;
}

inline double envelope(const BoundQuery& q, double delta) { return std::exp(log_envelope(q, delta)); }

namespace detail {

// Coefficient of delta (or delta^2) in the exponent; <= 0 means the bound
// never decays.
inline double decay_rate(const BoundQuery& q) {
    switch (q.kind) {
    case BoundKind::Thm2: return 1.0 - q.eta * q.eta / 8.0;
    case BoundKind::Subgaussian:
    case BoundKind::Discounted: return 1.0 - q.eta * q.eta / 16.0;
    default: return 1.0;
    }
}

} // namespace detail

/// Smallest delta on the decreasing branch of the smooth envelope with
/// envelope(delta) <= alpha. Since every ceiling is majorized, the bound
/// evaluated at the returned delta is <= alpha as well.
inline double calibrate_delta(BoundQuery q, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("calibrate: alpha must lie in (0,1)");
    // Only the shape parameters matter; a placeholder delta keeps validation meaningful.
    q.delta = 2.0;
    q.validate();

    const double delta_min = is_anytime(q.kind) ? std::nextafter(1.0, 2.0) : 1.0;
    const double log_alpha = std::log(alpha);
    const auto f = [&q](double d) { return log_envelope(q, d); };

    if (detail::decay_rate(q) <= 0.0) {
        std::ostringstream os;
        os << to_string(q.kind) << ": envelope does not decrease in delta for these parameters";
        throw CalibrationError(os.str(), std::min(1.0, std::exp(f(delta_min))));
    }

    // Upper bracket on the decreasing branch.
    double hi = 2.0 * delta_min;
    while (!(f(hi) <= log_alpha && f(hi * (1.0 + 1e-6)) < f(hi))) {
        hi *= 2.0;
        if (hi > 1e9) throw CalibrationError("calibrate: alpha not reachable in floating point", 0.0);
    }

    // Mode of the (unimodal) envelope on [delta_min, hi], by golden section.
    const double inv_phi = 0.6180339887498949;
    double a = delta_min, b = hi;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && b - a > 1e-12 * b; ++it) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + inv_phi * (b - a); f2 = f(x2);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - inv_phi * (b - a); f1 = f(x1);
        }
    }
    double mode = 0.5 * (a + b);
    if (f(delta_min) >= f(mode)) mode = delta_min;
    if (f(mode) <= log_alpha) return mode;

    double lo = mode;
    for (int it = 0; it < 300 && hi - lo > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) <= log_alpha) hi = mid; else lo = mid;
    }
    return hi;
}

} // namespace infobounds
