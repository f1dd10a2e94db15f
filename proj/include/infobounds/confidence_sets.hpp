#pragma once

// Informational confidence sets {mu : N * I(Xbar; mu) <= delta} and their
// exponential-family and multinomial (Sanov-type) counterparts.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "infobounds/errors.hpp"
#include "infobounds/estimators.hpp"
#include "infobounds/peeling_bounds.hpp"
#include "infobounds/rate_functions.hpp"

namespace infobounds {

/// One edge of a confidence set. `clipped` is set when the edge is the boundary
/// of the mean domain (or the last representable point before it) rather than
/// a root of N * I(Xbar; .) = delta.
struct Endpoint {
    double value = 0.0;
    bool clipped = false;
};

struct RiskCertificate {
    BoundKind kind = BoundKind::Thm1;
    std::uint64_t horizon = 1;
    double alpha = 0.0;
    BoundValue bound;  // forward bound at the calibrated delta, <= alpha
};

struct ConfidenceSet {
    double lower = 0.0;
    double upper = 0.0;
    bool lower_clipped = false;
    bool upper_clipped = false;
    double xbar = 0.0;
    double delta = 0.0;
    std::uint64_t count = 0;
    RateFamily family = RateFamily::bernoulli();
    std::optional<RiskCertificate> certificate;

    bool contains(double mu) const { return mu >= lower && mu <= upper; }
    double width() const { return upper - lower; }
};

namespace detail {

inline constexpr int kBisectionCap = 200;
inline constexpr double kRateResidualTol = 1e-9;

// Boundary between the region where `inside(x)` holds (containing `in`) and
// the region beyond it towards `out`. `out` is never evaluated; the result is
// the outermost point found outside, or `out` itself if no probe was outside.
template <typename Pred>
double bisect_boundary(Pred inside, double in, double out) {
    for (int it = 0; it < kBisectionCap; ++it) {
        const double mid = 0.5 * (in + out);
        if (mid == in || mid == out) break;
        if (inside(mid)) in = mid; else out = mid;
    }
    return out;
}

// One side of {mu : count * rate(xbar; mu) <= delta}. direction = +1 for the
// upper edge, -1 for the lower edge.
inline Endpoint conf_edge(double xbar, std::uint64_t count, double delta, const RateFamily& family, int direction) {
    if (std::isnan(delta) || delta < 0.0) throw DomainError("confidence bound: delta must be >= 0");
    if (!family.mean_support().contains(xbar)) throw DomainError("confidence bound: xbar outside the family's domain");
    const Interval dom = family.mu_domain();
    const double edge = direction > 0 ? dom.hi : dom.lo;
    const bool edge_closed = direction > 0 ? dom.hi_closed : dom.lo_closed;

    if (count == 0) return {edge, true};
    if (delta == 0.0) return {xbar, !dom.contains(xbar)};

    const double n = static_cast<double>(count);
    const double target = delta / n;
    const auto inside = [&](double mu) { return rate(family, xbar, mu) <= target; };

    if (xbar == edge) return {edge, true};

    double out = edge;
    if (std::isfinite(edge)) {
        if (edge_closed && inside(edge)) return {edge, true};
    } else {
        double step = std::max(1.0, std::abs(xbar));
        out = xbar + direction * step;
        while (inside(out)) {
            step *= 2.0;
            out = xbar + direction * step;
            if (!std::isfinite(out)) return {edge, true};
        }
    }

    const double root = bisect_boundary(inside, xbar, out);
    if (root == edge && !edge_closed) return {edge, true};
    const double residual = std::abs(n * rate(family, xbar, root) - delta);
    return {root, !(residual <= kRateResidualTol)};
}

} // namespace detail

/// Largest mu >= xbar with count * I(xbar; mu) <= delta.
inline Endpoint upper_conf(double xbar, std::uint64_t count, double delta, const RateFamily& family) {
    return detail::conf_edge(xbar, count, delta, family, +1);
}

/// Smallest mu <= xbar with count * I(xbar; mu) <= delta.
inline Endpoint lower_conf(double xbar, std::uint64_t count, double delta, const RateFamily& family) {
    return detail::conf_edge(xbar, count, delta, family, -1);
}

inline ConfidenceSet confidence_interval(double xbar, std::uint64_t count, double delta, const RateFamily& family) {
    const Endpoint lo = lower_conf(xbar, count, delta, family);
    const Endpoint hi = upper_conf(xbar, count, delta, family);
    ConfidenceSet cs;
    cs.lower = lo.value;
    cs.upper = hi.value;
    cs.lower_clipped = lo.clipped;
    cs.upper_clipped = hi.clipped;
    cs.xbar = xbar;
    cs.delta = delta;
    cs.count = count;
    cs.family = family;
    return cs;
}

/// Interval whose threshold is calibrated so that the whole sequence of
/// intervals up to `bound.n` holds jointly with probability >= 1 - alpha.
/// `bound` selects the deviation bound and its shape parameters; its delta is ignored.
inline ConfidenceSet interval_with_certificate(double xbar, std::uint64_t count, double alpha,
                                               const RateFamily& family, BoundQuery bound) {
    const double delta = calibrate_delta(bound, alpha);
    bound.delta = delta;
    ConfidenceSet cs = confidence_interval(xbar, count, delta, family);
    cs.certificate = RiskCertificate{bound.kind, bound.n, alpha, evaluate(bound)};
    return cs;
}

struct ParameterInterval {
    double lower = 0.0;
    double upper = 0.0;
    bool lower_clipped = false;
    bool upper_clipped = false;
};

namespace detail {

inline double theta_of_mean(const ExpFamilyModel& model, double m) {
    if (model.mean_to_theta) return model.mean_to_theta(m);
    // mean is increasing: bracket and bisect.
    double lo = std::isfinite(model.theta_domain.lo) ? model.theta_domain.lo : -1.0;
    double hi = std::isfinite(model.theta_domain.hi) ? model.theta_domain.hi : 1.0;
    for (double s = 1.0; !std::isfinite(model.theta_domain.lo) && model.mean(lo) > m; s *= 2.0) lo = -s;
    for (double s = 1.0; !std::isfinite(model.theta_domain.hi) && model.mean(hi) < m; s *= 2.0) hi = s;
    return bisect_boundary([&](double t) { return model.mean(t) <= m; }, lo, hi);
}

inline std::pair<double, bool> theta_edge(const ExpFamilyModel& model, double beta, double target, int direction) {
    const double edge = direction > 0 ? model.theta_domain.hi : model.theta_domain.lo;
    const auto inside = [&](double th) { return bregman_kl(model, beta, th) <= target; };
    double out = edge;
    if (!std::isfinite(edge)) {
        double step = std::max(1.0, std::abs(beta));
        out = beta + direction * step;
        while (inside(out)) {
            step *= 2.0;
            out = beta + direction * step;
            if (!std::isfinite(out)) return {edge, true};
        }
    }
    const double root = bisect_boundary(inside, beta, out);
    return {root, root == edge};
}

} // namespace detail

/// {theta : KL(P_{mu^-1(xbar)}; P_theta) <= delta / count}, solved directly in
/// the natural parameter.
inline ParameterInterval exp_family_region(double xbar, std::uint64_t count, double delta, const ExpFamilyModel& model) {
    if (std::isnan(delta) || delta < 0.0) throw DomainError("exp_family_region: delta must be >= 0");
    if (count == 0) return {model.theta_domain.lo, model.theta_domain.hi, true, true};
    const double beta = detail::theta_of_mean(model, xbar);
    if (!std::isfinite(beta) || !model.theta_domain.contains(beta))
        throw DomainError("exp_family_region: xbar is not the mean of any P_theta");
    if (delta == 0.0) return {beta, beta, false, false};
    const double target = delta / static_cast<double>(count);
    const auto [lo, lo_clip] = detail::theta_edge(model, beta, target, -1);
    const auto [hi, hi_clip] = detail::theta_edge(model, beta, target, +1);
    return {lo, hi, lo_clip, hi_clip};
}

/// Full Kullback-Leibler divergence KL(P; Q) between distributions on a finite
/// alphabet; +inf when Q vanishes where P does not.
inline double kl_divergence(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size() || p.empty()) throw DomainError("kl_divergence: distributions over different alphabets");
    const auto check = [](std::span<const double> d) {
        double s = 0.0;
        for (double v : d) {
            if (!(v >= 0.0 && v <= 1.0)) throw DomainError("kl_divergence: entries must lie in [0,1]");
            s += v;
        }
        if (std::abs(s - 1.0) > 1e-9) throw DomainError("kl_divergence: entries must sum to 1");
    };
    check(p);
    check(q);
    double r = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a) {
        if (p[a] == 0.0) continue;
        if (q[a] == 0.0) return kInf;
        r += p[a] * std::log(p[a] / q[a]);
    }
    return std::max(r, 0.0);
}

/// KL ball {Q : KL(center; Q) <= delta / t} around an empirical law.
struct SimplexRegion {
    std::vector<double> center;
    double delta = 0.0;
    std::uint64_t t = 1;

    static SimplexRegion around(const EmpiricalDistribution& empirical, double delta) {
        if (std::isnan(delta) || delta < 0.0) throw DomainError("simplex region: delta must be >= 0");
        return {empirical.probabilities(), delta, empirical.total()};
    }

    double radius() const { return delta / static_cast<double>(t); }
    std::size_t alphabet_size() const { return center.size(); }
};

inline bool simplex_region_membership(const SimplexRegion& region, std::span<const double> q) {
    return kl_divergence(region.center, q) <= region.radius();
}

/// Per-symbol Bernoulli intervals at radius delta / (|A| t): the equal split of
/// the threshold used by the union bound over symbols.
inline std::vector<ConfidenceSet> marginal_intervals(const SimplexRegion& region) {
    std::vector<ConfidenceSet> out;
    out.reserve(region.alphabet_size());
    const double per_symbol = region.delta / static_cast<double>(region.alphabet_size());
    for (double p : region.center)
        out.push_back(confidence_interval(p, region.t, per_symbol, RateFamily::bernoulli()));
    return out;
}

} // namespace infobounds
