#pragma once

// Rate functions I(x; mu) for the one-parameter families used by the
// self-normalized deviation bounds. I(.; mu) is the Legendre transform of the
// log-moment-generating function phi of an increment with mean mu:
//
//     I(x; mu) = sup_lambda { lambda * x - phi(lambda) }.
//
// Every closed form in this file satisfies that definition; +infinity is
// returned (as IEEE +inf, never a large finite sentinel) outside the interval
// where the rate is finite.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <string>

#include "infobounds/errors.hpp"

namespace infobounds {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Real interval with independently open or closed ends. Infinite ends are
/// always treated as open.
struct Interval {
    double lo = -kInf;
    double hi = kInf;
    bool lo_closed = false;
    bool hi_closed = false;

    static Interval open(double a, double b) { return {a, b, false, false}; }
    static Interval closed(double a, double b) { return {a, b, std::isfinite(a), std::isfinite(b)}; }
    static Interval real_line() { return {}; }

    bool contains(double x) const {
        if (std::isnan(x)) return false;
        const bool above = lo_closed ? x >= lo : x > lo;
        const bool below = hi_closed ? x <= hi : x < hi;
        return above && below;
    }
    bool contains_closure(double x) const { return !std::isnan(x) && x >= lo && x <= hi; }
    bool interior(double x) const { return !std::isnan(x) && x > lo && x < hi; }
};

enum class FamilyKind {
    Bernoulli,
    BoundedKL,
    Quadratic,
    Exponential,
    Poisson,
    GammaFixedShape,
    ExplicitPhi,
};

/// Log-moment-generating function psi of a *centered* increment: psi(0) = 0,
/// psi'(0) = 0. The family built from it is the location family
/// phi(lambda) = lambda * mu + psi(lambda), so that I(x; mu) = I_psi(x - mu).
struct CenteredLmgf {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    /// Optional. Estimated from `derivative` by central differences when empty.
    std::function<double(double)> second_derivative;
    double lambda_lo = -kInf;  // psi finite on ]lambda_lo, lambda_hi[
    double lambda_hi = kInf;
    /// Range of psi' over ]lambda_lo, lambda_hi[ (the support of the centered
    /// increment). The rate is finite exactly on this open interval.
    double deviation_lo = -kInf;
    double deviation_hi = kInf;
};

class RateFamily {
public:
    static RateFamily bernoulli() { return RateFamily(FamilyKind::Bernoulli); }
    /// Variables bounded in [0,1]: Hoeffding's domination by the Bernoulli lmgf.
    static RateFamily bounded_kl() { return RateFamily(FamilyKind::BoundedKL); }
    /// I(x; mu) = 2 (x - mu)^2 / K^2, i.e. phi(lambda) = lambda mu + K^2 lambda^2 / 8.
    static RateFamily quadratic(double range_k) {
        if (!(range_k > 0.0) || !std::isfinite(range_k))
            throw DomainError("quadratic family: range K must be positive and finite");
        RateFamily f(FamilyKind::Quadratic);
        f.param_ = range_k;
        return f;
    }
    static RateFamily exponential() { return RateFamily(FamilyKind::Exponential); }
    static RateFamily poisson() { return RateFamily(FamilyKind::Poisson); }
    /// Gamma(shape k, scale mu / k), parameterized by its mean mu.
    static RateFamily gamma_fixed_shape(double shape_k) {
        if (!(shape_k > 0.0) || !std::isfinite(shape_k))
            throw DomainError("gamma family: shape must be positive and finite");
        RateFamily f(FamilyKind::GammaFixedShape);
        f.param_ = shape_k;
        return f;
    }
    static RateFamily explicit_phi(CenteredLmgf psi) {
        if (!psi.value || !psi.derivative)
            throw DomainError("explicit phi: value and derivative are required");
        if (!(psi.lambda_lo < 0.0 && psi.lambda_hi > 0.0))
            throw DomainError("explicit phi: ]lambda_lo, lambda_hi[ must contain 0");
        if (!(psi.deviation_lo < 0.0 && psi.deviation_hi > 0.0))
            throw DomainError("explicit phi: deviation range must contain 0");
        RateFamily f(FamilyKind::ExplicitPhi);
        f.psi_ = std::make_shared<const CenteredLmgf>(std::move(psi));
        return f;
    }

    FamilyKind kind() const noexcept { return kind_; }
    double range_k() const noexcept { return param_; }
    double shape() const noexcept { return param_; }
    const CenteredLmgf* centered_lmgf() const noexcept { return psi_.get(); }

    bool is_bernoulli_like() const noexcept {
        return kind_ == FamilyKind::Bernoulli || kind_ == FamilyKind::BoundedKL;
    }

    /// Valid expectations mu.
    Interval mu_domain() const {
        switch (kind_) {
        case FamilyKind::Bernoulli:
        case FamilyKind::BoundedKL: return Interval::closed(0.0, 1.0);
        case FamilyKind::Exponential:
        case FamilyKind::Poisson:
        case FamilyKind::GammaFixedShape: return Interval::open(0.0, kInf);
        case FamilyKind::Quadratic:
        case FamilyKind::ExplicitPhi: return Interval::real_line();
        }
        return {};
    }

    /// Values an empirical mean can take (closure of the support).
    Interval mean_support() const {
        switch (kind_) {
        case FamilyKind::Bernoulli:
        case FamilyKind::BoundedKL: return Interval::closed(0.0, 1.0);
        case FamilyKind::Poisson: return Interval::closed(0.0, kInf);
        case FamilyKind::Exponential:
        case FamilyKind::GammaFixedShape: return Interval::open(0.0, kInf);
        case FamilyKind::Quadratic: return Interval::real_line();
        case FamilyKind::ExplicitPhi: return Interval::real_line();
        }
        return {};
    }

    /// Open interval (x-, x+) on which I(.; mu) is finite and smooth.
    Interval finite_rate_domain(double mu) const {
        switch (kind_) {
        case FamilyKind::Bernoulli:
        case FamilyKind::BoundedKL: return Interval::open(0.0, 1.0);
        case FamilyKind::Exponential:
        case FamilyKind::Poisson:
        case FamilyKind::GammaFixedShape: return Interval::open(0.0, kInf);
        case FamilyKind::Quadratic: return Interval::real_line();
        case FamilyKind::ExplicitPhi:
            return Interval::open(mu + psi_->deviation_lo, mu + psi_->deviation_hi);
        }
        return {};
    }

    std::string name() const {
        std::ostringstream os;
        switch (kind_) {
        case FamilyKind::Bernoulli: os << "bernoulli"; break;
        case FamilyKind::BoundedKL: os << "bounded_kl"; break;
        case FamilyKind::Quadratic: os << "quadratic(K=" << param_ << ")"; break;
        case FamilyKind::Exponential: os << "exponential"; break;
        case FamilyKind::Poisson: os << "poisson"; break;
        case FamilyKind::GammaFixedShape: os << "gamma(k=" << param_ << ")"; break;
        case FamilyKind::ExplicitPhi: os << "explicit_phi"; break;
        }
        return os.str();
    }

private:
    explicit RateFamily(FamilyKind k) : kind_(k) {}

    FamilyKind kind_;
    double param_ = 1.0;
    std::shared_ptr<const CenteredLmgf> psi_;
};

namespace detail {

inline void require_mu(const RateFamily& f, double mu) {
    if (!f.mu_domain().contains(mu)) {
        std::ostringstream os;
        os << f.name() << ": mu=" << mu << " outside the family's mean domain";
        throw DomainError(os.str());
    }
}

// r - 1 - log r, accurate near r = 1.
inline double exp_rate_ratio(double r) {
    const double u = r - 1.0;
    return std::max(0.0, u - std::log1p(u));
}

// Solves psi'(lambda) = target on ]lambda_lo, lambda_hi[ by Newton steps
// safeguarded by a shrinking bracket.
inline double solve_centered_lmgf(const CenteredLmgf& psi, double target) {
    if (target == 0.0) return 0.0;
    const auto d1 = [&](double l) { return psi.derivative(l) - target; };
    const auto d2 = [&](double l) {
        if (psi.second_derivative) return psi.second_derivative(l);
        const double h = 1e-6 * std::max(1.0, std::abs(l));
        return (psi.derivative(l + h) - psi.derivative(l - h)) / (2.0 * h);
    };

    // Bracket [a, b] with d1(a) < 0 < d1(b); psi' is increasing.
    double a = 0.0;
    double b = 0.0;
    if (target > 0.0) {
        double step = 1.0;
        b = std::isfinite(psi.lambda_hi) ? std::min(step, 0.5 * psi.lambda_hi) : step;
        while (d1(b) < 0.0) {
            a = b;
            step *= 2.0;
            b = std::isfinite(psi.lambda_hi) ? 0.5 * (b + psi.lambda_hi) : step;
            if (!std::isfinite(b) || b == a) throw DomainError("explicit phi: cannot bracket lambda(x)");
        }
    } else {
        double step = -1.0;
        a = std::isfinite(psi.lambda_lo) ? std::max(step, 0.5 * psi.lambda_lo) : step;
        while (d1(a) > 0.0) {
            b = a;
            step *= 2.0;
            a = std::isfinite(psi.lambda_lo) ? 0.5 * (a + psi.lambda_lo) : step;
            if (!std::isfinite(a) || b == a) throw DomainError("explicit phi: cannot bracket lambda(x)");
        }
    }

    double l = 0.5 * (a + b);
    for (int it = 0; it < 200; ++it) {
        const double g = d1(l);
        if (std::abs(g) <= 1e-12) return l;
        if (g < 0.0) a = l; else b = l;
        const double h = d2(l);
        double next = (h > 0.0 && std::isfinite(h)) ? l - g / h : 0.5 * (a + b);
        if (!(next > a && next < b)) next = 0.5 * (a + b);
        if (next == l) return l;
        l = next;
    }
    return l;
}

} // namespace detail

/// Binary relative entropy kl(p, q) in nats, with 0 log 0 = 0,
/// kl(p, 0) = +inf for p > 0 and kl(p, 1) = +inf for p < 1.
inline double kl(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0))
        throw DomainError("kl: arguments must lie in [0,1]");
    if (p == q) return 0.0;
    if (q == 0.0 || q == 1.0) return kInf;
    double r = 0.0;
    if (p > 0.0) r += p * std::log(p / q);
    if (p < 1.0) r += (1.0 - p) * (std::log1p(-p) - std::log1p(-q));
    return std::max(r, 0.0);
}

/// I(x; mu) for the given family. +inf outside the finite-rate domain.
inline double rate(const RateFamily& f, double x, double mu) {
    detail::require_mu(f, mu);
    if (std::isnan(x)) throw DomainError("rate: x is NaN");
    switch (f.kind()) {
    case FamilyKind::Bernoulli:
    case FamilyKind::BoundedKL:
        if (x < 0.0 || x > 1.0) return kInf;
        return kl(x, mu);
    case FamilyKind::Quadratic: {
        const double d = (x - mu) / f.range_k();
        return 2.0 * d * d;
    }
    case FamilyKind::Exponential:
        if (x <= 0.0) return kInf;
        return detail::exp_rate_ratio(x / mu);
    case FamilyKind::GammaFixedShape:
        if (x <= 0.0) return kInf;
        return f.shape() * detail::exp_rate_ratio(x / mu);
    case FamilyKind::Poisson: {
        if (x < 0.0) return kInf;
        if (x == 0.0) return mu;
        const double u = x / mu - 1.0;
        return std::max(0.0, mu * (-u + (1.0 + u) * std::log1p(u)));
    }
    case FamilyKind::ExplicitPhi: {
        const CenteredLmgf& psi = *f.centered_lmgf();
        const double dev = x - mu;
        if (!(dev > psi.deviation_lo && dev < psi.deviation_hi)) return kInf;
        const double l = detail::solve_centered_lmgf(psi, dev);
        return std::max(0.0, l * dev - psi.value(l));
    }
    }
    return kInf;
}

/// phi(lambda) for mean mu; +inf where the lmgf diverges.
inline double phi(const RateFamily& f, double lambda, double mu) {
    detail::require_mu(f, mu);
    switch (f.kind()) {
    case FamilyKind::Bernoulli:
    case FamilyKind::BoundedKL:
        if (lambda > 0.0) return lambda + std::log(mu + (1.0 - mu) * std::exp(-lambda));
        return std::log1p(mu * std::expm1(lambda));
    case FamilyKind::Quadratic: {
        const double k = f.range_k();
        return lambda * mu + k * k * lambda * lambda / 8.0;
    }
    case FamilyKind::Exponential:
        if (lambda * mu >= 1.0) return kInf;
        return -std::log1p(-lambda * mu);
    case FamilyKind::GammaFixedShape: {
        const double k = f.shape();
        if (lambda * mu / k >= 1.0) return kInf;
        return -k * std::log1p(-lambda * mu / k);
    }
    case FamilyKind::Poisson: return mu * std::expm1(lambda);
    case FamilyKind::ExplicitPhi: {
        const CenteredLmgf& psi = *f.centered_lmgf();
        if (!(lambda > psi.lambda_lo && lambda < psi.lambda_hi)) return kInf;
        return lambda * mu + psi.value(lambda);
    }
    }
    return kInf;
}

/// The unique lambda with phi'(lambda) = x, so that I(x; mu) = lambda x - phi(lambda).
inline double lambda_of_x(const RateFamily& f, double x, double mu) {
    detail::require_mu(f, mu);
    if (!f.finite_rate_domain(mu).interior(x))
        throw DomainError("lambda_of_x: x outside the open finite-rate interval");
    switch (f.kind()) {
    case FamilyKind::Bernoulli:
    case FamilyKind::BoundedKL:
        if (!(mu > 0.0 && mu < 1.0)) throw DomainError("lambda_of_x: degenerate Bernoulli mean");
        return (std::log(x) - std::log(mu)) + (std::log1p(-mu) - std::log1p(-x));
    case FamilyKind::Quadratic: {
        const double k = f.range_k();
        return 4.0 * (x - mu) / (k * k);
    }
    case FamilyKind::Exponential: return 1.0 / mu - 1.0 / x;
    case FamilyKind::GammaFixedShape: return f.shape() * (1.0 / mu - 1.0 / x);
    case FamilyKind::Poisson: return std::log(x / mu);
    case FamilyKind::ExplicitPhi:
        return detail::solve_centered_lmgf(*f.centered_lmgf(), x - mu);
    }
    return 0.0;
}

/// One-parameter canonical exponential model p_theta(x) = exp(x theta - b(theta) + c(x)).
struct ExpFamilyModel {
    std::string name;
    std::function<double(double)> log_partition;  // b
    std::function<double(double)> mean;           // b', increasing
    /// Inverse of `mean`. Solved numerically when left empty.
    std::function<double(double)> mean_to_theta;
    Interval theta_domain;

    static ExpFamilyModel bernoulli() {
        return {"bernoulli",
                [](double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); },
                [](double t) { return 1.0 / (1.0 + std::exp(-t)); },
                [](double m) { return std::log(m) - std::log1p(-m); },
                Interval::real_line()};
    }
    static ExpFamilyModel poisson() {
        return {"poisson", [](double t) { return std::exp(t); }, [](double t) { return std::exp(t); },
                [](double m) { return std::log(m); }, Interval::real_line()};
    }
    /// N(sigma^2 theta, sigma^2): b(theta) = sigma^2 theta^2 / 2.
    static ExpFamilyModel gaussian(double sigma = 1.0) {
        const double v = sigma * sigma;
        return {"gaussian", [v](double t) { return 0.5 * v * t * t; }, [v](double t) { return v * t; },
                [v](double m) { return m / v; }, Interval::real_line()};
    }
    /// Rate -theta > 0: b(theta) = -log(-theta), mean -1/theta.
    static ExpFamilyModel exponential() {
        return {"exponential", [](double t) { return -std::log(-t); }, [](double t) { return -1.0 / t; },
                [](double m) { return -1.0 / m; }, Interval::open(-kInf, 0.0)};
    }
    static ExpFamilyModel gamma_fixed_shape(double k) {
        return {"gamma", [k](double t) { return -k * std::log(-t); }, [k](double t) { return -k / t; },
                [k](double m) { return -k / m; }, Interval::open(-kInf, 0.0)};
    }
};

/// KL(P_beta; P_theta) = b(theta) - b(beta) - b'(beta) (theta - beta).
inline double bregman_kl(const ExpFamilyModel& model, double beta, double theta) {
    if (!model.theta_domain.contains(beta) || !model.theta_domain.contains(theta))
        throw DomainError("bregman_kl: parameter outside Theta");
    if (beta == theta) return 0.0;
    const double d = model.log_partition(theta) - model.log_partition(beta) - model.mean(beta) * (theta - beta);
    return std::max(d, 0.0);
}

} // namespace infobounds
