#pragma once

// Monte Carlo estimation of exceedance probabilities of self-normalized
// statistics, compared against the closed-form bounds.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "infobounds/errors.hpp"
#include "infobounds/estimators.hpp"
#include "infobounds/peeling_bounds.hpp"
#include "infobounds/random.hpp"
#include "infobounds/rate_functions.hpp"

namespace infobounds {

enum class StatisticKind {
    SupFixedHorizon,  // exists t <= n : t I(Xbar_t; mu) >= delta
    FixedTime,        // n I(Xbar_n; mu) >= delta (single time, Cramer-Chernoff)
    Anytime,          // exists 3 <= t <= t_max : t I(Xbar_t; mu) >= threshold(t)
    Discounted,       // (S_g(n) - M_g(n)) / sqrt(N_g2(n)) >= delta
    MultinomialKL,    // exists t <= n : KL(P_t; P0) >= delta / t
    HoeffdingAbs,     // exists t <= n : |Xbar_t - mu| >= delta / sqrt(t)
};

inline std::string_view to_string(StatisticKind s) {
    switch (s) {
    case StatisticKind::SupFixedHorizon: return "sup_fixed_horizon";
    case StatisticKind::FixedTime: return "fixed_time";
    case StatisticKind::Anytime: return "anytime";
    case StatisticKind::Discounted: return "discounted";
    case StatisticKind::MultinomialKL: return "multinomial_kl";
    case StatisticKind::HoeffdingAbs: return "hoeffding_abs";
    }
    return "?";
}

inline std::optional<StatisticKind> statistic_from_string(std::string_view s) {
    for (StatisticKind k : {StatisticKind::SupFixedHorizon, StatisticKind::FixedTime, StatisticKind::Anytime,
                            StatisticKind::Discounted, StatisticKind::MultinomialKL, StatisticKind::HoeffdingAbs})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

/// Bound compared against by default for each statistic.
inline BoundKind default_bound(StatisticKind s) {
    switch (s) {
    case StatisticKind::SupFixedHorizon: return BoundKind::Thm1;
    case StatisticKind::FixedTime: return BoundKind::UnionBaseline;
    case StatisticKind::Anytime: return BoundKind::Thm3Opt;
    case StatisticKind::Discounted: return BoundKind::Discounted;
    case StatisticKind::MultinomialKL: return BoundKind::Multinomial;
    case StatisticKind::HoeffdingAbs: return BoundKind::HoeffdingSN;
    }
    return BoundKind::Thm1;
}

/// Law of the simulated increments. For the bounded family the increments are
/// Beta(mu s, (1 - mu) s) with concentration s, i.e. genuinely non-Bernoulli
/// [0,1]-valued variables; the Quadratic(K) family draws N(mu, (K/2)^2).
struct ScalarLaw {
    RateFamily family = RateFamily::bernoulli();
    double mu = 0.5;
    double beta_concentration = 2.0;
};

class ScalarSampler {
public:
    explicit ScalarSampler(const ScalarLaw& law) : family_(law.family), conc_(law.beta_concentration) {
        set_mean(law.mu);
    }

    void set_mean(double mu) {
        mu_ = mu;
        switch (family_.kind()) {
        case FamilyKind::BoundedKL:
            if (mu > 0.0 && mu < 1.0) {
                ga_ = std::gamma_distribution<double>(mu * conc_, 1.0);
                gb_ = std::gamma_distribution<double>((1.0 - mu) * conc_, 1.0);
            }
            break;
        case FamilyKind::Quadratic: normal_ = std::normal_distribution<double>(mu, 0.5 * family_.range_k()); break;
        case FamilyKind::Exponential: expo_ = std::exponential_distribution<double>(1.0 / mu); break;
        case FamilyKind::Poisson: pois_ = std::poisson_distribution<long>(mu); break;
        case FamilyKind::GammaFixedShape: ga_ = std::gamma_distribution<double>(family_.shape(), mu / family_.shape()); break;
        default: break;
        }
    }

    double operator()(Engine& eng) {
        switch (family_.kind()) {
        case FamilyKind::Bernoulli: return uniform01(eng) < mu_ ? 1.0 : 0.0;
        case FamilyKind::BoundedKL: {
            if (mu_ <= 0.0 || mu_ >= 1.0) return mu_;
            const double a = ga_(eng);
            const double b = gb_(eng);
            return a / (a + b);
        }
        case FamilyKind::Quadratic: return normal_(eng);
        case FamilyKind::Exponential: return expo_(eng);
        case FamilyKind::Poisson: return static_cast<double>(pois_(eng));
        case FamilyKind::GammaFixedShape: return ga_(eng);
        case FamilyKind::ExplicitPhi: break;
        }
        return mu_;
    }

private:
    RateFamily family_;
    double conc_;
    double mu_ = 0.0;
    std::gamma_distribution<double> ga_, gb_;
    std::normal_distribution<double> normal_;
    std::exponential_distribution<double> expo_;
    std::poisson_distribution<long> pois_;
};

struct ExperimentConfig {
    StatisticKind statistic = StatisticKind::SupFixedHorizon;
    ScalarLaw law;
    /// Per-step means for Discounted runs; a single entry is broadcast.
    std::vector<double> mu_schedule;
    /// Null distribution for MultinomialKL.
    std::vector<double> p0;
    /// n, or t_max for Anytime.
    std::uint64_t horizon = 100;
    double delta = 8.0;
    /// Bound to compare with. Its delta and n are overwritten from the config.
    BoundQuery bound{.kind = BoundKind::Thm1};
    std::uint64_t replications = 10000;
    std::uint64_t seed = 1;
    unsigned threads = 0;

    /// Resolved bound query (delta, n and kind-specific parameters filled in).
    BoundQuery resolved_bound() const {
        BoundQuery q = bound;
        q.delta = delta;
        q.n = statistic == StatisticKind::FixedTime ? 1 : horizon;
        if (statistic == StatisticKind::MultinomialKL) q.alphabet_size = p0.size();
        return q;
    }

    void validate() const {
        if (replications < 1) throw ConfigError("experiment: replications must be >= 1");
        if (horizon < 1) throw ConfigError("experiment: horizon must be >= 1");
        if (std::isnan(delta) || delta < 0.0) throw ConfigError("experiment: delta must be >= 0");

        const auto allowed = [this](std::initializer_list<BoundKind> kinds) {
            for (BoundKind k : kinds)
                if (bound.kind == k) return;
            throw ConfigError(std::string("experiment: bound '") + std::string(to_string(bound.kind)) +
                              "' does not apply to statistic '" + std::string(to_string(statistic)) + "'");
        };

        if (statistic != StatisticKind::MultinomialKL) {
            if (law.family.kind() == FamilyKind::ExplicitPhi)
                throw ConfigError("experiment: no sampler for an explicit-phi family");
            if (statistic != StatisticKind::Discounted && !law.family.mu_domain().contains(law.mu))
                throw ConfigError("experiment: mu outside the family's mean domain");
        }
        switch (statistic) {
        case StatisticKind::SupFixedHorizon:
            allowed({BoundKind::Thm1, BoundKind::Thm1Eta, BoundKind::Thm2, BoundKind::Thm2Opt,
                     BoundKind::Subgaussian, BoundKind::UnionBaseline});
            break;
        case StatisticKind::FixedTime: allowed({BoundKind::UnionBaseline}); break;
        case StatisticKind::Anytime:
            allowed({BoundKind::Thm3, BoundKind::Thm3Opt});
            if (!(delta > 1.0)) throw ConfigError("experiment: anytime threshold needs delta > 1");
            break;
        case StatisticKind::HoeffdingAbs:
            allowed({BoundKind::HoeffdingSN});
            if (!law.family.is_bernoulli_like()) throw ConfigError("experiment: hoeffding statistic needs a [0,1]-bounded law");
            break;
        case StatisticKind::Discounted: {
            allowed({BoundKind::Discounted});
            if (!law.family.is_bernoulli_like()) throw ConfigError("experiment: discounted statistic needs a [0,1]-bounded law");
            if (bound.range_b < 1.0) throw ConfigError("experiment: [0,1]-valued increments need B >= 1");
            if (!mu_schedule.empty() && mu_schedule.size() != 1 && mu_schedule.size() != horizon)
                throw ConfigError("experiment: mu schedule length must be 1 or the horizon");
            for (double m : mu_schedule)
                if (!(m >= 0.0 && m <= 1.0)) throw ConfigError("experiment: scheduled means must lie in [0,1]");
            if (mu_schedule.empty() && !(law.mu >= 0.0 && law.mu <= 1.0))
                throw ConfigError("experiment: mu must lie in [0,1]");
            break;
        }
        case StatisticKind::MultinomialKL: {
            allowed({BoundKind::Multinomial});
            if (p0.size() < 2) throw ConfigError("experiment: multinomial statistic needs a distribution over >= 2 symbols");
            double s = 0.0;
            for (double p : p0) {
                if (!(p >= 0.0)) throw ConfigError("experiment: p0 entries must be >= 0");
                s += p;
            }
            if (std::abs(s - 1.0) > 1e-9) throw ConfigError("experiment: p0 must sum to 1");
            break;
        }
        }
        resolved_bound().validate();
    }
};

struct ExperimentReport {
    ExperimentConfig config;
    std::uint64_t exceedances = 0;
    double p_hat = 0.0;
    double std_error = 0.0;
    BoundValue bound;
    bool dominated = false;
    /// Anytime runs only: the event is truncated at t_max, which can only lower p_hat.
    std::optional<std::uint64_t> truncated_at;
    /// SupFixedHorizon runs: the union bound over all n times, for the sharpness comparison.
    std::optional<BoundValue> union_baseline;
    double wall_clock_seconds = 0.0;

    /// p_hat / bound.raw; reported, never asserted.
    double sharpness() const { return bound.raw > 0.0 ? p_hat / bound.raw : 0.0; }
};

namespace detail {

// kl(p, q) <= (p - q)^2 / (q (1 - q)): lets the inner loops skip most
// logarithm evaluations when the chi-square value is already below threshold.
struct ScalarStatistic {
    RateFamily family;
    double mu;
    bool chi2_filter;
    double inv_var;

    ScalarStatistic(const RateFamily& f, double m)
        : family(f), mu(m), chi2_filter(f.is_bernoulli_like() && m > 0.0 && m < 1.0),
          inv_var(chi2_filter ? 1.0 / (m * (1.0 - m)) : 0.0) {}

    // t * I(sum / t; mu) >= threshold
    bool exceeds(double sum, double t, double threshold) const {
        const double xbar = sum / t;
        if (chi2_filter) {
            const double d = xbar - mu;
            if (t * d * d * inv_var < threshold) return false;
        }
        return t * rate(family, xbar, mu) >= threshold;
    }
};

inline bool replicate_scalar(const ExperimentConfig& cfg, const std::vector<double>& anytime_thresholds,
                             std::uint64_t rep) {
    Engine eng = make_engine(cfg.seed, rep);
    ScalarSampler draw(cfg.law);
    const ScalarStatistic stat(cfg.law.family, cfg.law.mu);
    const double delta = cfg.delta;
    double sum = 0.0;
    for (std::uint64_t t = 1; t <= cfg.horizon; ++t) {
        sum += draw(eng);
        const double tt = static_cast<double>(t);
        switch (cfg.statistic) {
        case StatisticKind::SupFixedHorizon:
            if (stat.exceeds(sum, tt, delta)) return true;
            break;
        case StatisticKind::FixedTime:
            if (t == cfg.horizon) return stat.exceeds(sum, tt, delta);
            break;
        case StatisticKind::Anytime:
            if (t >= 3 && stat.exceeds(sum, tt, anytime_thresholds[t])) return true;
            break;
        case StatisticKind::HoeffdingAbs:
            if (std::abs(sum - tt * cfg.law.mu) >= delta * std::sqrt(tt)) return true;
            break;
        default: break;
        }
    }
    return false;
}

inline bool replicate_discounted(const ExperimentConfig& cfg, std::uint64_t rep) {
    Engine eng = make_engine(cfg.seed, rep);
    const auto mean_at = [&cfg](std::uint64_t t) {
        if (cfg.mu_schedule.empty()) return cfg.law.mu;
        if (cfg.mu_schedule.size() == 1) return cfg.mu_schedule.front();
        return cfg.mu_schedule[t - 1];
    };
    ScalarLaw law = cfg.law;
    law.mu = mean_at(1);
    ScalarSampler draw(law);
    DiscountedState s = DiscountedState::with_gamma(cfg.bound.gamma);
    double current = law.mu;
    for (std::uint64_t t = 1; t <= cfg.horizon; ++t) {
        const double m = mean_at(t);
        if (m != current) {
            draw.set_mean(m);
            current = m;
        }
        s = update_discounted(s, true, draw(eng), m);
    }
    return (s.sum - s.mean_sum) >= cfg.delta * std::sqrt(s.count_sq);
}

inline bool replicate_multinomial(const ExperimentConfig& cfg, const std::vector<double>& log_table,
                                  std::uint64_t rep) {
    Engine eng = make_engine(cfg.seed, rep);
    const std::size_t k = cfg.p0.size();
    std::vector<double> cdf(k), log_p0(k);
    double acc = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        acc += cfg.p0[a];
        cdf[a] = acc;
        log_p0[a] = cfg.p0[a] > 0.0 ? std::log(cfg.p0[a]) : 0.0;
    }
    std::vector<std::uint64_t> counts(k, 0);
    for (std::uint64_t t = 1; t <= cfg.horizon; ++t) {
        const double u = uniform01(eng) * acc;
        std::size_t a = 0;
        while (a + 1 < k && (u >= cdf[a] || cfg.p0[a] == 0.0)) ++a;
        ++counts[a];
        // t KL(P_t; P0) = sum_a c_a (log c_a - log t - log p0_a)
        double tkl = 0.0;
        for (std::size_t b = 0; b < k; ++b)
            if (counts[b] > 0) tkl += static_cast<double>(counts[b]) * (log_table[counts[b]] - log_p0[b]);
        tkl -= static_cast<double>(t) * log_table[t];
        if (tkl >= cfg.delta) return true;
    }
    return false;
}

template <typename Replicate>
std::uint64_t count_exceedances(const ExperimentConfig& cfg, Replicate replicate) {
    const unsigned threads = resolve_threads(cfg.threads);
    std::vector<std::uint64_t> per_worker(threads, 0);
    // Each worker gets a contiguous block; the sum of integer counts does not
    // depend on the partition.
    parallel_for(threads, threads, [&](std::uint64_t w) {
        const std::uint64_t begin = cfg.replications * w / threads;
        const std::uint64_t end = cfg.replications * (w + 1) / threads;
        std::uint64_t c = 0;
        for (std::uint64_t r = begin; r < end; ++r) c += replicate(r) ? 1 : 0;
        per_worker[w] = c;
    });
    std::uint64_t total = 0;
    for (std::uint64_t c : per_worker) total += c;
    return total;
}

inline ExperimentReport finalize(const ExperimentConfig& cfg, std::uint64_t exceed,
                                 std::chrono::steady_clock::time_point start) {
    ExperimentReport rep;
    rep.config = cfg;
    rep.exceedances = exceed;
    const double r = static_cast<double>(cfg.replications);
    rep.p_hat = static_cast<double>(exceed) / r;
    rep.std_error = std::sqrt(rep.p_hat * (1.0 - rep.p_hat) / r);
    rep.bound = evaluate(cfg.resolved_bound());
    rep.dominated = rep.p_hat - 3.0 * rep.std_error <= rep.bound.clamped;
    if (cfg.statistic == StatisticKind::Anytime) rep.truncated_at = cfg.horizon;
    if (cfg.statistic == StatisticKind::SupFixedHorizon && std::isfinite(cfg.delta))
        rep.union_baseline = bound_union_baseline(cfg.delta, cfg.horizon);
    rep.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

} // namespace detail

/// Fixed-horizon statistics: SupFixedHorizon, FixedTime and HoeffdingAbs.
/// The path is never stored; each replication stops at its first exceedance.
inline ExperimentReport run_coverage(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.statistic != StatisticKind::SupFixedHorizon && cfg.statistic != StatisticKind::FixedTime &&
        cfg.statistic != StatisticKind::HoeffdingAbs)
        throw ConfigError("run_coverage: statistic must be sup_fixed_horizon, fixed_time or hoeffding_abs");
    const auto start = std::chrono::steady_clock::now();
    std::uint64_t exceed = 0;
    if (!std::isinf(cfg.delta)) {
        const std::vector<double> none;
        exceed = detail::count_exceedances(cfg, [&](std::uint64_t r) { return detail::replicate_scalar(cfg, none, r); });
    }
    return detail::finalize(cfg, exceed, start);
}

/// Anytime event, truncated at t_max = cfg.horizon. Times t < 3 are skipped
/// because the threshold involves log log t.
inline ExperimentReport run_anytime(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.statistic != StatisticKind::Anytime) throw ConfigError("run_anytime: statistic must be anytime");
    const auto start = std::chrono::steady_clock::now();
    const AnytimeThreshold thr = anytime_threshold(cfg.resolved_bound());
    std::vector<double> table(cfg.horizon + 1, kInf);
    for (std::uint64_t t = 3; t <= cfg.horizon; ++t) table[t] = *thr(static_cast<double>(t));
    const std::uint64_t exceed =
        detail::count_exceedances(cfg, [&](std::uint64_t r) { return detail::replicate_scalar(cfg, table, r); });
    return detail::finalize(cfg, exceed, start);
}

/// One-sided discounted fluctuation event at time n, with every step observed.
inline ExperimentReport run_discounted(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.statistic != StatisticKind::Discounted) throw ConfigError("run_discounted: statistic must be discounted");
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t exceed =
        detail::count_exceedances(cfg, [&](std::uint64_t r) { return detail::replicate_discounted(cfg, r); });
    return detail::finalize(cfg, exceed, start);
}

inline ExperimentReport run_multinomial(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.statistic != StatisticKind::MultinomialKL) throw ConfigError("run_multinomial: statistic must be multinomial_kl");
    const auto start = std::chrono::steady_clock::now();
    std::vector<double> log_table(cfg.horizon + 1, 0.0);
    for (std::uint64_t i = 1; i <= cfg.horizon; ++i) log_table[i] = std::log(static_cast<double>(i));
    const std::uint64_t exceed =
        detail::count_exceedances(cfg, [&](std::uint64_t r) { return detail::replicate_multinomial(cfg, log_table, r); });
    return detail::finalize(cfg, exceed, start);
}

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.statistic) {
    case StatisticKind::Anytime: return run_anytime(cfg);
    case StatisticKind::Discounted: return run_discounted(cfg);
    case StatisticKind::MultinomialKL: return run_multinomial(cfg);
    default: return run_coverage(cfg);
    }
}

} // namespace infobounds
