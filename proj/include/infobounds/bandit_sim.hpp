#pragma once

// UCB-style bandit policies whose indices are the upper edges of the
// informational confidence sets, and a replication harness measuring
// cumulative pseudo-regret.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infobounds/confidence_sets.hpp"
#include "infobounds/errors.hpp"
#include "infobounds/estimators.hpp"
#include "infobounds/monte_carlo.hpp"
#include "infobounds/random.hpp"

namespace infobounds {

/// delta(t) = log t + c log log t; the second term is dropped while log log t <= 0.
struct ExplorationSchedule {
    double c = 3.0;
    double scale = 1.0;

    double operator()(std::uint64_t t) const {
        if (t <= 1) return 0.0;
        const double lt = std::log(static_cast<double>(t));
        const double llt = std::log(lt);
        return scale * (lt + (llt > 0.0 ? c * llt : 0.0));
    }
};

enum class PolicyKind { KLUCB, HoeffdingUCB, DiscountedUCB };

inline std::string_view to_string(PolicyKind p) {
    switch (p) {
    case PolicyKind::KLUCB: return "klucb";
    case PolicyKind::HoeffdingUCB: return "ucb1";
    case PolicyKind::DiscountedUCB: return "discounted_ucb";
    }
    return "?";
}

inline std::optional<PolicyKind> policy_from_string(std::string_view s) {
    if (s == "klucb" || s == "kl-ucb") return PolicyKind::KLUCB;
    if (s == "ucb1" || s == "hoeffding" || s == "hoeffding_ucb") return PolicyKind::HoeffdingUCB;
    if (s == "discounted_ucb" || s == "d-ucb") return PolicyKind::DiscountedUCB;
    return std::nullopt;
}

struct Policy {
    PolicyKind kind = PolicyKind::KLUCB;
    ExplorationSchedule schedule;
    /// Rate family of the KL index: Bernoulli, or BoundedKL for general [0,1] rewards.
    RateFamily kl_family = RateFamily::bernoulli();
    // Discounted UCB.
    double gamma = 0.99;
    double eta = 1.0;
    double range_b = 1.0;
    /// Multiplier m in the radius B sqrt(m log nu) sqrt(N_g2) / N_g. Empty:
    /// 1 / (2 (1 - eta^2/16)), which makes the discounted bound's exponential
    /// factor equal to 1/nu.
    std::optional<double> radius_multiplier;

    double multiplier() const {
        return radius_multiplier ? *radius_multiplier : 1.0 / (2.0 * (1.0 - eta * eta / 16.0));
    }
};

/// Piecewise-constant mean: `means[i]` holds from time `starts[i]` on.
struct ArmSchedule {
    std::vector<std::uint64_t> starts{1};
    std::vector<double> means{0.5};

    static ArmSchedule constant(double mu) { return {{1}, {mu}}; }

    double mean_at(std::uint64_t t) const {
        std::size_t i = 0;
        while (i + 1 < starts.size() && starts[i + 1] <= t) ++i;
        return means[i];
    }
};

enum class RewardLaw { Bernoulli, Beta };

struct BanditConfig {
    std::vector<ArmSchedule> arms;
    RewardLaw law = RewardLaw::Bernoulli;
    double beta_concentration = 2.0;
    std::uint64_t horizon = 1000;
    Policy policy;
    std::uint64_t replications = 100;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::uint64_t checkpoint_every = 100;

    void validate() const {
        if (arms.size() < 2) throw ConfigError("bandit: at least two arms are required");
        if (horizon < arms.size()) throw ConfigError("bandit: horizon must be >= number of arms");
        if (replications < 1) throw ConfigError("bandit: replications must be >= 1");
        if (checkpoint_every < 1) throw ConfigError("bandit: checkpoint interval must be >= 1");
        for (const ArmSchedule& a : arms) {
            if (a.starts.empty() || a.starts.size() != a.means.size() || a.starts.front() != 1)
                throw ConfigError("bandit: malformed arm schedule");
            for (std::size_t i = 1; i < a.starts.size(); ++i)
                if (a.starts[i] <= a.starts[i - 1]) throw ConfigError("bandit: schedule change points must increase");
            for (double m : a.means)
                if (!(m >= 0.0 && m <= 1.0)) throw ConfigError("bandit: arm means must lie in [0,1]");
        }
        if (policy.kind == PolicyKind::DiscountedUCB) {
            if (!(policy.gamma > 0.0 && policy.gamma < 1.0)) throw ConfigError("bandit: gamma must lie in (0,1)");
            if (!(policy.eta > 0.0 && policy.eta < 4.0)) throw ConfigError("bandit: eta must lie in (0,4)");
            if (!(policy.range_b > 0.0)) throw ConfigError("bandit: B must be > 0");
            if (!(policy.multiplier() > 0.0)) throw ConfigError("bandit: radius multiplier must be > 0");
        }
        if (policy.kind == PolicyKind::KLUCB && !policy.kl_family.is_bernoulli_like())
            throw ConfigError("bandit: KL-UCB index needs the Bernoulli or bounded family");
    }
};

/// Upper edge of {mu : N I(Xbar; mu) <= delta(t)}; +inf for an unplayed arm.
inline double klucb_index(const StreamState& arm, std::uint64_t t, const ExplorationSchedule& schedule,
                          const RateFamily& family = RateFamily::bernoulli()) {
    if (t < 1) throw DomainError("klucb_index: t must be >= 1");
    if (arm.count == 0) return kInf;
    const double xbar = std::clamp(*arm.mean(), 0.0, 1.0);
    return upper_conf(xbar, arm.count, schedule(t), family).value;
}

/// Xbar + sqrt(delta(t) / (2 N)).
inline double hoeffding_index(const StreamState& arm, std::uint64_t t, const ExplorationSchedule& schedule) {
    if (t < 1) throw DomainError("hoeffding_index: t must be >= 1");
    if (arm.count == 0) return kInf;
    return *arm.mean() + std::sqrt(schedule(t) / (2.0 * static_cast<double>(arm.count)));
}

/// Xbar_g + B sqrt(m log nu_g(t)) sqrt(N_g2) / N_g, from inverting the
/// discounted deviation bound at level ~1/nu.
inline double discounted_ucb_index(const DiscountedState& arm, double total_mass, const Policy& policy) {
    if (arm.count <= 0.0) return kInf;
    const double log_nu = std::max(0.0, std::log(total_mass));
    const double radius = policy.range_b * std::sqrt(policy.multiplier() * log_nu) * std::sqrt(arm.count_sq) / arm.count;
    return arm.sum / arm.count + radius;
}

struct BanditTrace {
    std::vector<std::size_t> arms;
    std::vector<double> rewards;
    std::vector<double> cumulative_regret;
    std::vector<StreamState> stream_states;
    std::vector<DiscountedState> discounted_states;
};

/// One replication. The k-th pull of arm a always consumes the k-th draw of
/// the stream (seed, replication, a), so different policies see paired rewards.
inline BanditTrace simulate_bandit(const BanditConfig& cfg, std::uint64_t replication) {
    const std::size_t k = cfg.arms.size();
    std::vector<Engine> streams;
    streams.reserve(k);
    for (std::size_t a = 0; a < k; ++a) streams.push_back(make_engine(cfg.seed, replication, a + 1));
    std::vector<std::gamma_distribution<double>> ga(k), gb(k);
    std::vector<double> law_mean(k, -1.0);

    BanditTrace tr;
    tr.arms.reserve(cfg.horizon);
    tr.rewards.reserve(cfg.horizon);
    tr.cumulative_regret.reserve(cfg.horizon);
    tr.stream_states.assign(k, StreamState{});
    tr.discounted_states.assign(k, DiscountedState::with_gamma(cfg.policy.gamma));
    double total_mass = 0.0;
    double regret = 0.0;
    std::vector<double> mean_now(k);

    for (std::uint64_t t = 1; t <= cfg.horizon; ++t) {
        double best_mean = 0.0;
        for (std::size_t a = 0; a < k; ++a) {
            mean_now[a] = cfg.arms[a].mean_at(t);
            best_mean = std::max(best_mean, mean_now[a]);
        }

        std::size_t chosen = 0;
        double best_index = -kInf;
        for (std::size_t a = 0; a < k; ++a) {
            double idx = 0.0;
            switch (cfg.policy.kind) {
            case PolicyKind::KLUCB: idx = klucb_index(tr.stream_states[a], t, cfg.policy.schedule, cfg.policy.kl_family); break;
            case PolicyKind::HoeffdingUCB: idx = hoeffding_index(tr.stream_states[a], t, cfg.policy.schedule); break;
            case PolicyKind::DiscountedUCB: idx = discounted_ucb_index(tr.discounted_states[a], total_mass, cfg.policy); break;
            }
            if (idx > best_index) {  // strict: ties go to the lowest arm id
                best_index = idx;
                chosen = a;
            }
        }

        const double mu = mean_now[chosen];
        double reward = 0.0;
        if (cfg.law == RewardLaw::Bernoulli) {
            reward = uniform01(streams[chosen]) < mu ? 1.0 : 0.0;
        } else if (mu <= 0.0 || mu >= 1.0) {
            reward = mu;
        } else {
            if (law_mean[chosen] != mu) {
                ga[chosen] = std::gamma_distribution<double>(mu * cfg.beta_concentration, 1.0);
                gb[chosen] = std::gamma_distribution<double>((1.0 - mu) * cfg.beta_concentration, 1.0);
                law_mean[chosen] = mu;
            }
            const double x = ga[chosen](streams[chosen]);
            const double y = gb[chosen](streams[chosen]);
            reward = x / (x + y);
        }

        for (std::size_t a = 0; a < k; ++a) {
            const bool played = a == chosen;
            tr.stream_states[a] = update(tr.stream_states[a], played, reward);
            if (cfg.policy.kind == PolicyKind::DiscountedUCB)
                tr.discounted_states[a] = update_discounted(tr.discounted_states[a], played, reward, mean_now[a]);
        }
        total_mass = cfg.policy.gamma * total_mass + 1.0;

        regret += best_mean - mu;
        tr.arms.push_back(chosen);
        tr.rewards.push_back(reward);
        tr.cumulative_regret.push_back(regret);
    }
    return tr;
}

struct BanditSummary {
    std::string policy;
    std::vector<std::uint64_t> checkpoints;
    std::vector<double> mean_regret;
    std::vector<double> std_error;
    std::vector<double> final_regret;     // per replication
    std::vector<double> mean_play_share;  // per arm, averaged over replications

    double mean_final_regret() const { return mean_regret.empty() ? 0.0 : mean_regret.back(); }
};

/// Runs all replications (concurrently when threads > 1) and aggregates the
/// regret curve at every checkpoint and at the horizon.
inline BanditSummary run_policy(const BanditConfig& cfg) {
    cfg.validate();
    std::vector<std::uint64_t> cps;
    for (std::uint64_t t = cfg.checkpoint_every; t < cfg.horizon; t += cfg.checkpoint_every) cps.push_back(t);
    cps.push_back(cfg.horizon);

    const std::size_t k = cfg.arms.size();
    std::vector<std::vector<double>> curves(cfg.replications);
    std::vector<std::vector<double>> shares(cfg.replications);
    parallel_for(cfg.replications, cfg.threads, [&](std::uint64_t r) {
        const BanditTrace tr = simulate_bandit(cfg, r);
        std::vector<double> c;
        c.reserve(cps.size());
        for (std::uint64_t t : cps) c.push_back(tr.cumulative_regret[t - 1]);
        curves[r] = std::move(c);
        std::vector<double> s(k, 0.0);
        for (std::size_t a = 0; a < k; ++a)
            s[a] = static_cast<double>(tr.stream_states[a].count) / static_cast<double>(cfg.horizon);
        shares[r] = std::move(s);
    });

    // Sequential reduction in replication order.
    BanditSummary out;
    out.policy = std::string(to_string(cfg.policy.kind));
    out.checkpoints = cps;
    const double reps = static_cast<double>(cfg.replications);
    for (std::size_t i = 0; i < cps.size(); ++i) {
        double s = 0.0, s2 = 0.0;
        for (const auto& c : curves) {
            s += c[i];
            s2 += c[i] * c[i];
        }
        const double m = s / reps;
        const double var = cfg.replications > 1 ? std::max(0.0, (s2 - reps * m * m) / (reps - 1.0)) : 0.0;
        out.mean_regret.push_back(m);
        out.std_error.push_back(std::sqrt(var / reps));
    }
    out.final_regret.reserve(cfg.replications);
    for (const auto& c : curves) out.final_regret.push_back(c.back());
    out.mean_play_share.assign(k, 0.0);
    for (const auto& s : shares)
        for (std::size_t a = 0; a < k; ++a) out.mean_play_share[a] += s[a] / reps;
    return out;
}

} // namespace infobounds
