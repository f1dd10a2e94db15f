#pragma once

// Machine-readable reports. Every report embeds a manifest with the resolved
// parameters, so that an output file fully describes the run that produced it.
//
// Conventions: snake_case keys, probabilities and real values rounded to 12
// significant digits, infinities written as the strings "inf" / "-inf", seeds
// as unsigned 64-bit integers. Wall-clock data lives under "timing" and is the
// only part of a report that is not reproducible.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "infobounds/bandit_sim.hpp"
#include "infobounds/confidence_sets.hpp"
#include "infobounds/monte_carlo.hpp"
#include "infobounds/peeling_bounds.hpp"

namespace infobounds::report {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kArtifactVersion = "1.0.0";

/// Real value with 12 significant digits; non-finite values become strings.
inline json real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

inline json manifest(const std::string& subcommand, json parameters, std::uint64_t seed,
                     const std::string& output = "-") {
    return json{{"subcommand", subcommand},
                {"schema_version", kSchemaVersion},
                {"artifact_version", kArtifactVersion},
                {"seed", seed},
                {"output", output},
                {"parameters", std::move(parameters)}};
}

inline json to_json(const BoundValue& v) {
    return json{{"raw", real(v.raw)}, {"clamped", real(v.clamped)}, {"vacuous", v.vacuous}};
}

inline json to_json(const BoundQuery& q) {
    json j{{"kind", std::string(to_string(q.kind))}, {"delta", real(q.delta)}};
    if (!is_anytime(q.kind)) j["n"] = q.n;
    switch (q.kind) {
    case BoundKind::Thm1Eta:
    case BoundKind::Thm2:
    case BoundKind::Subgaussian: j["eta"] = real(q.eta); break;
    case BoundKind::Thm3: j["c"] = real(q.c); break;
    case BoundKind::Multinomial: j["alphabet_size"] = q.alphabet_size; break;
    case BoundKind::Discounted:
        j["eta"] = real(q.eta);
        j["gamma"] = real(q.gamma);
        j["range_b"] = real(q.range_b);
        break;
    default: break;
    }
    return j;
}

inline json to_json(const ConfidenceSet& cs) {
    json j{{"family", cs.family.name()},
           {"xbar", real(cs.xbar)},
           {"count", cs.count},
           {"delta", real(cs.delta)},
           {"lower", real(cs.lower)},
           {"upper", real(cs.upper)},
           {"lower_clipped", cs.lower_clipped},
           {"upper_clipped", cs.upper_clipped}};
    if (cs.certificate) {
        j["certificate"] = json{{"bound_kind", std::string(to_string(cs.certificate->kind))},
                                {"horizon", cs.certificate->horizon},
                                {"alpha", real(cs.certificate->alpha)},
                                {"bound", to_json(cs.certificate->bound)}};
    }
    return j;
}

inline json to_json(const ExperimentConfig& c) {
    json j{{"statistic", std::string(to_string(c.statistic))},
           {"family", c.law.family.name()},
           {"mu", real(c.law.mu)},
           {"horizon", c.horizon},
           {"delta", real(c.delta)},
           {"replications", c.replications},
           {"seed", c.seed},
           {"bound", to_json(c.resolved_bound())}};
    if (c.law.family.kind() == FamilyKind::BoundedKL) j["beta_concentration"] = real(c.law.beta_concentration);
    if (!c.mu_schedule.empty()) {
        json s = json::array();
        for (double m : c.mu_schedule) s.push_back(real(m));
        j["mu_schedule"] = s;
    }
    if (!c.p0.empty()) {
        json p = json::array();
        for (double v : c.p0) p.push_back(real(v));
        j["p0"] = p;
    }
    return j;
}

/// Result part of an experiment report (manifest and timing excluded).
inline json result_json(const ExperimentReport& r) {
    json j{{"exceedances", r.exceedances},
           {"replications", r.config.replications},
           {"p_hat", real(r.p_hat)},
           {"std_error", real(r.std_error)},
           {"bound", to_json(r.bound)},
           {"verdict", r.dominated ? "dominated" : "violated"},
           {"sharpness", real(r.sharpness())}};
    if (r.union_baseline) {
        j["union_baseline"] = to_json(*r.union_baseline);
        j["sharpness_vs_union"] = real(r.union_baseline->raw > 0 ? r.p_hat / r.union_baseline->raw : 0.0);
    }
    if (r.truncated_at) {
        j["truncated_at"] = *r.truncated_at;
        j["truncation_note"] = "infinite-time event simulated up to truncated_at only; p_hat is biased downward";
    }
    return j;
}

inline json experiment_report(const ExperimentReport& r, const std::string& output = "-") {
    return json{{"manifest", manifest("coverage", to_json(r.config), r.config.seed, output)},
                {"result", result_json(r)},
                {"timing", json{{"wall_clock_seconds", r.wall_clock_seconds}}}};
}

inline json to_json(const BanditConfig& c) {
    json arms = json::array();
    for (const ArmSchedule& a : c.arms) {
        json segs = json::array();
        for (std::size_t i = 0; i < a.starts.size(); ++i)
            segs.push_back(json{{"start", a.starts[i]}, {"mean", real(a.means[i])}});
        arms.push_back(segs);
    }
    json pol{{"kind", std::string(to_string(c.policy.kind))},
             {"schedule_c", real(c.policy.schedule.c)},
             {"schedule_scale", real(c.policy.schedule.scale)}};
    if (c.policy.kind == PolicyKind::DiscountedUCB) {
        pol["gamma"] = real(c.policy.gamma);
        pol["eta"] = real(c.policy.eta);
        pol["range_b"] = real(c.policy.range_b);
        pol["radius_multiplier"] = real(c.policy.multiplier());
    }
    return json{{"arms", arms},
                {"law", c.law == RewardLaw::Bernoulli ? "bernoulli" : "beta"},
                {"horizon", c.horizon},
                {"policy", pol},
                {"replications", c.replications},
                {"seed", c.seed},
                {"checkpoint_every", c.checkpoint_every}};
}

inline json bandit_report(const BanditConfig& c, const BanditSummary& s, const std::string& output = "-") {
    json curve = json::array();
    for (std::size_t i = 0; i < s.checkpoints.size(); ++i)
        curve.push_back(json{{"t", s.checkpoints[i]}, {"mean_regret", real(s.mean_regret[i])},
                             {"stderr", real(s.std_error[i])}});
    json shares = json::array();
    for (double v : s.mean_play_share) shares.push_back(real(v));
    return json{{"manifest", manifest("bandit", to_json(c), c.seed, output)},
                {"result", json{{"policy", s.policy}, {"curve", curve}, {"mean_play_share", shares}}}};
}

/// Regret curve as CSV (columns t, mean_regret, stderr, policy), preceded by
/// the manifest as a single `# manifest: {...}` comment line.
inline void write_bandit_csv(std::ostream& os, const json& manifest_json, const BanditSummary& s) {
    os << "# manifest: " << manifest_json.dump() << '\n';
    os << "t,mean_regret,stderr,policy\n";
    for (std::size_t i = 0; i < s.checkpoints.size(); ++i) {
        os << s.checkpoints[i] << ',' << real(s.mean_regret[i]).dump() << ',' << real(s.std_error[i]).dump() << ','
           << s.policy << '\n';
    }
}

} // namespace infobounds::report
