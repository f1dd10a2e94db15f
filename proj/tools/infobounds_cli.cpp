// infobounds: bound evaluation, calibration, intervals, coverage experiments
// and bandit runs from the command line. Every report embeds its manifest.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "infobounds/infobounds.hpp"
#include "infobounds/report_json.hpp"

using namespace infobounds;
using report::json;

namespace {

struct Common {
    std::string out = "-";
    std::string format = "json";
    std::uint64_t seed = 1;
};

struct BoundFlags {
    std::string kind;
    double delta = 0.0;
    std::uint64_t n = 0;
    double eta = 1.0;
    double c = 2.0;
    std::size_t alphabet = 2;
    double gamma = 0.99;
    double range_b = 1.0;

    BoundQuery query(BoundKind k) const {
        return BoundQuery{.kind = k, .delta = delta, .n = n, .eta = eta, .c = c, .alphabet_size = alphabet,
                          .gamma = gamma, .range_b = range_b};
    }
};

struct FamilyFlags {
    std::string name = "bernoulli";
    double range_k = 1.0;
    double shape = 1.0;

    RateFamily family() const {
        if (name == "bernoulli") return RateFamily::bernoulli();
        if (name == "bounded_kl" || name == "bounded") return RateFamily::bounded_kl();
        if (name == "quadratic" || name == "gaussian") return RateFamily::quadratic(range_k);
        if (name == "exponential") return RateFamily::exponential();
        if (name == "poisson") return RateFamily::poisson();
        if (name == "gamma") return RateFamily::gamma_fixed_shape(shape);
        throw CLI::ValidationError("--family", "unknown family '" + name + "'");
    }
};

const std::vector<std::string> kFamilies{"bernoulli", "bounded_kl", "bounded", "quadratic",
                                         "gaussian",  "exponential", "poisson", "gamma"};

// CLI11 reads config files only at the root app; subcommand files are merged
// into the argument list here. Keys already given as flags are skipped.
std::vector<std::string> merge_config(const CLI::App& app, std::vector<std::string> args) {
    std::size_t sub = 1;
    while (sub < args.size() && app.get_subcommand_no_throw(args[sub]) == nullptr) ++sub;
    if (sub >= args.size()) return args;
    std::string path;
    for (std::size_t i = sub + 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    if (CLI::ExistingFile(path) != "") return args;  // reported by the option's own check

    const auto given = [&](const std::string& name) {
        for (std::size_t i = sub + 1; i < args.size(); ++i)
            if (args[i] == "--" + name || args[i].rfind("--" + name + "=", 0) == 0) return true;
        return false;
    };
    std::vector<std::string> extra;
    for (const CLI::ConfigItem& item : CLI::ConfigINI().from_file(path)) {
        if (!item.parents.empty() || item.name == "config" || given(item.name)) continue;
        if (item.name == "switch") {
            for (const std::string& v : item.inputs) extra.push_back("--switch=" + v);
            continue;
        }
        std::string value;
        for (const std::string& v : item.inputs) value += (value.empty() ? "" : ",") + v;
        extra.push_back("--" + item.name + "=" + value);
    }
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub) + 1, extra.begin(), extra.end());
    return args;
}

void add_common(CLI::App* sub, Common& c, bool seeded) {
    sub->add_option("--config", "Flat key = value file mirroring flag names; flags take precedence")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", c.out, "Output path, - for stdout")->capture_default_str();
    sub->add_option("--format", c.format, "json, table or csv")
        ->check(CLI::IsMember({"json", "table", "csv"}))
        ->capture_default_str();
    if (seeded) sub->add_option("--seed", c.seed, "Master seed (unsigned 64-bit)")->capture_default_str();
}

void add_bound_params(CLI::App* sub, BoundFlags& b) {
    sub->add_option("--eta", b.eta, "Slice growth eta")->capture_default_str();
    sub->add_option("--c", b.c, "Anytime exponent c > 1")->capture_default_str();
    sub->add_option("--alphabet", b.alphabet, "Alphabet size |A|")->capture_default_str();
    sub->add_option("--gamma", b.gamma, "Discount factor")->capture_default_str();
    sub->add_option("--B", b.range_b, "Increment range B")->capture_default_str();
}

void add_family(CLI::App* sub, FamilyFlags& f) {
    sub->add_option("--family", f.name, "Rate family")->check(CLI::IsMember(kFamilies))->capture_default_str();
    sub->add_option("--K", f.range_k, "Range K of the quadratic family")->capture_default_str();
    sub->add_option("--shape", f.shape, "Shape k of the gamma family")->capture_default_str();
}

BoundKind parse_kind(const std::string& s, const char* flag) {
    const auto k = bound_kind_from_string(s);
    if (!k) throw CLI::ValidationError(flag, "unknown bound kind '" + s + "'");
    return *k;
}

std::vector<double> parse_list(const std::string& s, const char* flag) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw CLI::ValidationError(flag, "bad number '" + item + "'");
        }
    }
    return v;
}

void emit(const Common& c, const std::string& text) {
    if (c.out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw std::runtime_error("cannot open " + c.out);
    f << text;
}

std::string table(const json& j, const std::string& prefix = "") {
    std::ostringstream os;
    for (const auto& [k, v] : j.items()) {
        const std::string key = prefix.empty() ? k : prefix + "." + k;
        if (v.is_object())
            os << table(v, key);
        else
            os << key << '\t' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
    return os.str();
}

std::string render(const Common& c, const json& j) {
    if (c.format == "csv") throw CLI::ValidationError("--format", "csv is only available for bandit");
    if (c.format == "table") return table(j);
    return j.dump(2) + "\n";
}

json bound_result(const BoundQuery& q) {
    json r;
    if (is_anytime(q.kind)) {
        const AnytimeThreshold thr = anytime_threshold(q);
        r["threshold"] = json{{"coefficient", report::real(thr.coefficient)}, {"delta", report::real(thr.delta)}};
    }
    r["bound"] = report::to_json(evaluate(q));
    return r;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deviation bounds for self-normalized averages: evaluation, calibration, intervals, "
                 "coverage experiments and bandit runs"};
    app.name("infobounds");
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(report::kArtifactVersion));

    Common common;
    BoundFlags bf;
    FamilyFlags ff;
    int exit_code = 0;

    // bound
    auto* bound = app.add_subcommand("bound", "Evaluate a deviation bound");
    add_common(bound, common, false);
    add_bound_params(bound, bf);
    std::string compare;
    bound->add_option("--kind", bf.kind, "Bound kind")->required();
    bound->add_option("--delta", bf.delta, "Threshold delta")->required();
    bound->add_option("--n", bf.n, "Horizon n (ignored by anytime kinds)");
    bound->add_option("--compare", compare, "Also evaluate a reference bound")->check(CLI::IsMember({"union"}));
    bound->callback([&] {
        const BoundKind k = parse_kind(bf.kind, "--kind");
        if (!is_anytime(k) && bf.n == 0) throw CLI::RequiredError("--n");
        if (is_anytime(k) && bf.n == 0) bf.n = 1;
        const BoundQuery q = bf.query(k);
        json r = bound_result(q);
        if (!compare.empty()) {
            const BoundValue u = bound_union_baseline(q.delta, q.n);
            const double raw = evaluate(q).raw;
            r["union"] = report::to_json(u);
            r["ratio"] = report::real(u.raw > 0.0 ? raw / u.raw : 0.0);
        }
        emit(common, render(common, json{{"manifest", report::manifest("bound", report::to_json(q), 0, common.out)},
                                         {"result", r}}));
    });

    // calibrate
    auto* calibrate = app.add_subcommand("calibrate", "Smallest delta whose bound envelope is <= alpha");
    add_common(calibrate, common, false);
    add_bound_params(calibrate, bf);
    double alpha = 0.05;
    calibrate->add_option("--kind", bf.kind, "Bound kind")->required();
    calibrate->add_option("--alpha", alpha, "Target risk in (0,1)")->required();
    calibrate->add_option("--n", bf.n, "Horizon n (ignored by anytime kinds)");
    calibrate->callback([&] {
        const BoundKind k = parse_kind(bf.kind, "--kind");
        if (!is_anytime(k) && bf.n == 0) throw CLI::RequiredError("--n");
        if (is_anytime(k) && bf.n == 0) bf.n = 1;
        BoundQuery q = bf.query(k);
        json params = report::to_json(q);
        params.erase("delta");
        params["alpha"] = report::real(alpha);
        const double d = calibrate_delta(q, alpha);
        q.delta = d;
        json r{{"delta", report::real(d)}};
        const json fwd = bound_result(q);
        for (const auto& [key, v] : fwd.items()) r[key] = v;
        r["certificate"] = json{{"alpha", report::real(alpha)}, {"bound_at_delta", report::real(evaluate(q).raw)},
                                {"envelope_at_delta", report::real(envelope(q, d))}};
        emit(common, render(common, json{{"manifest", report::manifest("calibrate", params, 0, common.out)},
                                         {"result", r}}));
    });

    // interval
    auto* interval = app.add_subcommand("interval", "Confidence set {mu : N I(xbar; mu) <= delta}");
    add_common(interval, common, false);
    add_family(interval, ff);
    add_bound_params(interval, bf);
    double xbar = 0.0;
    std::uint64_t count = 0;
    std::optional<double> idelta, ialpha;
    interval->add_option("--xbar", xbar, "Empirical mean")->required();
    interval->add_option("--count", count, "Number of observations N")->required();
    auto* o_delta = interval->add_option("--delta", idelta, "Radius delta");
    auto* o_alpha = interval->add_option("--alpha", ialpha, "Risk level (calibrates delta)");
    interval->add_option("--kind", bf.kind, "Bound used with --alpha");
    interval->add_option("--n", bf.n, "Horizon used with --alpha");
    o_delta->excludes(o_alpha);
    interval->callback([&] {
        const RateFamily fam = ff.family();
        ConfidenceSet cs;
        json params{{"family", fam.name()}, {"xbar", report::real(xbar)}, {"count", count}};
        if (idelta) {
            cs = confidence_interval(xbar, count, *idelta, fam);
            params["delta"] = report::real(*idelta);
        } else if (ialpha) {
            if (bf.kind.empty()) bf.kind = "thm1";
            const BoundKind k = parse_kind(bf.kind, "--kind");
            if (!is_anytime(k) && bf.n == 0) throw CLI::RequiredError("--n");
            if (is_anytime(k) && bf.n == 0) bf.n = 1;
            const BoundQuery q = bf.query(k);
            cs = interval_with_certificate(xbar, count, *ialpha, fam, q);
            json b = report::to_json(q);
            b.erase("delta");
            params["alpha"] = report::real(*ialpha);
            params["bound"] = b;
        } else {
            throw CLI::RequiredError("--delta or --alpha");
        }
        emit(common, render(common, json{{"manifest", report::manifest("interval", params, 0, common.out)},
                                         {"result", report::to_json(cs)}}));
    });

    // coverage
    auto* coverage = app.add_subcommand("coverage", "Monte Carlo exceedance frequency against a bound");
    add_common(coverage, common, true);
    add_family(coverage, ff);
    add_bound_params(coverage, bf);
    ExperimentConfig ec;
    std::string statistic = "sup_fixed_horizon";
    std::string p0, schedule;
    bool assert_dominated = false;
    coverage->add_option("--statistic", statistic, "Simulated statistic")
        ->check(CLI::IsMember({"sup_fixed_horizon", "fixed_time", "anytime", "discounted", "multinomial_kl",
                               "hoeffding_abs"}))
        ->capture_default_str();
    coverage->add_option("--mu", ec.law.mu, "Mean of the increments")->capture_default_str();
    coverage->add_option("--concentration", ec.law.beta_concentration, "Beta concentration (bounded_kl)")
        ->capture_default_str();
    coverage->add_option("--n", ec.horizon, "Horizon n, or t_max for anytime")->capture_default_str();
    coverage->add_option("--delta", ec.delta, "Threshold delta")->capture_default_str();
    coverage->add_option("--kind", bf.kind, "Bound compared against (default: per statistic)");
    coverage->add_option("--p0", p0, "Null distribution for multinomial_kl, comma separated");
    coverage->add_option("--mu-schedule", schedule, "Per-step means for discounted, comma separated");
    coverage->add_option("--reps", ec.replications, "Replications R")->capture_default_str();
    coverage->add_option("--threads", ec.threads, "Worker threads (0: hardware)")->capture_default_str();
    coverage->add_flag("--assert", assert_dominated, "Exit nonzero unless the verdict is dominated");
    coverage->callback([&] {
        ec.statistic = *statistic_from_string(statistic);
        ec.law.family = ff.family();
        ec.seed = common.seed;
        ec.bound = bf.query(bf.kind.empty() ? default_bound(ec.statistic) : parse_kind(bf.kind, "--kind"));
        if (!p0.empty()) ec.p0 = parse_list(p0, "--p0");
        if (!schedule.empty()) ec.mu_schedule = parse_list(schedule, "--mu-schedule");
        const ExperimentReport r = run_experiment(ec);
        emit(common, render(common, report::experiment_report(r, common.out)));
        if (assert_dominated && !r.dominated) exit_code = 1;
    });

    // bandit
    auto* bandit = app.add_subcommand("bandit", "Cumulative regret of a UCB policy");
    add_common(bandit, common, true);
    BanditConfig bc;
    std::string arms, policy = "klucb", law = "bernoulli";
    std::vector<std::string> switches;
    std::optional<double> multiplier;
    bandit->add_option("--arms", arms, "Arm means, comma separated")->required();
    bandit->add_option("--switch", switches, "Mean change ARM:T:MEAN (repeatable)");
    bandit->add_option("--law", law, "Reward law")->check(CLI::IsMember({"bernoulli", "beta"}))->capture_default_str();
    bandit->add_option("--concentration", bc.beta_concentration, "Beta concentration")->capture_default_str();
    bandit->add_option("--horizon", bc.horizon, "Horizon T")->capture_default_str();
    bandit->add_option("--policy", policy, "klucb, ucb1 or discounted_ucb")->capture_default_str();
    bandit->add_option("--schedule-c", bc.policy.schedule.c, "c in delta(t) = log t + c log log t")
        ->capture_default_str();
    bandit->add_option("--gamma", bc.policy.gamma, "Discount factor (discounted_ucb)")->capture_default_str();
    bandit->add_option("--eta", bc.policy.eta, "eta (discounted_ucb)")->capture_default_str();
    bandit->add_option("--B", bc.policy.range_b, "Reward range B (discounted_ucb)")->capture_default_str();
    bandit->add_option("--multiplier", multiplier, "Radius multiplier (discounted_ucb)");
    bandit->add_option("--checkpoint", bc.checkpoint_every, "Regret checkpoint interval")->capture_default_str();
    bandit->add_option("--reps", bc.replications, "Replications")->capture_default_str();
    bandit->add_option("--threads", bc.threads, "Worker threads (0: hardware)")->capture_default_str();
    bandit->callback([&] {
        const auto pk = policy_from_string(policy);
        if (!pk) throw CLI::ValidationError("--policy", "unknown policy '" + policy + "'");
        bc.policy.kind = *pk;
        bc.policy.radius_multiplier = multiplier;
        bc.law = law == "beta" ? RewardLaw::Beta : RewardLaw::Bernoulli;
        if (bc.law == RewardLaw::Beta) bc.policy.kl_family = RateFamily::bounded_kl();
        bc.seed = common.seed;
        for (double m : parse_list(arms, "--arms")) bc.arms.push_back(ArmSchedule::constant(m));
        std::map<std::size_t, std::map<std::uint64_t, double>> changes;
        for (const std::string& s : switches) {
            unsigned long a = 0, t = 0;
            double m = 0.0;
            char c1 = 0, c2 = 0;
            std::istringstream is(s);
            if (!(is >> a >> c1 >> t >> c2 >> m) || c1 != ':' || c2 != ':' || a >= bc.arms.size() || t < 2)
                throw CLI::ValidationError("--switch", "expected ARM:T:MEAN with a valid arm and T >= 2, got '" + s + "'");
            changes[a][t] = m;
        }
        for (const auto& [a, seq] : changes)
            for (const auto& [t, m] : seq) {
                bc.arms[a].starts.push_back(t);
                bc.arms[a].means.push_back(m);
            }
        const BanditSummary s = run_policy(bc);
        const json j = report::bandit_report(bc, s, common.out);
        if (common.format == "csv") {
            std::ostringstream os;
            report::write_bandit_csv(os, j["manifest"], s);
            emit(common, os.str());
        } else {
            emit(common, render(common, j));
        }
    });

    try {
        std::vector<std::string> args = merge_config(app, std::vector<std::string>(argv, argv + argc));
        std::reverse(args.begin() + 1, args.end());
        args.erase(args.begin());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const CalibrationError& e) {
        std::cerr << "calibration error: " << e.what() << " (minimum achievable risk " << e.min_achievable_risk()
                  << ")\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
    return exit_code;
}
