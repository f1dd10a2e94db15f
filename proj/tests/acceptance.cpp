// Acceptance suite: one PASS/FAIL line per criterion, at the stated tolerances.
// Exit status is nonzero if any criterion fails, except for those listed in
// kKnownFailures, which are printed as FAIL but documented as unattainable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "infobounds/infobounds.hpp"
#include "infobounds/report_json.hpp"
#include "oracles.hpp"

using namespace infobounds;
using oracle::Big;

namespace {

// The calibration anchor 8.87 +- 0.05 cannot be met: the envelope equation it
// names has its root at 8.8142 (see README, "Known deviations").
const std::set<std::string> kKnownFailures{"AC5"};

struct Outcome {
    bool pass = true;
    std::string detail;
};

int g_unexpected = 0;

void report_line(const std::string& id, const std::string& title, const Outcome& o, double seconds) {
    const bool known = !o.pass && kKnownFailures.count(id) > 0;
    std::printf("%s %-4s %-44s %s [%.1fs]%s\n", o.pass ? "PASS" : "FAIL", id.c_str(), title.c_str(), o.detail.c_str(),
                seconds, known ? " (known, documented)" : "");
    std::fflush(stdout);
    if (!o.pass && !known) ++g_unexpected;
}

template <typename F>
void run(const std::string& id, const std::string& title, F body) {
    const auto t0 = std::chrono::steady_clock::now();
    const Outcome o = body();
    report_line(id, title, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// ---------------------------------------------------------------- AC1

struct DominationCase {
    std::string name;
    ExperimentConfig cfg;
};

std::vector<DominationCase> domination_cases() {
    std::vector<DominationCase> v;
    const auto base = [](StatisticKind s, BoundKind k, std::uint64_t n, double delta, std::uint64_t reps) {
        ExperimentConfig c;
        c.statistic = s;
        c.bound.kind = k;
        c.horizon = n;
        c.delta = delta;
        c.replications = reps;
        c.seed = 20240601;
        c.threads = 1;
        return c;
    };
    {
        ExperimentConfig c = base(StatisticKind::SupFixedHorizon, BoundKind::Thm1, 200, 8.0, 100000);
        c.law = {RateFamily::bernoulli(), 0.3};
        v.push_back({"thm1", c});
    }
    {
        ExperimentConfig c = base(StatisticKind::SupFixedHorizon, BoundKind::Thm2Opt, 200, 8.0, 100000);
        c.law = {RateFamily::quadratic(1.0), 0.0};
        v.push_back({"thm2_opt", c});
    }
    {
        ExperimentConfig c = base(StatisticKind::SupFixedHorizon, BoundKind::Subgaussian, 200, 8.0, 100000);
        c.law = {RateFamily::quadratic(1.0), 0.0};
        c.bound.eta = 1.0;
        v.push_back({"subgaussian", c});
    }
    {
        ExperimentConfig c = base(StatisticKind::Anytime, BoundKind::Thm3Opt, 100000, 8.0, 10000);
        c.law = {RateFamily::bernoulli(), 0.5};
        v.push_back({"thm3_opt", c});
    }
    {
        ExperimentConfig c = base(StatisticKind::HoeffdingAbs, BoundKind::HoeffdingSN, 200, 2.0, 100000);
        c.law = {RateFamily::bounded_kl(), 0.5, 2.0};
        v.push_back({"hoeffding_sn", c});
    }
    {
        ExperimentConfig c = base(StatisticKind::MultinomialKL, BoundKind::Multinomial, 1000, 30.0, 100000);
        c.p0 = {1.0 / 3, 1.0 / 3, 1.0 / 3};
        v.push_back({"multinomial", c});
    }
    {
        ExperimentConfig c = base(StatisticKind::Discounted, BoundKind::Discounted, 10000, 3.0, 10000);
        c.law = {RateFamily::bernoulli(), 0.5};
        c.bound.gamma = 0.99;
        c.bound.eta = 1.0;
        c.bound.range_b = 1.0;
        v.push_back({"discounted", c});
    }
    return v;
}

std::vector<std::string> g_ac1_reports;

Outcome ac1() {
    Outcome o;
    std::string detail;
    for (const DominationCase& dc : domination_cases()) {
        const ExperimentReport r = run_experiment(dc.cfg);
        g_ac1_reports.push_back(report::result_json(r).dump());
        bool ok = r.p_hat - 3.0 * r.std_error <= r.bound.raw;
        if (dc.name == "thm1") ok = ok && r.p_hat <= 0.0784;
        o.pass = o.pass && ok;
        std::printf("       %-13s R=%-6llu p_hat=%.3e se=%.1e bound=%.3e%s\n", dc.name.c_str(),
                    static_cast<unsigned long long>(dc.cfg.replications), r.p_hat, r.std_error, r.bound.raw,
                    ok ? "" : "  <-- violated");
    }
    o.detail = "p_hat - 3 se <= bound for all 7 configurations";
    return o;
}

// ---------------------------------------------------------------- AC2

// Displayed formulas, re-typed and evaluated in 50-digit arithmetic.
Big formula(BoundKind k, const Big& d, const Big& n, const Big& eta, const Big& c, const Big& a, const Big& gamma,
            const Big& b) {
    using boost::multiprecision::ceil;
    using boost::multiprecision::exp;
    using boost::multiprecision::log;
    using boost::multiprecision::pow;
    using boost::multiprecision::sqrt;
    const Big e = exp(Big(1));
    const Big ln = log(n);
    switch (k) {
    case BoundKind::Thm1: return 2 * e * ceil(d * ln) * exp(-d);
    case BoundKind::Thm1Eta: return 2 * ceil(ln / log(1 + eta)) * exp(-d / (1 + eta));
    case BoundKind::Thm2: return 2 * ceil(ln / log(1 + eta)) * exp(-(1 - eta * eta / 8) * d);
    case BoundKind::Thm2Opt: return 2 * sqrt(e) * ceil(sqrt(d) / 2 * ln) * exp(-d);
    case BoundKind::Subgaussian: return 2 * ceil(ln / log(1 + eta)) * exp(-(1 - eta * eta / 16) * d);
    case BoundKind::Thm3: return 2 * e * c * pow(d, c) / (c - 1) * exp(-d);
    case BoundKind::Thm3Opt: return 2 * e * e * d * exp(-d);
    case BoundKind::HoeffdingSN: return 4 * e * ceil(d * d * ln) * exp(-2 * d * d);
    case BoundKind::Multinomial: return 2 * e * (d * ln + a) * exp(-d / a);
    case BoundKind::Discounted: {
        const Big nu = (1 - pow(gamma, n)) / (1 - gamma);
        return ceil(log(nu) / log(1 + eta)) * exp(-(2 * d * d / (b * b)) * (1 - eta * eta / 16));
    }
    case BoundKind::UnionBaseline: return 2 * n * exp(-d);
    }
    return 0;
}

// Argument of the ceiling, to skip points where double rounding could flip it.
Big ceiling_argument(BoundKind k, const Big& d, const Big& n, const Big& eta, const Big& gamma) {
    using boost::multiprecision::log;
    using boost::multiprecision::pow;
    using boost::multiprecision::sqrt;
    const Big ln = log(n);
    switch (k) {
    case BoundKind::Thm1: return d * ln;
    case BoundKind::Thm1Eta:
    case BoundKind::Thm2:
    case BoundKind::Subgaussian: return ln / log(1 + eta);
    case BoundKind::Thm2Opt: return sqrt(d) / 2 * ln;
    case BoundKind::HoeffdingSN: return d * d * ln;
    case BoundKind::Discounted: return log((1 - pow(gamma, n)) / (1 - gamma)) / log(1 + eta);
    default: return Big(0.5);
    }
}

Outcome ac2() {
    Outcome o;
    std::mt19937_64 eng(1234);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0, skipped = 0;
    double worst = 0.0;
    std::string worst_kind;
    for (BoundKind k : kAllBoundKinds) {
        int points = 0;
        while (points < 100) {
            BoundQuery q{.kind = k};
            q.n = static_cast<std::uint64_t>(std::exp(std::log(2.0) + u(eng) * (std::log(1e7) - std::log(2.0))));
            q.delta = 0.5 + 39.5 * u(eng);
            if (k == BoundKind::HoeffdingSN || k == BoundKind::Discounted) q.delta = 0.1 + 4.9 * u(eng);
            if (is_anytime(k)) q.delta = 1.2 + 38.8 * u(eng);
            q.eta = 0.05 + 2.45 * u(eng);
            q.c = 1.05 + 2.95 * u(eng);
            q.alphabet_size = 2 + static_cast<std::size_t>(7 * u(eng));
            q.gamma = 0.5 + 0.4999 * u(eng);
            q.range_b = 0.5 + 2.0 * u(eng);
            ++points;

            const Big arg = ceiling_argument(k, Big(q.delta), Big(q.n), Big(q.eta), Big(q.gamma));
            using boost::multiprecision::abs;
            using boost::multiprecision::round;
            if (abs(arg - round(arg)) < Big("1e-9") * (1 + abs(arg))) {
                ++skipped;
                continue;
            }
            const Big ref = formula(k, Big(q.delta), Big(q.n), Big(q.eta), Big(q.c), Big(q.alphabet_size),
                                    Big(q.gamma), Big(q.range_b));
            const double got = evaluate(q).raw;
            const double rel = static_cast<double>(abs((Big(got) - ref) / ref));
            ++checked;
            if (rel > worst) {
                worst = rel;
                worst_kind = std::string(to_string(k));
            }
            if (!(rel <= 1e-12)) o.pass = false;
        }
    }
    o.detail = fmt("%d points, %d near-integer ceilings skipped, worst rel err %.1e (%s)", checked, skipped, worst,
                   worst_kind.c_str());
    return o;
}

// ---------------------------------------------------------------- AC3

// Sampling region: X-bar in [0.02, 0.98] for the [0,1] families and N >= 10.
// Outside it (tiny N, X-bar near 0 or 1, large delta) the root can sit within
// a few ulps of the domain boundary, where one ulp moves N I by more than 1e-9.
// Such an edge is returned as the nearest double outside and flagged clipped;
// any clipped edge here must be one of those or a closed domain edge.
Outcome ac3() {
    Outcome o;
    std::mt19937_64 eng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::vector<RateFamily> fams = {RateFamily::bernoulli(),   RateFamily::bounded_kl(),
                                          RateFamily::quadratic(1.0), RateFamily::quadratic(3.0),
                                          RateFamily::exponential(),  RateFamily::poisson(),
                                          RateFamily::gamma_fixed_shape(2.5)};
    int endpoints = 0, clipped = 0, bad = 0, closed_form = 0;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const RateFamily& f = fams[i % fams.size()];
        const double xbar = f.is_bernoulli_like() ? 0.02 + 0.96 * u(eng)
                            : f.kind() == FamilyKind::Quadratic ? -5.0 + 10.0 * u(eng)
                                                                : std::exp(-3.0 + 6.0 * u(eng));
        const auto n = static_cast<std::uint64_t>(std::exp(std::log(10.0) + u(eng) * std::log(1e4)));
        const double delta = 0.01 + 20.0 * u(eng);
        const double nn = static_cast<double>(n);
        for (const Endpoint e : {lower_conf(xbar, n, delta, f), upper_conf(xbar, n, delta, f)}) {
            ++endpoints;
            if (e.clipped) {
                ++clipped;
                const Interval dom = f.mu_domain();
                const bool closed_edge = (e.value == dom.lo && dom.lo_closed) || (e.value == dom.hi && dom.hi_closed);
                const double inner = std::nextafter(e.value, xbar);
                const bool ulp_limited = nn * rate(f, xbar, inner) <= delta && nn * rate(f, xbar, e.value) > delta;
                if (!(closed_edge && nn * rate(f, xbar, e.value) <= delta) && !ulp_limited) ++bad;
                continue;
            }
            const double res = std::abs(nn * rate(f, xbar, e.value) - delta);
            worst = std::max(worst, res);
            if (!(res <= 1e-9)) ++bad;
        }
        if (f.kind() == FamilyKind::Quadratic) {
            ++closed_form;
            const double r = f.range_k() * std::sqrt(delta / (2.0 * nn));
            if (std::abs(upper_conf(xbar, n, delta, f).value - (xbar + r)) > 1e-9 ||
                std::abs(lower_conf(xbar, n, delta, f).value - (xbar - r)) > 1e-9)
                ++bad;
        }
    }
    o.pass = bad == 0;
    o.detail = fmt("%d endpoints (%d clipped), worst |N I - delta| %.1e, %d quadratic closed-form checks, %d failures",
                   endpoints, clipped, worst, closed_form, bad);
    return o;
}

// ---------------------------------------------------------------- AC4

Outcome ac4() {
    Outcome o;
    int pinsker = 0, decomposition = 0, subg = 0, bad = 0;
    for (int i = 0; i <= 99; ++i)
        for (int j = 0; j <= 99; ++j) {
            const double p = i / 99.0;
            const double q = (j + 0.5) / 100.0;
            ++pinsker;
            if (!(kl(p, q) >= 2.0 * (p - q) * (p - q) - 1e-15)) ++bad;
        }
    std::mt19937_64 eng(7);
    std::gamma_distribution<double> g(1.0, 1.0);
    std::uniform_int_distribution<int> size(2, 6);
    for (int i = 0; i < 10000; ++i) {
        const int k = size(eng);
        std::vector<double> p(k), q(k);
        double sp = 0, sq = 0;
        for (int a = 0; a < k; ++a) {
            p[a] = g(eng);
            q[a] = g(eng);
            sp += p[a];
            sq += q[a];
        }
        double rhs = 0;
        for (int a = 0; a < k; ++a) {
            p[a] /= sp;
            q[a] /= sq;
            rhs += kl(p[a], q[a]);
        }
        ++decomposition;
        if (!(kl_divergence(p, q) <= rhs + 1e-12)) ++bad;
    }
    for (double eta = 0.05; eta < 2.8; eta += 0.05)
        for (double d = 0.25; d <= 50.0; d += 0.25)
            for (std::uint64_t n : {2ULL, 10ULL, 1000ULL, 1000000ULL}) {
                ++subg;
                if (!(bound_subgaussian(d, n, eta).raw <= bound_thm2(d, n, eta).raw)) ++bad;
            }
    o.pass = bad == 0;
    o.detail = fmt("pinsker %d, decomposition %d, subgaussian<=thm2 %d checks, %d failures", pinsker, decomposition,
                   subg, bad);
    return o;
}

// ---------------------------------------------------------------- AC5

Outcome ac5() {
    Outcome o;
    int trips = 0, bad = 0;
    for (BoundKind k : kAllBoundKinds)
        for (double alpha : {0.2, 0.1, 0.05, 0.01})
            for (std::uint64_t n : {100ULL, 1000ULL, 100000ULL}) {
                BoundQuery q{.kind = k, .n = n, .eta = 1.0, .c = 2.0, .alphabet_size = 3};
                q.delta = calibrate_delta(q, alpha);
                ++trips;
                if (!(evaluate(q).raw <= alpha)) ++bad;
            }
    const double anchor = calibrate_delta({.kind = BoundKind::Thm1, .n = 1000}, 0.05);
    // Independent root of 2e(delta ln 1000 + 1) e^-delta = 0.05.
    const Big root = oracle::bisect(
        [](const Big& d) {
            using boost::multiprecision::exp;
            using boost::multiprecision::log;
            return Big(0.05) - 2 * exp(Big(1)) * (d * log(Big(1000)) + 1) * exp(-d);
        },
        Big(5), Big(20));
    const bool anchor_ok = std::abs(anchor - 8.87) <= 0.05;
    o.pass = bad == 0 && anchor_ok;
    o.detail = fmt("round-trip %d/%d <= alpha; thm1 anchor delta=%.4f (oracle %.4f), required 8.87+-0.05: %s",
                   trips - bad, trips, anchor, static_cast<double>(root), anchor_ok ? "ok" : "outside");
    return o;
}

// ---------------------------------------------------------------- AC6

Outcome ac6() {
    Outcome o;
    double prev = std::numeric_limits<double>::infinity();
    std::string detail = "thm1/union at delta=8:";
    for (std::uint64_t n : {1000ULL, 10000ULL, 100000ULL}) {
        const double r = bound_thm1(8.0, n).raw / bound_union_baseline(8.0, n).raw;
        detail += fmt(" n=%llu %.3e", static_cast<unsigned long long>(n), r);
        if (!(r < prev)) o.pass = false;
        prev = r;
    }
    o.detail = detail;
    return o;
}

// ---------------------------------------------------------------- AC7

BanditConfig ac7_config(PolicyKind k) {
    BanditConfig c;
    c.arms = {ArmSchedule::constant(0.1), ArmSchedule::constant(0.2)};
    c.horizon = 10000;
    c.replications = 200;
    c.policy.kind = k;
    c.seed = 777;
    c.checkpoint_every = 1000;
    c.threads = 1;
    return c;
}

std::vector<std::string> g_ac7_reports;

Outcome ac7() {
    Outcome o;
    const BanditSummary kl = run_policy(ac7_config(PolicyKind::KLUCB));
    const BanditSummary ucb = run_policy(ac7_config(PolicyKind::HoeffdingUCB));
    g_ac7_reports.push_back(report::bandit_report(ac7_config(PolicyKind::KLUCB), kl)["result"].dump());
    g_ac7_reports.push_back(report::bandit_report(ac7_config(PolicyKind::HoeffdingUCB), ucb)["result"].dump());
    double diff = 0.0;
    for (std::size_t r = 0; r < kl.final_regret.size(); ++r) diff += ucb.final_regret[r] - kl.final_regret[r];
    diff /= static_cast<double>(kl.final_regret.size());
    o.pass = kl.mean_final_regret() <= ucb.mean_final_regret();
    o.detail = fmt("mean regret klucb %.2f (se %.2f) vs ucb1 %.2f (se %.2f), paired gap %.2f", kl.mean_final_regret(),
                   kl.std_error.back(), ucb.mean_final_regret(), ucb.std_error.back(), diff);
    return o;
}

// ---------------------------------------------------------------- AC8

Outcome ac8() {
    Outcome o;
    int compared = 0, differ = 0;
    const std::vector<DominationCase> cases = domination_cases();
    for (std::size_t i = 0; i < cases.size(); ++i) {
        ExperimentConfig c = cases[i].cfg;
        c.threads = 4;
        ++compared;
        if (report::result_json(run_experiment(c)).dump() != g_ac1_reports.at(i)) ++differ;
    }
    std::size_t j = 0;
    for (PolicyKind k : {PolicyKind::KLUCB, PolicyKind::HoeffdingUCB}) {
        BanditConfig c = ac7_config(k);
        c.threads = 3;
        ++compared;
        if (report::bandit_report(c, run_policy(c))["result"].dump() != g_ac7_reports.at(j++)) ++differ;
    }
    o.pass = differ == 0;
    o.detail = fmt("%d reports rerun with more threads, %d differ", compared, differ);
    return o;
}

} // namespace

int main() {
    std::printf("acceptance suite (hardware threads: %u)\n", resolve_threads(0));
    run("AC1", "bound domination (Monte Carlo)", ac1);
    run("AC2", "formula oracle, 1e-12 relative", ac2);
    run("AC3", "root finding, 1e-9 residual", ac3);
    run("AC4", "inequalities", ac4);
    run("AC5", "calibration round-trip and anchor", ac5);
    run("AC6", "peeling vs union gap", ac6);
    run("AC7", "klucb vs ucb1 regret", ac7);
    run("AC8", "determinism across thread counts", ac8);
    std::printf("%s\n", g_unexpected == 0 ? "acceptance: no unexpected failures" : "acceptance: FAILED");
    return g_unexpected == 0 ? 0 : 1;
}
