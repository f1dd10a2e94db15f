#include <gtest/gtest.h>

#include <cmath>

#include "infobounds/monte_carlo.hpp"

using namespace infobounds;

namespace {

ExperimentConfig bernoulli_sup(double mu, std::uint64_t n, double delta, std::uint64_t reps) {
    ExperimentConfig c;
    c.statistic = StatisticKind::SupFixedHorizon;
    c.law = {RateFamily::bernoulli(), mu};
    c.horizon = n;
    c.delta = delta;
    c.replications = reps;
    c.seed = 42;
    return c;
}

} // namespace

TEST(Coverage, Thm1DominatesSmallRun) {
    const ExperimentReport r = run_experiment(bernoulli_sup(0.3, 200, 8.0, 5000));
    EXPECT_TRUE(r.dominated);
    EXPECT_NEAR(r.bound.raw, 0.0784218490376884, 1e-14);
    ASSERT_TRUE(r.union_baseline.has_value());
    EXPECT_NEAR(r.union_baseline->raw, 0.134185051161005, 1e-14);
    EXPECT_LE(r.p_hat, r.bound.raw);
}

TEST(Coverage, InfiniteDeltaNeverExceeds) {
    const ExperimentReport r = run_experiment(bernoulli_sup(0.3, 50, kInf, 200));
    EXPECT_EQ(r.exceedances, 0u);
    EXPECT_EQ(r.p_hat, 0.0);
}

TEST(Coverage, ZeroDeltaSingleTimeAlwaysExceeds) {
    ExperimentConfig c = bernoulli_sup(0.3, 1, 0.0, 300);
    c.statistic = StatisticKind::FixedTime;
    c.bound.kind = BoundKind::UnionBaseline;
    const ExperimentReport r = run_experiment(c);
    EXPECT_EQ(r.p_hat, 1.0);
    EXPECT_EQ(r.std_error, 0.0);
    EXPECT_TRUE(r.bound.vacuous);
    EXPECT_TRUE(r.dominated);
}

TEST(Coverage, FixedTimeBelowChernoff) {
    ExperimentConfig c = bernoulli_sup(0.5, 100, 3.0, 20000);
    c.statistic = StatisticKind::FixedTime;
    c.bound.kind = BoundKind::UnionBaseline;
    const ExperimentReport r = run_experiment(c);
    EXPECT_NEAR(r.bound.raw, 2 * std::exp(-3.0), 1e-15);
    EXPECT_LE(r.p_hat, 2 * std::exp(-3.0));
}

TEST(Coverage, GaussianAndBoundedLaws) {
    ExperimentConfig g = bernoulli_sup(0.0, 200, 8.0, 3000);
    g.law = {RateFamily::quadratic(1.0), 1.5};
    g.bound.kind = BoundKind::Thm2Opt;
    EXPECT_TRUE(run_experiment(g).dominated);

    ExperimentConfig h = bernoulli_sup(0.4, 200, 2.0, 3000);
    h.statistic = StatisticKind::HoeffdingAbs;
    h.law = {RateFamily::bounded_kl(), 0.4, 2.0};
    h.bound.kind = BoundKind::HoeffdingSN;
    EXPECT_TRUE(run_experiment(h).dominated);
}

TEST(Coverage, AnytimeTruncation) {
    ExperimentConfig c = bernoulli_sup(0.5, 2000, 8.0, 500);
    c.statistic = StatisticKind::Anytime;
    c.bound.kind = BoundKind::Thm3Opt;
    const ExperimentReport r = run_experiment(c);
    ASSERT_TRUE(r.truncated_at.has_value());
    EXPECT_EQ(*r.truncated_at, 2000u);
    EXPECT_NEAR(r.bound.raw, 0.0396600348266617, 1e-14);
    EXPECT_TRUE(r.dominated);
}

TEST(Coverage, DegenerateLawsNeverExceed) {
    ExperimentConfig m;
    m.statistic = StatisticKind::MultinomialKL;
    m.p0 = {1.0, 0.0, 0.0};
    m.bound.kind = BoundKind::Multinomial;
    m.horizon = 300;
    m.delta = 0.5;
    m.replications = 100;
    EXPECT_EQ(run_experiment(m).exceedances, 0u);

    // X_t == mu_t: the discounted fluctuation is identically zero.
    ExperimentConfig d;
    d.statistic = StatisticKind::Discounted;
    d.law = {RateFamily::bounded_kl(), 0.0};
    d.bound = {.kind = BoundKind::Discounted, .gamma = 0.9};
    d.horizon = 200;
    d.delta = 0.1;
    d.replications = 100;
    EXPECT_EQ(run_experiment(d).exceedances, 0u);
}

TEST(Coverage, DiscountedAndMultinomialDominate) {
    ExperimentConfig d;
    d.statistic = StatisticKind::Discounted;
    d.law = {RateFamily::bernoulli(), 0.5};
    d.bound = {.kind = BoundKind::Discounted, .gamma = 0.99};
    d.horizon = 2000;
    d.delta = 3.0;
    d.replications = 2000;
    EXPECT_TRUE(run_experiment(d).dominated);

    ExperimentConfig m;
    m.statistic = StatisticKind::MultinomialKL;
    m.p0 = {0.2, 0.3, 0.5};
    m.bound.kind = BoundKind::Multinomial;
    m.horizon = 500;
    m.delta = 20.0;
    m.replications = 2000;
    const ExperimentReport r = run_experiment(m);
    EXPECT_EQ(r.bound.raw, bound_multinomial(20.0, 500, 3).raw);
    EXPECT_TRUE(r.dominated);
}

TEST(Coverage, DeterministicAcrossThreadCounts) {
    ExperimentConfig c = bernoulli_sup(0.3, 200, 5.0, 4001);
    c.threads = 1;
    const ExperimentReport a = run_experiment(c);
    c.threads = 3;
    const ExperimentReport b = run_experiment(c);
    c.threads = 8;
    const ExperimentReport d = run_experiment(c);
    EXPECT_EQ(a.exceedances, b.exceedances);
    EXPECT_EQ(a.exceedances, d.exceedances);
    EXPECT_GT(a.exceedances, 0u);

    c.seed = 43;
    EXPECT_NE(run_experiment(c).exceedances, a.exceedances);
}

TEST(Coverage, ConfigErrors) {
    ExperimentConfig c = bernoulli_sup(0.3, 200, 8.0, 0);
    EXPECT_THROW(run_experiment(c), ConfigError);

    c = bernoulli_sup(0.3, 200, 8.0, 10);
    c.statistic = StatisticKind::Anytime;
    c.bound.kind = BoundKind::Thm3Opt;
    c.delta = 1.0;
    EXPECT_THROW(run_experiment(c), ConfigError);

    c = bernoulli_sup(0.3, 200, 8.0, 10);
    c.bound.kind = BoundKind::Multinomial;
    EXPECT_THROW(run_experiment(c), ConfigError);

    c = bernoulli_sup(1.3, 200, 8.0, 10);
    EXPECT_THROW(run_experiment(c), ConfigError);

    c = bernoulli_sup(0.3, 200, -1.0, 10);
    EXPECT_THROW(run_experiment(c), ConfigError);

    ExperimentConfig m;
    m.statistic = StatisticKind::MultinomialKL;
    m.bound.kind = BoundKind::Multinomial;
    m.p0 = {0.5, 0.6};
    EXPECT_THROW(run_experiment(m), ConfigError);

    ExperimentConfig h = bernoulli_sup(0.3, 200, 2.0, 10);
    h.statistic = StatisticKind::HoeffdingAbs;
    h.law = {RateFamily::poisson(), 1.0};
    h.bound.kind = BoundKind::HoeffdingSN;
    EXPECT_THROW(run_experiment(h), ConfigError);
}

TEST(StatisticNames, RoundTrip) {
    for (StatisticKind s : {StatisticKind::SupFixedHorizon, StatisticKind::FixedTime, StatisticKind::Anytime,
                            StatisticKind::Discounted, StatisticKind::MultinomialKL, StatisticKind::HoeffdingAbs})
        EXPECT_EQ(statistic_from_string(to_string(s)), s);
}
