// Confidence intervals for a Bernoulli mean, at a fixed radius and at a risk
// level calibrated for a whole horizon.

#include <cstdio>

#include "infobounds/infobounds.hpp"

using namespace infobounds;

int main() {
    const RateFamily bern = RateFamily::bernoulli();

    std::printf("fixed delta = 2\n");
    for (std::uint64_t n : {10, 100, 1000, 10000}) {
        const ConfidenceSet cs = confidence_interval(0.3, n, 2.0, bern);
        std::printf("  N=%-6llu [%.6f, %.6f]\n", static_cast<unsigned long long>(n), cs.lower, cs.upper);
    }

    // Valid simultaneously for all N <= 1000 with probability >= 0.95.
    const BoundQuery q{.kind = BoundKind::Thm1, .n = 1000};
    const double delta = calibrate_delta(q, 0.05);
    std::printf("\nthm1, alpha = 0.05, n = 1000: delta = %.6f\n", delta);
    for (std::uint64_t n : {10, 100, 1000}) {
        const ConfidenceSet cs = interval_with_certificate(0.3, n, 0.05, bern, q);
        std::printf("  N=%-6llu [%.6f, %.6f]  quadratic: [%.6f, %.6f]\n", static_cast<unsigned long long>(n), cs.lower,
                    cs.upper, lower_conf(0.3, n, delta, RateFamily::quadratic(1.0)).value,
                    upper_conf(0.3, n, delta, RateFamily::quadratic(1.0)).value);
    }

    std::printf("\nthm1 / union at delta = 8\n");
    for (std::uint64_t n : {1000, 10000, 100000})
        std::printf("  n=%-7llu %.3e\n", static_cast<unsigned long long>(n),
                    bound_thm1(8.0, n).raw / bound_union_baseline(8.0, n).raw);
}
