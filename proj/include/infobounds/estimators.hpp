#pragma once

// Online sufficient statistics for self-normalized averages.
//
// The observation indicator passed to update() must be predictable: it may
// depend on past observations only, never on the value being observed. The
// estimators cannot check this; the bounds are only valid when it holds.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "infobounds/errors.hpp"

namespace infobounds {

/// S(n) = sum eps_t X_t, N(n) = sum eps_t over a clock t.
struct StreamState {
    std::uint64_t t = 0;
    double sum = 0.0;
    std::uint64_t count = 0;

    std::optional<double> mean() const {
        if (count == 0) return std::nullopt;
        return sum / static_cast<double>(count);
    }
};

[[nodiscard]] inline StreamState update(StreamState s, bool observed, double x) {
    ++s.t;
    if (observed) {
        s.sum += x;
        ++s.count;
    }
    return s;
}

/// Exponentially discounted sums anchored at the current time n:
/// every weight is gamma^{n-t}.
struct DiscountedState {
    double gamma = 0.99;
    std::uint64_t n = 0;
    double sum = 0.0;          // S_gamma(n)
    double count = 0.0;        // N_gamma(n)
    double count_sq = 0.0;     // N_{gamma^2}(n)
    double mean_sum = 0.0;     // M_gamma(n); needs the true means, simulation only
    double mass = 0.0;         // nu_gamma(n)

    static DiscountedState with_gamma(double gamma) {
        if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("discounted estimator: gamma must lie in (0,1)");
        DiscountedState s;
        s.gamma = gamma;
        return s;
    }

    std::optional<double> mean() const {
        if (count <= 0.0) return std::nullopt;
        return sum / count;
    }
};

/// Scale every sum by its discount, then add the new term. The scaling happens
/// whether or not the step is observed, so weights track the current time.
[[nodiscard]] inline DiscountedState update_discounted(DiscountedState s, bool observed, double x, double mu_t = 0.0) {
    const double g = s.gamma;
    const double e = observed ? 1.0 : 0.0;
    ++s.n;
    s.sum = g * s.sum + e * x;
    s.count = g * s.count + e;
    s.count_sq = g * g * s.count_sq + e;
    s.mean_sum = g * s.mean_sum + e * mu_t;
    s.mass = g * s.mass + 1.0;
    return s;
}

/// Counts and frequencies over a finite alphabet {0, ..., k-1}.
class EmpiricalDistribution {
public:
    explicit EmpiricalDistribution(std::size_t alphabet_size) : counts_(alphabet_size, 0) {
        if (alphabet_size == 0) throw ConfigError("empirical distribution: empty alphabet");
    }

    void add(std::size_t symbol) {
        if (symbol >= counts_.size()) throw DomainError("empirical distribution: symbol outside alphabet");
        ++counts_[symbol];
        ++total_;
    }

    std::size_t alphabet_size() const noexcept { return counts_.size(); }
    std::uint64_t total() const noexcept { return total_; }
    std::span<const std::uint64_t> counts() const noexcept { return counts_; }

    double frequency(std::size_t symbol) const {
        if (total_ == 0) throw DomainError("empirical distribution undefined for an empty sample");
        return static_cast<double>(counts_.at(symbol)) / static_cast<double>(total_);
    }

    std::vector<double> probabilities() const {
        if (total_ == 0) throw DomainError("empirical distribution undefined for an empty sample");
        std::vector<double> p(counts_.size());
        for (std::size_t a = 0; a < counts_.size(); ++a)
            p[a] = static_cast<double>(counts_[a]) / static_cast<double>(total_);
        return p;
    }

private:
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

/// Empirical law of `symbols` over `alphabet`.
template <typename Symbol>
EmpiricalDistribution multinomial_counts(std::span<const Symbol> symbols, std::span<const Symbol> alphabet) {
    if (symbols.empty()) throw DomainError("multinomial_counts: empirical law of an empty sequence is undefined");
    EmpiricalDistribution dist(alphabet.size());
    for (const Symbol& s : symbols) {
        const auto it = std::find(alphabet.begin(), alphabet.end(), s);
        if (it == alphabet.end()) throw DomainError("multinomial_counts: symbol not in alphabet");
        dist.add(static_cast<std::size_t>(it - alphabet.begin()));
    }
    return dist;
}

template <typename Symbol>
EmpiricalDistribution multinomial_counts(const std::vector<Symbol>& symbols, const std::vector<Symbol>& alphabet) {
    return multinomial_counts(std::span<const Symbol>(symbols), std::span<const Symbol>(alphabet));
}

} // namespace infobounds
