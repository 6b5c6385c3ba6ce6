#pragma once

// Deterministic random generators for property tests. Everything is driven
// by heyde::oracle::SplitMix so a failing case can be reproduced from the
// seed alone.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "heyde/distribution.hpp"
#include "heyde/group.hpp"
#include "heyde/linear_forms.hpp"
#include "heyde/oracle.hpp"
#include "heyde/rational.hpp"

namespace test_support {

/// All moduli lists (nondecreasing) whose product is at most max_order.
inline std::vector<std::vector<std::int64_t>> moduli_lists_up_to(std::int64_t max_order) {
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> current;
    const auto recurse = [&](auto&& self, std::int64_t floor, std::int64_t budget) -> void {
        if (!current.empty()) out.push_back(current);
        for (std::int64_t m = floor; m <= budget; ++m) {
            current.push_back(m);
            self(self, m, budget / m);
            current.pop_back();
        }
    };
    recurse(recurse, 2, max_order);
    return out;
}

inline heyde::Group random_group(heyde::oracle::SplitMix& rng, std::int64_t max_order) {
    const auto lists = moduli_lists_up_to(max_order);
    return heyde::Group(lists[static_cast<std::size_t>(
        rng.below(static_cast<std::uint64_t>(lists.size())))]);
}

/// Rational masses k_i / d with d <= max_denominator, by dropping d unit
/// grains into the group's slots. Degenerate and sparse outcomes are
/// possible and wanted.
inline heyde::Distribution random_distribution(heyde::oracle::SplitMix& rng,
                                               const heyde::Group& g,
                                               std::int64_t max_denominator) {
    const std::uint64_t d =
        1 + rng.below(static_cast<std::uint64_t>(max_denominator));
    std::vector<heyde::Rational> weights(static_cast<std::size_t>(g.order()),
                                         heyde::Rational(0));
    for (std::uint64_t grain = 0; grain < d; ++grain) {
        const std::uint64_t slot = rng.below(static_cast<std::uint64_t>(g.order()));
        weights[static_cast<std::size_t>(slot)] += heyde::Rational(1);
    }
    return heyde::Distribution::from_rational_weights(g, weights);
}

inline heyde::Distribution random_nonvanishing_distribution(heyde::oracle::SplitMix& rng,
                                                            const heyde::Group& g,
                                                            std::int64_t max_denominator) {
    while (true) {
        heyde::Distribution mu = random_distribution(rng, g, max_denominator);
        if (char_function(mu).nonvanishing(1e-6)) return mu;
    }
}

inline std::int64_t random_coefficient(heyde::oracle::SplitMix& rng, std::int64_t bound) {
    return static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(2 * bound + 1))) -
           bound;
}

inline heyde::LinearFormsSpec random_forms(heyde::oracle::SplitMix& rng, std::size_t n,
                                           std::int64_t bound) {
    std::vector<std::int64_t> a, b;
    for (std::size_t j = 0; j < n; ++j) {
        a.push_back(random_coefficient(rng, bound));
        b.push_back(random_coefficient(rng, bound));
    }
    return heyde::LinearFormsSpec(a, b);
}

/// Forms whose coefficients pass the admissibility gate for g. Throws if
/// none are found; groups of exponent two admit no passing forms at all.
inline heyde::LinearFormsSpec random_admissible_forms(heyde::oracle::SplitMix& rng,
                                                      const heyde::Group& g, std::size_t n,
                                                      std::int64_t bound) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
        heyde::LinearFormsSpec forms = random_forms(rng, n, bound);
        if (heyde::check_coefficients(g, forms).pass) return forms;
    }
    throw std::runtime_error("no admissible forms found");
}

}  // namespace test_support
