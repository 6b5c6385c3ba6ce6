#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "heyde/distribution.hpp"
#include "heyde/finite_difference.hpp"
#include "heyde/group.hpp"
#include "heyde/linear_forms.hpp"
#include "heyde/rational.hpp"
#include "heyde/symmetry.hpp"
#include "heyde/tolerances.hpp"

namespace heyde {
namespace oracle {

/// Counter-based splitmix64: output i of the stream seeded with s is
/// mix(s + (i + 1) * golden gamma), identical to the reference generator's
/// i-th output from state s. Counter addressing keeps every draw
/// reproducible independent of evaluation order.
inline std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Sequential view of the counter-based stream.
class SplitMix {
public:
    explicit SplitMix(std::uint64_t seed, std::uint64_t start_counter = 0)
        : seed_(seed), counter_(start_counter) {}

    std::uint64_t next() { return splitmix64(seed_, counter_++); }

    /// Uniform in [0, 1) with 53 random bits.
    double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [0, n) by rejection-free scaling; fine for the small n
    /// used here.
    std::int64_t below(std::int64_t n) {
        return static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(n));
    }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

/// Exact joint law of (L1, L2) on X x X, indexed i1 * |X| + i2.
struct JointLaw {
    Group component;
    std::vector<double> probs;

    double prob(std::int64_t i1, std::int64_t i2) const {
        return probs[static_cast<std::size_t>(i1 * component.order() + i2)];
    }
};

/// Exact joint law by per-variable convolution of pair shifts. Accepts any
/// number of variables >= 1; the LinearFormsSpec overload below carries the
/// n >= 2 contract of the symmetry machinery.
inline JointLaw joint_law(const Group& g, const std::vector<std::int64_t>& a,
                          const std::vector<std::int64_t>& b,
                          const std::vector<Distribution>& mus) {
    if (a.size() != b.size() || a.size() != mus.size() || mus.empty())
        throw std::invalid_argument("coefficient and distribution counts must match");
    for (const Distribution& mu : mus)
        if (mu.group() != g)
            throw GroupMismatchError("distribution on a different group");
    const std::int64_t n = g.order();
    require_enumerable(n * n);
    std::vector<double> cur(static_cast<std::size_t>(n * n), 0.0);
    cur[0] = 1.0;  // both partial sums start at zero
    std::vector<double> next(cur.size());
    for (std::size_t j = 0; j < mus.size(); ++j) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::int64_t xi = 0; xi < n; ++xi) {
            const double mass = mus[j].mass_at(xi);
            if (mass == 0.0) continue;
            const Element x = g.element_at(xi);
            const auto t1 = detail::shift_table(g, scalar_mul(a[j], x).coords());
            const auto t2 = detail::shift_table(g, scalar_mul(b[j], x).coords());
            for (std::int64_t i1 = 0; i1 < n; ++i1) {
                const std::int64_t r1 = t1[static_cast<std::size_t>(i1)] * n;
                const std::int64_t base = i1 * n;
                for (std::int64_t i2 = 0; i2 < n; ++i2) {
                    const double p = cur[static_cast<std::size_t>(base + i2)];
                    if (p != 0.0)
                        next[static_cast<std::size_t>(r1 + t2[static_cast<std::size_t>(i2)])] +=
                            p * mass;
                }
            }
        }
        cur.swap(next);
    }
    return JointLaw{g, std::move(cur)};
}

inline JointLaw joint_law(const Group& g, const LinearFormsSpec& forms,
                          const std::vector<Distribution>& mus) {
    validate_instance(g, forms, mus);
    return joint_law(g, forms.a(), forms.b(), mus);
}

/// The law of (L1, -L2).
inline JointLaw negate_second_form(const JointLaw& law) {
    const Group& g = law.component;
    const std::int64_t n = g.order();
    std::vector<std::int64_t> neg(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
        neg[static_cast<std::size_t>(i)] = (-g.element_at(i)).index();
    std::vector<double> probs(law.probs.size());
    for (std::int64_t i1 = 0; i1 < n; ++i1)
        for (std::int64_t i2 = 0; i2 < n; ++i2)
            probs[static_cast<std::size_t>(i1 * n + neg[static_cast<std::size_t>(i2)])] =
                law.probs[static_cast<std::size_t>(i1 * n + i2)];
    return JointLaw{g, std::move(probs)};
}

/// Total variation distance (1/2) sum |p - q|.
inline double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
    return 0.5 * sum;
}

inline double tv_distance(const JointLaw& p, const JointLaw& q) {
    if (p.component != q.component)
        throw GroupMismatchError("joint laws over different groups");
    return tv_distance(p.probs, q.probs);
}

inline std::vector<double> first_marginal(const JointLaw& law) {
    const std::int64_t n = law.component.order();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (std::int64_t i1 = 0; i1 < n; ++i1)
        for (std::int64_t i2 = 0; i2 < n; ++i2)
            out[static_cast<std::size_t>(i1)] += law.prob(i1, i2);
    return out;
}

inline std::vector<double> second_marginal(const JointLaw& law) {
    const std::int64_t n = law.component.order();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (std::int64_t i1 = 0; i1 < n; ++i1)
        for (std::int64_t i2 = 0; i2 < n; ++i2)
            out[static_cast<std::size_t>(i2)] += law.prob(i1, i2);
    return out;
}

}  // namespace oracle

/// Distributional form of the symmetry condition, checked against the
/// exact joint law: (L1, L2) and (L1, -L2) must coincide in total
/// variation. Independent of the characteristic-function sweep.
inline HeydeVerdict check_heyde_exact(const Group& g, const LinearFormsSpec& forms,
                                      const std::vector<Distribution>& mus,
                                      double tol = kTvTol) {
    const oracle::JointLaw law = oracle::joint_law(g, forms, mus);
    const oracle::JointLaw negated = oracle::negate_second_form(law);
    HeydeVerdict verdict;
    verdict.tolerance = tol;
    verdict.max_violation = oracle::tv_distance(law, negated);
    verdict.holds = verdict.max_violation <= tol;
    if (!verdict.holds) {
        const std::int64_t n = g.order();
        std::int64_t worst = 0;
        double best = -1.0;
        for (std::int64_t i = 0; i < n * n; ++i) {
            const double d = std::abs(law.probs[static_cast<std::size_t>(i)] -
                                      negated.probs[static_cast<std::size_t>(i)]);
            if (d > best) {
                best = d;
                worst = i;
            }
        }
        verdict.witness = std::array<std::vector<std::int64_t>, 2>{
            g.coords_at(worst / n), g.coords_at(worst % n)};
    }
    return verdict;
}

namespace oracle {

/// Monte Carlo cross-check of the exact machinery.
struct SampleReport {
    std::string algorithm;  // always "splitmix64"
    std::uint64_t seed = 0;
    std::int64_t trials = 0;
    double tv_empirical_pair = 0.0;  // empirical (L1, L2) vs empirical (L1, -L2)
    double tv_vs_exact = 0.0;        // empirical (L1, L2) vs exact joint law
    double chi_square = 0.0;         // against the exact law, over its support
    std::int64_t chi_cells = 0;
};

inline SampleReport sample_check(const Group& g, const LinearFormsSpec& forms,
                                 const std::vector<Distribution>& mus,
                                 std::int64_t trials, std::uint64_t seed) {
    validate_instance(g, forms, mus);
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    const std::int64_t n = g.order();
    require_enumerable(n * n);
    const std::size_t n_vars = mus.size();
    std::vector<std::vector<double>> cum(n_vars);
    for (std::size_t j = 0; j < n_vars; ++j) {
        cum[j].resize(static_cast<std::size_t>(n));
        double acc = 0.0;
        for (std::int64_t i = 0; i < n; ++i) {
            acc += mus[j].mass_at(i);
            cum[j][static_cast<std::size_t>(i)] = acc;
        }
    }
    const auto& moduli = g.moduli();
    const std::size_t rank = moduli.size();
    std::vector<std::vector<std::int64_t>> coords;
    coords.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) coords.push_back(g.coords_at(i));
    std::vector<double> counts(static_cast<std::size_t>(n * n), 0.0);
    std::vector<std::int64_t> l1(rank), l2(rank);
    for (std::int64_t t = 0; t < trials; ++t) {
        std::fill(l1.begin(), l1.end(), 0);
        std::fill(l2.begin(), l2.end(), 0);
        for (std::size_t j = 0; j < n_vars; ++j) {
            const double u = static_cast<double>(
                                 splitmix64(seed, static_cast<std::uint64_t>(t) * n_vars + j) >> 11) *
                             0x1.0p-53;
            const auto& c = cum[j];
            const std::int64_t xi =
                std::min<std::int64_t>(n - 1, std::upper_bound(c.begin(), c.end(), u) -
                                                  c.begin());
            for (std::size_t k = 0; k < rank; ++k) {
                l1[k] = detail::mod_reduce(l1[k] + forms.a()[j] % moduli[k] *
                                                        coords[xi][k],
                                           moduli[k]);
                l2[k] = detail::mod_reduce(l2[k] + forms.b()[j] % moduli[k] *
                                                        coords[xi][k],
                                           moduli[k]);
            }
        }
        counts[static_cast<std::size_t>(g.index_of(l1) * n + g.index_of(l2))] += 1.0;
    }
    std::vector<double> empirical(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        empirical[i] = counts[i] / static_cast<double>(trials);
    const JointLaw empirical_law{g, empirical};
    const JointLaw negated = negate_second_form(empirical_law);
    const JointLaw exact = joint_law(g, forms, mus);
    SampleReport report;
    report.algorithm = "splitmix64";
    report.seed = seed;
    report.trials = trials;
    report.tv_empirical_pair = tv_distance(empirical_law, negated);
    report.tv_vs_exact = tv_distance(empirical_law, exact);
    for (std::size_t i = 0; i < exact.probs.size(); ++i) {
        if (exact.probs[i] > 0.0) {
            const double expected = exact.probs[i] * static_cast<double>(trials);
            const double diff = counts[i] - expected;
            report.chi_square += diff * diff / expected;
            ++report.chi_cells;
        }
    }
    return report;
}

/// What a search witness must violate in addition to passing the symmetry
/// sweep.
enum class SearchGate {
    NonDegenerate,  // some law is not a point mass
    NonGaussian,    // some law fails the parallelogram-identity test
};

struct SearchOptions {
    /// Grid mode when set: exhaustive sweep over all rational mass vectors
    /// with denominator up to this value. Otherwise random mode.
    std::optional<std::int64_t> grid_denominator;
    std::int64_t random_trials = 10000;
    std::uint64_t seed = 0;
    /// Use the same distribution for every variable.
    bool tie_distributions = false;
    SearchGate gate = SearchGate::NonDegenerate;
    double equation_tol = kEquationTol;
    double classify_tol = kClassifyTol;
};

struct SearchResult {
    bool found = false;
    std::vector<Distribution> witness;  // empty unless found
    std::int64_t candidates_checked = 0;
    /// Grid mode only: the whole grid was enumerated without a hit.
    bool exhausted = false;
};

/// All distinct probability vectors with the given number of slots whose
/// masses are rationals of denominator at most max_denominator, in a
/// deterministic order.
inline std::vector<std::vector<Rational>> rational_mass_grid(std::int64_t slots,
                                                             std::int64_t max_denominator) {
    if (slots < 1 || max_denominator < 1)
        throw std::invalid_argument("grid needs at least one slot and denominator 1");
    std::set<std::vector<std::pair<std::int64_t, std::int64_t>>> seen;
    std::vector<std::vector<Rational>> out;
    std::vector<std::int64_t> parts(static_cast<std::size_t>(slots), 0);
    for (std::int64_t den = 1; den <= max_denominator; ++den) {
        // Enumerate numerator vectors summing to den.
        const std::function<void(std::int64_t, std::int64_t)> rec =
            [&](std::int64_t slot, std::int64_t remaining) {
                if (slot == slots - 1) {
                    parts[static_cast<std::size_t>(slot)] = remaining;
                    std::vector<std::pair<std::int64_t, std::int64_t>> key;
                    std::vector<Rational> masses;
                    key.reserve(parts.size());
                    masses.reserve(parts.size());
                    for (const std::int64_t p : parts) {
                        const Rational r(p, den);
                        key.emplace_back(r.num(), r.den());
                        masses.push_back(r);
                    }
                    if (seen.insert(std::move(key)).second) out.push_back(std::move(masses));
                    return;
                }
                for (std::int64_t take = 0; take <= remaining; ++take) {
                    parts[static_cast<std::size_t>(slot)] = take;
                    rec(slot + 1, remaining - take);
                }
            };
        rec(0, den);
    }
    return out;
}

namespace detail_search {

inline bool gate_passes(const std::vector<Distribution>& mus, SearchGate gate,
                        double classify_tol) {
    for (const Distribution& mu : mus) {
        if (gate == SearchGate::NonDegenerate && !is_degenerate(mu, classify_tol))
            return true;
        if (gate == SearchGate::NonGaussian && !is_gaussian(mu, classify_tol))
            return true;
    }
    return false;
}

}  // namespace detail_search

/// Searches for a tuple of input laws that passes the symmetry sweep while
/// violating the target conclusion (the gate). Over elementary p-groups
/// with admissible coefficients no such tuple exists; the searcher is the
/// adversarial probe for that claim, and doubles as a recovery tool for
/// planted instances elsewhere.
inline SearchResult search_nondegenerate(const Group& g, const LinearFormsSpec& forms,
                                         const SearchOptions& options = {}) {
    const std::size_t n_vars = forms.count();
    SearchResult result;
    const auto consider = [&](const std::vector<Distribution>& mus) {
        ++result.candidates_checked;
        if (!detail_search::gate_passes(mus, options.gate, options.classify_tol))
            return false;
        if (!check_heyde_cf(g, forms, mus, options.equation_tol).holds) return false;
        result.found = true;
        result.witness = mus;
        return true;
    };
    if (options.grid_denominator) {
        const auto grid = rational_mass_grid(g.order(), *options.grid_denominator);
        std::vector<Distribution> candidates;
        candidates.reserve(grid.size());
        for (const auto& masses : grid)
            candidates.push_back(Distribution::from_rational_weights(g, masses));
        if (options.tie_distributions) {
            for (const Distribution& c : candidates) {
                if (consider(std::vector<Distribution>(n_vars, c))) return result;
            }
        } else {
            // Odometer over tuples of grid points.
            std::vector<std::size_t> pick(n_vars, 0);
            while (true) {
                std::vector<Distribution> mus;
                mus.reserve(n_vars);
                for (const std::size_t p : pick) mus.push_back(candidates[p]);
                if (consider(mus)) return result;
                std::size_t slot = 0;
                while (slot < n_vars && ++pick[slot] == candidates.size()) {
                    pick[slot] = 0;
                    ++slot;
                }
                if (slot == n_vars) break;
            }
        }
        result.exhausted = true;
        return result;
    }
    SplitMix rng(options.seed);
    for (std::int64_t t = 0; t < options.random_trials; ++t) {
        std::vector<Distribution> mus;
        mus.reserve(n_vars);
        const std::size_t draws = options.tie_distributions ? 1 : n_vars;
        for (std::size_t j = 0; j < draws; ++j) {
            std::vector<double> weights(static_cast<std::size_t>(g.order()));
            for (double& w : weights) w = -std::log1p(-rng.u01());
            mus.push_back(Distribution::from_weights(g, weights));
        }
        while (mus.size() < n_vars) mus.push_back(mus.front());
        if (consider(mus)) return result;
    }
    return result;
}

/// Node and candidate counters for the parallelogram-equation search, so
/// tests can confirm the search space was actually explored.
struct Fe1SearchStats {
    std::int64_t candidate_values = 0;
    std::int64_t nodes = 0;
    std::int64_t leaves = 0;
};

/// Exhaustive backtracking search for a nonzero nonnegative rational
/// solution of phi(u+v) + phi(u-v) = 2 phi(u) + 2 phi(v) with denominators
/// bounded by max_denominator and values bounded by value_cap. phi(0) = 0
/// is forced by the equation at u = v = 0. Assignments proceed in index
/// order; every equation is checked as soon as its last participant is
/// assigned, so contradictions prune immediately. Exact arithmetic
/// throughout.
inline std::optional<RationalGroupFunction> find_fe1_solution(
    const Group& domain, std::int64_t max_denominator, std::int64_t value_cap,
    Fe1SearchStats* stats = nullptr) {
    if (max_denominator < 1 || value_cap < 0)
        throw std::invalid_argument("need denominator >= 1 and value cap >= 0");
    const std::int64_t n = domain.order();
    require_enumerable(n * n);
    std::set<Rational> candidate_set;
    for (std::int64_t den = 1; den <= max_denominator; ++den)
        for (std::int64_t num = 0; num <= value_cap * den; ++num)
            candidate_set.insert(Rational(num, den));
    const std::vector<Rational> candidates(candidate_set.begin(), candidate_set.end());
    Fe1SearchStats local;
    local.candidate_values = static_cast<std::int64_t>(candidates.size());

    struct Equation {
        std::int64_t u, v, sum, diff;
    };
    // Equations grouped by their largest participating index.
    std::vector<std::vector<Equation>> by_last(static_cast<std::size_t>(n));
    const auto& moduli = domain.moduli();
    for (std::int64_t u = 0; u < n; ++u) {
        const auto cu = domain.coords_at(u);
        for (std::int64_t v = 0; v < n; ++v) {
            const auto cv = domain.coords_at(v);
            std::vector<std::int64_t> s(cu.size()), d(cu.size());
            for (std::size_t k = 0; k < cu.size(); ++k) {
                s[k] = heyde::detail::mod_reduce(cu[k] + cv[k], moduli[k]);
                d[k] = heyde::detail::mod_reduce(cu[k] - cv[k], moduli[k]);
            }
            const Equation eq{u, v, domain.index_of(s), domain.index_of(d)};
            const std::int64_t last =
                std::max(std::max(eq.u, eq.v), std::max(eq.sum, eq.diff));
            by_last[static_cast<std::size_t>(last)].push_back(eq);
        }
    }

    std::vector<Rational> phi(static_cast<std::size_t>(n), Rational(0));
    const auto consistent_at = [&](std::int64_t last) {
        for (const Equation& eq : by_last[static_cast<std::size_t>(last)]) {
            const Rational lhs = phi[static_cast<std::size_t>(eq.sum)] +
                                 phi[static_cast<std::size_t>(eq.diff)];
            const Rational rhs = (phi[static_cast<std::size_t>(eq.u)] +
                                  phi[static_cast<std::size_t>(eq.v)]) *
                                 Rational(2);
            if (lhs != rhs) return false;
        }
        return true;
    };

    std::optional<RationalGroupFunction> found;
    const std::function<void(std::int64_t)> descend = [&](std::int64_t index) {
        if (found) return;
        if (index == n) {
            ++local.leaves;
            for (const Rational& value : phi) {
                if (!value.is_zero()) {
                    found = RationalGroupFunction(domain, phi);
                    return;
                }
            }
            return;
        }
        for (const Rational& value : candidates) {
            phi[static_cast<std::size_t>(index)] = value;
            ++local.nodes;
            if (consistent_at(index)) descend(index + 1);
            if (found) return;
        }
        phi[static_cast<std::size_t>(index)] = Rational(0);
    };
    // Index 0 is phi(0) = 0; the origin equation would force it anyway.
    if (consistent_at(0)) descend(1);
    if (stats) *stats = local;
    return found;
}

}  // namespace oracle
}  // namespace heyde
