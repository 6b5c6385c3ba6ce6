#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "heyde/finite_difference.hpp"
#include "heyde/group.hpp"
#include "heyde/rational.hpp"
#include "heyde/tolerances.hpp"

namespace heyde {

/// Thrown by Fourier inversion when the candidate table is not a
/// characteristic function: some recovered mass is negative beyond
/// tolerance, or a non-Hermitian table leaves an imaginary remainder.
class NotPositiveDefiniteError : public std::runtime_error {
public:
    NotPositiveDefiniteError(double most_negative_mass, double max_imaginary_part)
        : std::runtime_error(
              "inverse transform is not a distribution (most negative mass " +
              std::to_string(most_negative_mass) + ", largest imaginary remainder " +
              std::to_string(max_imaginary_part) + ")"),
          most_negative_mass_(most_negative_mass),
          max_imaginary_part_(max_imaginary_part) {}

    double most_negative_mass() const { return most_negative_mass_; }
    double max_imaginary_part() const { return max_imaginary_part_; }

private:
    double most_negative_mass_;
    double max_imaginary_part_;
};

/// Thrown by operations that need a nonvanishing characteristic function
/// (logarithms of products). Carries which distribution and which
/// character witnessed the zero.
class VanishingCharFunctionError : public std::runtime_error {
public:
    VanishingCharFunctionError(std::size_t distribution_index,
                               std::vector<std::int64_t> character_coords)
        : std::runtime_error("characteristic function of distribution " +
                             std::to_string(distribution_index) +
                             " vanishes at a character"),
          distribution_index_(distribution_index),
          character_coords_(std::move(character_coords)) {}

    std::size_t distribution_index() const { return distribution_index_; }
    const std::vector<std::int64_t>& character_coords() const { return character_coords_; }

private:
    std::size_t distribution_index_;
    std::vector<std::int64_t> character_coords_;
};

namespace detail {

/// Roots of unity exp(2 pi i s / L) for s in [0, L).
inline std::vector<std::complex<double>> root_table(std::int64_t L) {
    std::vector<std::complex<double>> roots(static_cast<std::size_t>(L));
    for (std::int64_t s = 0; s < L; ++s)
        roots[static_cast<std::size_t>(s)] =
            std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(s) /
                                static_cast<double>(L));
    return roots;
}

}  // namespace detail

/// A characteristic function tabulated over the dual group. Tables built
/// by char_function satisfy value(0) = 1, |value| <= 1 and Hermitian
/// symmetry up to rounding; tables built directly are candidate inputs
/// for inversion and may violate them, which inversion then reports.
class CharFunction {
public:
    CharFunction(Group dual_group, std::vector<std::complex<double>> values)
        : dual_(std::move(dual_group)), values_(std::move(values)) {
        if (static_cast<std::int64_t>(values_.size()) != dual_.order())
            throw std::invalid_argument("value table size does not match group order");
    }

    /// The dual group carries the same moduli as the base group.
    const Group& dual_group() const { return dual_; }
    const std::vector<std::complex<double>>& values() const { return values_; }

    const std::complex<double>& value_at(std::int64_t index) const {
        return values_[static_cast<std::size_t>(index)];
    }
    const std::complex<double>& value(const Character& y) const {
        if (y.group() != dual_)
            throw GroupMismatchError("character from a different group");
        return value_at(y.index());
    }

    double min_modulus() const {
        double m = std::abs(values_.front());
        for (const auto& v : values_) m = std::min(m, std::abs(v));
        return m;
    }

    double max_modulus() const {
        double m = 0.0;
        for (const auto& v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    bool nonvanishing(double tol = kClassifyTol) const { return min_modulus() > tol; }

private:
    Group dual_;
    std::vector<std::complex<double>> values_;
};

/// A probability distribution on a finite Abelian group, stored as a dense
/// table of nonnegative masses summing to 1.
class Distribution {
public:
    Distribution(Group group, std::vector<double> masses)
        : group_(std::move(group)), masses_(std::move(masses)) {
        if (static_cast<std::int64_t>(masses_.size()) != group_.order())
            throw std::invalid_argument("mass table size does not match group order");
        double sum = 0.0;
        for (double& m : masses_) {
            if (m < -kAlgebraTol)
                throw std::invalid_argument("negative mass " + std::to_string(m));
            if (m < 0.0) m = 0.0;
            sum += m;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("masses sum to " + std::to_string(sum) +
                                        ", expected 1");
        if (sum != 1.0)
            for (double& m : masses_) m /= sum;
    }

    /// Normalizes an arbitrary nonnegative weight table.
    static Distribution from_weights(Group group, const std::vector<double>& weights) {
        double sum = 0.0;
        for (const double w : weights) {
            if (w < 0.0) throw std::invalid_argument("negative weight");
            sum += w;
        }
        if (sum <= 0.0) throw std::invalid_argument("weights sum to zero");
        std::vector<double> masses(weights.size());
        for (std::size_t i = 0; i < weights.size(); ++i) masses[i] = weights[i] / sum;
        return Distribution(std::move(group), std::move(masses));
    }

    /// Exact normalization: each mass is the double of an exact rational.
    static Distribution from_rational_weights(Group group,
                                              const std::vector<Rational>& weights) {
        Rational sum;
        for (const Rational& w : weights) {
            if (w.is_negative()) throw std::invalid_argument("negative weight");
            sum += w;
        }
        if (sum.is_zero()) throw std::invalid_argument("weights sum to zero");
        std::vector<double> masses(weights.size());
        for (std::size_t i = 0; i < weights.size(); ++i)
            masses[i] = (weights[i] / sum).to_double();
        return Distribution(std::move(group), std::move(masses));
    }

    static Distribution point_mass(const Element& x) {
        std::vector<double> masses(static_cast<std::size_t>(x.group().order()), 0.0);
        masses[static_cast<std::size_t>(x.index())] = 1.0;
        return Distribution(x.group(), std::move(masses));
    }

    /// Haar distribution m_K of a subgroup: uniform over its elements.
    static Distribution haar(const Subgroup& k) {
        std::vector<double> masses(static_cast<std::size_t>(k.parent().order()), 0.0);
        const double w = 1.0 / static_cast<double>(k.size());
        for (const std::int64_t i : k.element_indices())
            masses[static_cast<std::size_t>(i)] = w;
        return Distribution(k.parent(), std::move(masses));
    }

    static Distribution uniform(const Group& g) { return haar(Subgroup::whole(g)); }

    static Distribution mixture(const std::vector<std::pair<double, Distribution>>& parts) {
        if (parts.empty()) throw std::invalid_argument("mixture needs at least one part");
        const Group& g = parts.front().second.group();
        std::vector<double> masses(static_cast<std::size_t>(g.order()), 0.0);
        double total = 0.0;
        for (const auto& [weight, dist] : parts) {
            if (weight < -kAlgebraTol) throw std::invalid_argument("negative mixture weight");
            if (dist.group() != g)
                throw GroupMismatchError("mixture parts on different groups");
            total += weight;
            for (std::size_t i = 0; i < masses.size(); ++i)
                masses[i] += weight * dist.masses()[i];
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw std::invalid_argument("mixture weights sum to " + std::to_string(total) +
                                        ", expected 1");
        return Distribution(g, std::move(masses));
    }

    const Group& group() const { return group_; }
    const std::vector<double>& masses() const { return masses_; }

    double mass_at(std::int64_t index) const {
        return masses_[static_cast<std::size_t>(index)];
    }
    double mass(const Element& x) const {
        if (x.group() != group_)
            throw GroupMismatchError("element from a different group");
        return mass_at(x.index());
    }

    double max_mass() const { return *std::max_element(masses_.begin(), masses_.end()); }

private:
    Group group_;
    std::vector<double> masses_;
};

/// Support of the distribution: elements carrying more than tol mass.
inline std::vector<Element> support(const Distribution& mu, double tol = kAlgebraTol) {
    std::vector<Element> out;
    for (std::int64_t i = 0; i < mu.group().order(); ++i)
        if (mu.mass_at(i) > tol) out.push_back(mu.group().element_at(i));
    return out;
}

/// Characteristic function mu_hat(y) = sum_x mu(x) (x, y), computed with
/// an exact integer phase per term.
inline CharFunction char_function(const Distribution& mu) {
    const Group& g = mu.group();
    const std::int64_t L = g.exponent();
    const auto roots = detail::root_table(L);
    const auto& moduli = g.moduli();
    struct Atom {
        std::vector<std::int64_t> coords;
        double mass;
    };
    std::vector<Atom> atoms;
    for (std::int64_t i = 0; i < g.order(); ++i)
        if (mu.mass_at(i) != 0.0) atoms.push_back({g.coords_at(i), mu.mass_at(i)});
    std::vector<std::complex<double>> values(static_cast<std::size_t>(g.order()));
    for (std::int64_t yi = 0; yi < g.order(); ++yi) {
        const std::vector<std::int64_t> y = g.coords_at(yi);
        std::complex<double> sum = 0.0;
        for (const Atom& atom : atoms)
            sum += atom.mass *
                   roots[static_cast<std::size_t>(
                       detail::pairing_phase(atom.coords, y, moduli, L))];
        values[static_cast<std::size_t>(yi)] = sum;
    }
    return CharFunction(g, std::move(values));
}

/// Fourier inversion with a positivity check. Succeeds iff the recovered
/// masses are a distribution: real up to tolerance and no mass below
/// -neg_tol. Small negatives are clamped to zero and the table is
/// renormalized; genuine failures throw NotPositiveDefiniteError.
inline Distribution from_char_function(const CharFunction& f,
                                       double neg_tol = kMassRecoveryTol) {
    const Group& g = f.dual_group();
    if (std::abs(f.value_at(0) - 1.0) > 1e-6)
        throw std::invalid_argument("characteristic function must equal 1 at zero");
    const std::int64_t L = g.exponent();
    const auto roots = detail::root_table(L);
    const auto& moduli = g.moduli();
    const double scale = 1.0 / static_cast<double>(g.order());
    std::vector<double> masses(static_cast<std::size_t>(g.order()));
    double most_negative = 0.0;
    double max_imag = 0.0;
    for (std::int64_t xi = 0; xi < g.order(); ++xi) {
        const std::vector<std::int64_t> x = g.coords_at(xi);
        std::complex<double> sum = 0.0;
        for (std::int64_t yi = 0; yi < g.order(); ++yi) {
            const std::int64_t s =
                detail::pairing_phase(x, g.coords_at(yi), moduli, L);
            // conj((x, y)) = exp(-2 pi i s / L)
            sum += f.value_at(yi) * roots[static_cast<std::size_t>((L - s) % L)];
        }
        sum *= scale;
        most_negative = std::min(most_negative, sum.real());
        max_imag = std::max(max_imag, std::abs(sum.imag()));
        masses[static_cast<std::size_t>(xi)] = sum.real();
    }
    if (most_negative < -neg_tol || max_imag > neg_tol)
        throw NotPositiveDefiniteError(most_negative, max_imag);
    double total = 0.0;
    for (double& m : masses) {
        if (m < 0.0) m = 0.0;
        total += m;
    }
    for (double& m : masses) m /= total;
    return Distribution(g, std::move(masses));
}

/// Convolution (mu * nu)(z) = sum_x mu(x) nu(z - x).
inline Distribution convolve(const Distribution& mu, const Distribution& nu) {
    const Group& g = mu.group();
    if (nu.group() != g)
        throw GroupMismatchError("convolution of distributions on different groups");
    std::vector<double> out(static_cast<std::size_t>(g.order()), 0.0);
    for (std::int64_t i = 0; i < g.order(); ++i) {
        const double mi = mu.mass_at(i);
        if (mi == 0.0) continue;
        const Element xi = g.element_at(i);
        for (std::int64_t j = 0; j < g.order(); ++j) {
            const double mj = nu.mass_at(j);
            if (mj == 0.0) continue;
            out[static_cast<std::size_t>((xi + g.element_at(j)).index())] += mi * mj;
        }
    }
    return Distribution(g, std::move(out));
}

/// Reflection: the law of -x. Its characteristic function is the complex
/// conjugate of the original.
inline Distribution reflect(const Distribution& mu) {
    const Group& g = mu.group();
    std::vector<double> out(static_cast<std::size_t>(g.order()), 0.0);
    for (std::int64_t i = 0; i < g.order(); ++i)
        out[static_cast<std::size_t>((-g.element_at(i)).index())] = mu.mass_at(i);
    return Distribution(g, std::move(out));
}

/// Pushforward of mu under multiplication by a.
inline Distribution scalar_image(std::int64_t a, const Distribution& mu) {
    const Group& g = mu.group();
    std::vector<double> out(static_cast<std::size_t>(g.order()), 0.0);
    for (std::int64_t i = 0; i < g.order(); ++i)
        out[static_cast<std::size_t>(scalar_mul(a, g.element_at(i)).index())] +=
            mu.mass_at(i);
    return Distribution(g, std::move(out));
}

/// Degenerate distributions: all mass at a single point.
inline bool is_degenerate(const Distribution& mu, double tol = kClassifyTol) {
    return mu.max_mass() >= 1.0 - tol;
}

/// Shifts of Haar distributions of subgroups: mu = point * m_K. Decided on
/// the transform side, where such laws are exactly the tables with
/// |mu_hat| equal to 1 on a subgroup of the dual and 0 elsewhere.
inline bool is_idempotent_shift(const Distribution& mu, double tol = kClassifyTol) {
    const CharFunction f = char_function(mu);
    const Group& g = f.dual_group();
    std::vector<std::int64_t> unit_set;
    for (std::int64_t i = 0; i < g.order(); ++i) {
        const double m = std::abs(f.value_at(i));
        if (m >= 1.0 - tol)
            unit_set.push_back(i);
        else if (m > tol)
            return false;
    }
    // |mu_hat| is an indicator; it remains to check its support is a
    // subgroup, which holds iff the set is closed under addition.
    for (const std::int64_t i : unit_set) {
        const Character a = g.character_at(i);
        for (const std::int64_t j : unit_set) {
            const std::int64_t sum = (a + g.character_at(j)).index();
            if (!std::binary_search(unit_set.begin(), unit_set.end(), sum)) return false;
        }
    }
    return true;
}

/// Gaussian distributions in the parallelogram-identity sense: mu_hat has
/// the form (x, y) exp(-phi(y)) with phi >= 0 solving
/// phi(u+v) + phi(u-v) = 2 phi(u) + 2 phi(v). A vanishing characteristic
/// function already disqualifies; otherwise phi = -log |mu_hat| is tested
/// against the identity. On a finite group the only solutions are
/// degenerate laws, but this predicate runs the definition rather than
/// assuming that theorem.
inline bool is_gaussian(const Distribution& mu, double tol = kClassifyTol) {
    const CharFunction f = char_function(mu);
    if (!f.nonvanishing(tol)) return false;
    const Group& g = f.dual_group();
    std::vector<double> phi(static_cast<std::size_t>(g.order()));
    for (std::int64_t i = 0; i < g.order(); ++i)
        phi[static_cast<std::size_t>(i)] = -std::log(std::abs(f.value_at(i)));
    return satisfies_fe1(RealGroupFunction(g, std::move(phi)), tol);
}

/// Membership in the convolution class of Gaussian and idempotent laws.
/// On a finite group the Gaussian factor is degenerate, so the class
/// coincides with shifts of subgroup Haar laws.
inline bool in_gaussian_haar_class(const Distribution& mu, double tol = kClassifyTol) {
    return is_idempotent_shift(mu, tol);
}

}  // namespace heyde
