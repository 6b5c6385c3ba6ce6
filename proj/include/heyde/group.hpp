#pragma once

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace heyde {

/// Thrown when an operation would enumerate more states than the configured
/// bound allows. There is no silent truncation anywhere; callers either get
/// the full enumeration or this error.
class EnumerationBoundError : public std::runtime_error {
public:
    EnumerationBoundError(std::int64_t requested, std::int64_t bound)
        : std::runtime_error("enumeration of " + std::to_string(requested) +
                             " states exceeds the configured bound " +
                             std::to_string(bound)),
          requested_(requested),
          bound_(bound) {}

    std::int64_t requested() const { return requested_; }
    std::int64_t bound() const { return bound_; }

private:
    std::int64_t requested_;
    std::int64_t bound_;
};

/// Thrown when elements, characters or distributions from different groups
/// are combined.
class GroupMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::atomic<std::int64_t>& enumeration_bound_storage() {
    static std::atomic<std::int64_t> bound{1'000'000};
    return bound;
}

inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::int64_t mod_reduce(std::int64_t value, std::int64_t modulus) {
    const std::int64_t r = value % modulus;
    return r < 0 ? r + modulus : r;
}

}  // namespace detail

/// Process-wide cap on whole-group enumerations (group orders, product
/// sweeps, search grids).
inline std::int64_t enumeration_bound() {
    return detail::enumeration_bound_storage().load();
}

inline void set_enumeration_bound(std::int64_t bound) {
    if (bound < 1) throw std::invalid_argument("enumeration bound must be positive");
    detail::enumeration_bound_storage().store(bound);
}

/// Checks a prospective enumeration size against the bound.
inline void require_enumerable(std::int64_t requested) {
    if (requested > enumeration_bound())
        throw EnumerationBoundError(requested, enumeration_bound());
}

class Element;
class Character;

/// A finite Abelian group in fixed product form Z(n_1) x ... x Z(n_k),
/// each n_i >= 2. The presentation is part of the value: Z(4) and
/// Z(2) x Z(2) are distinct groups here and no canonicalization is
/// attempted. Such a group is self-dual; the dual is represented by the
/// same moduli, with Element and Character kept as distinct types so that
/// points and characters cannot be mixed up.
///
/// Elements are addressed either by coordinates or by a dense row-major
/// index in [0, order). Groups are immutable values; all operations on
/// them are const and safe to share across threads.
class Group {
public:
    explicit Group(std::vector<std::int64_t> moduli) : moduli_(std::move(moduli)) {
        if (moduli_.empty())
            throw std::invalid_argument("group needs at least one factor");
        for (const std::int64_t n : moduli_)
            if (n < 2) throw std::invalid_argument("cyclic factor moduli must be >= 2");
        order_ = 1;
        lcm_ = 1;
        for (const std::int64_t n : moduli_) {
            const __int128 next = static_cast<__int128>(order_) * n;
            if (next > enumeration_bound())
                throw EnumerationBoundError(
                    next > INT64_MAX ? INT64_MAX : static_cast<std::int64_t>(next),
                    enumeration_bound());
            order_ = static_cast<std::int64_t>(next);
            lcm_ = std::lcm(lcm_, n);
        }
        strides_.assign(moduli_.size(), 1);
        for (std::size_t i = moduli_.size(); i-- > 1;)
            strides_[i - 1] = strides_[i] * moduli_[i];
    }

    const std::vector<std::int64_t>& moduli() const { return moduli_; }
    std::size_t rank() const { return moduli_.size(); }
    std::int64_t order() const { return order_; }

    /// Least common multiple of the moduli; the smallest L with L*x = 0
    /// for every element x.
    std::int64_t exponent() const { return lcm_; }

    /// True when every modulus equals the same prime p, i.e. the group is
    /// an elementary Abelian p-group.
    bool has_prime_exponent() const {
        return detail::is_prime(lcm_) &&
               std::all_of(moduli_.begin(), moduli_.end(),
                           [&](std::int64_t n) { return n == lcm_; });
    }

    friend bool operator==(const Group& a, const Group& b) {
        return a.moduli_ == b.moduli_;
    }
    friend bool operator!=(const Group& a, const Group& b) { return !(a == b); }

    /// Dense index of reduced coordinates.
    std::int64_t index_of(const std::vector<std::int64_t>& coords) const {
        std::int64_t idx = 0;
        for (std::size_t i = 0; i < moduli_.size(); ++i)
            idx += coords[i] * strides_[i];
        return idx;
    }

    std::vector<std::int64_t> coords_at(std::int64_t index) const {
        std::vector<std::int64_t> coords(moduli_.size());
        for (std::size_t i = 0; i < moduli_.size(); ++i) {
            coords[i] = index / strides_[i];
            index %= strides_[i];
        }
        return coords;
    }

    /// Reduces arbitrary integer coordinates into the group.
    std::vector<std::int64_t> reduce(std::vector<std::int64_t> coords) const {
        if (coords.size() != moduli_.size())
            throw std::invalid_argument("coordinate count does not match group rank");
        for (std::size_t i = 0; i < coords.size(); ++i)
            coords[i] = detail::mod_reduce(coords[i], moduli_[i]);
        return coords;
    }

    Element element(std::vector<std::int64_t> coords) const;
    Element element_at(std::int64_t index) const;
    Element zero() const;

    Character character(std::vector<std::int64_t> coords) const;
    Character character_at(std::int64_t index) const;
    Character zero_character() const;

private:
    std::vector<std::int64_t> moduli_;
    std::vector<std::int64_t> strides_;
    std::int64_t order_ = 1;
    std::int64_t lcm_ = 1;
};

/// Concatenates the factor lists; indices satisfy
/// index(x, y) = index(x) * b.order() + index(y).
inline Group direct_product(const Group& a, const Group& b) {
    std::vector<std::int64_t> moduli = a.moduli();
    moduli.insert(moduli.end(), b.moduli().begin(), b.moduli().end());
    return Group(std::move(moduli));
}

namespace detail {

/// Shared representation of points and characters: a group together with
/// reduced coordinates. The two public types wrap it so the compiler keeps
/// them apart.
template <typename Derived>
class GroupVector {
public:
    GroupVector(Group group, std::vector<std::int64_t> coords)
        : group_(std::move(group)), coords_(group_.reduce(std::move(coords))) {}

    const Group& group() const { return group_; }
    const std::vector<std::int64_t>& coords() const { return coords_; }
    std::int64_t index() const { return group_.index_of(coords_); }
    bool is_zero() const {
        return std::all_of(coords_.begin(), coords_.end(),
                           [](std::int64_t c) { return c == 0; });
    }

    friend bool operator==(const Derived& a, const Derived& b) {
        return a.group() == b.group() && a.coords() == b.coords();
    }
    friend bool operator!=(const Derived& a, const Derived& b) { return !(a == b); }

    friend Derived operator+(const Derived& a, const Derived& b) {
        require_same_group(a, b);
        std::vector<std::int64_t> coords(a.coords().size());
        const auto& moduli = a.group().moduli();
        for (std::size_t i = 0; i < coords.size(); ++i)
            coords[i] = mod_reduce(a.coords()[i] + b.coords()[i], moduli[i]);
        return Derived(a.group(), std::move(coords));
    }

    friend Derived operator-(const Derived& a, const Derived& b) {
        require_same_group(a, b);
        std::vector<std::int64_t> coords(a.coords().size());
        const auto& moduli = a.group().moduli();
        for (std::size_t i = 0; i < coords.size(); ++i)
            coords[i] = mod_reduce(a.coords()[i] - b.coords()[i], moduli[i]);
        return Derived(a.group(), std::move(coords));
    }

    friend Derived operator-(const Derived& a) {
        std::vector<std::int64_t> coords(a.coords().size());
        const auto& moduli = a.group().moduli();
        for (std::size_t i = 0; i < coords.size(); ++i)
            coords[i] = mod_reduce(-a.coords()[i], moduli[i]);
        return Derived(a.group(), std::move(coords));
    }

private:
    static void require_same_group(const Derived& a, const Derived& b) {
        if (a.group() != b.group())
            throw GroupMismatchError("operands belong to different groups");
    }

    Group group_;
    std::vector<std::int64_t> coords_;
};

}  // namespace detail

/// A point x of the group, stored as reduced coordinates.
class Element : public detail::GroupVector<Element> {
public:
    using detail::GroupVector<Element>::GroupVector;
};

/// A point y of the dual group, i.e. the label of the character
/// x -> exp(2 pi i sum_i x_i y_i / n_i).
class Character : public detail::GroupVector<Character> {
public:
    using detail::GroupVector<Character>::GroupVector;
};

inline Element Group::element(std::vector<std::int64_t> coords) const {
    return Element(*this, std::move(coords));
}

inline Element Group::element_at(std::int64_t index) const {
    return Element(*this, coords_at(index));
}

inline Element Group::zero() const {
    return Element(*this, std::vector<std::int64_t>(rank(), 0));
}

inline Character Group::character(std::vector<std::int64_t> coords) const {
    return Character(*this, std::move(coords));
}

inline Character Group::character_at(std::int64_t index) const {
    return Character(*this, coords_at(index));
}

inline Character Group::zero_character() const {
    return Character(*this, std::vector<std::int64_t>(rank(), 0));
}

inline Element add(const Element& a, const Element& b) { return a + b; }
inline Character add(const Character& a, const Character& b) { return a + b; }

inline Element scalar_mul(std::int64_t a, const Element& x) {
    std::vector<std::int64_t> coords(x.coords().size());
    const auto& moduli = x.group().moduli();
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const std::int64_t factor = detail::mod_reduce(a, moduli[i]);
        coords[i] = detail::mod_reduce(factor * x.coords()[i], moduli[i]);
    }
    return Element(x.group(), std::move(coords));
}

inline Character scalar_mul(std::int64_t a, const Character& y) {
    std::vector<std::int64_t> coords(y.coords().size());
    const auto& moduli = y.group().moduli();
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const std::int64_t factor = detail::mod_reduce(a, moduli[i]);
        coords[i] = detail::mod_reduce(factor * y.coords()[i], moduli[i]);
    }
    return Character(y.group(), std::move(coords));
}

/// Additive order: the smallest r >= 1 with r*x = 0. Computed exactly as
/// lcm_i(n_i / gcd(x_i, n_i)).
inline std::int64_t order_of(const Element& x) {
    std::int64_t ord = 1;
    const auto& moduli = x.group().moduli();
    for (std::size_t i = 0; i < moduli.size(); ++i)
        ord = std::lcm(ord, moduli[i] / std::gcd(x.coords()[i], moduli[i]));
    return ord;
}

namespace detail {

/// Exact phase of the pairing as a numerator over L = exponent:
/// (x, y) = exp(2 pi i s / L) with s = sum_i x_i y_i (L / n_i) mod L.
inline std::int64_t pairing_phase(const std::vector<std::int64_t>& x,
                                  const std::vector<std::int64_t>& y,
                                  const std::vector<std::int64_t>& moduli,
                                  std::int64_t exponent) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < moduli.size(); ++i) {
        const std::int64_t term = (x[i] * y[i]) % moduli[i];
        s = (s + term * (exponent / moduli[i])) % exponent;
    }
    return s;
}

}  // namespace detail

/// Value (x, y) of the character labelled y at the point x.
inline std::complex<double> pairing(const Element& x, const Character& y) {
    if (x.group() != y.group())
        throw GroupMismatchError("pairing of element and character from different groups");
    const std::int64_t L = x.group().exponent();
    const std::int64_t s =
        detail::pairing_phase(x.coords(), y.coords(), x.group().moduli(), L);
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(s) /
                               static_cast<double>(L));
}

/// Exact integer test of (x, y) == 1.
inline bool pairing_is_trivial(const Element& x, const Character& y) {
    if (x.group() != y.group())
        throw GroupMismatchError("pairing of element and character from different groups");
    return detail::pairing_phase(x.coords(), y.coords(), x.group().moduli(),
                                 x.group().exponent()) == 0;
}

/// A subgroup given by the sorted list of its element indices in a fixed
/// parent group. Used both for subgroups of X and, via the self-dual
/// presentation, for subgroups of the dual group.
class Subgroup {
public:
    /// Validates that the indices contain zero and are closed under
    /// addition; in a finite group that makes them a subgroup.
    static Subgroup from_indices(const Group& parent, std::vector<std::int64_t> indices) {
        std::sort(indices.begin(), indices.end());
        indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
        for (const std::int64_t i : indices)
            if (i < 0 || i >= parent.order())
                throw std::invalid_argument("subgroup index out of range");
        if (indices.empty() || indices.front() != 0)
            throw std::invalid_argument("subgroup must contain the zero element");
        for (const std::int64_t i : indices) {
            const Element a = parent.element_at(i);
            for (const std::int64_t j : indices) {
                const std::int64_t sum = (a + parent.element_at(j)).index();
                if (!std::binary_search(indices.begin(), indices.end(), sum))
                    throw std::invalid_argument("element set is not closed under addition");
            }
        }
        return Subgroup(parent, std::move(indices));
    }

    static Subgroup trivial(const Group& parent) {
        return Subgroup(parent, {0});
    }

    static Subgroup whole(const Group& parent) {
        std::vector<std::int64_t> all(parent.order());
        std::iota(all.begin(), all.end(), 0);
        return Subgroup(parent, std::move(all));
    }

    const Group& parent() const { return parent_; }
    const std::vector<std::int64_t>& element_indices() const { return indices_; }
    std::int64_t size() const { return static_cast<std::int64_t>(indices_.size()); }
    bool is_trivial() const { return indices_.size() == 1; }
    bool is_whole() const { return size() == parent_.order(); }

    bool contains_index(std::int64_t index) const {
        return std::binary_search(indices_.begin(), indices_.end(), index);
    }
    bool contains(const Element& x) const {
        if (x.group() != parent_)
            throw GroupMismatchError("membership test against a different group");
        return contains_index(x.index());
    }

    std::vector<Element> elements() const {
        std::vector<Element> out;
        out.reserve(indices_.size());
        for (const std::int64_t i : indices_) out.push_back(parent_.element_at(i));
        return out;
    }

    friend bool operator==(const Subgroup& a, const Subgroup& b) {
        return a.parent_ == b.parent_ && a.indices_ == b.indices_;
    }
    friend bool operator!=(const Subgroup& a, const Subgroup& b) { return !(a == b); }

private:
    friend Subgroup subgroup_generated(const Group&, const std::vector<Element>&);
    friend Subgroup endo_image(const Group&, std::int64_t);
    friend Subgroup endo_kernel(const Group&, std::int64_t);
    friend Subgroup annihilator(const Group&, const Subgroup&);

    Subgroup(Group parent, std::vector<std::int64_t> indices)
        : parent_(std::move(parent)), indices_(std::move(indices)) {}

    Group parent_;
    std::vector<std::int64_t> indices_;  // sorted, unique
};

/// Subgroup generated by a list of elements, by closure under addition.
inline Subgroup subgroup_generated(const Group& g, const std::vector<Element>& gens) {
    for (const Element& x : gens)
        if (x.group() != g)
            throw GroupMismatchError("generator from a different group");
    std::vector<char> seen(static_cast<std::size_t>(g.order()), 0);
    seen[0] = 1;
    std::vector<std::int64_t> frontier{0};
    while (!frontier.empty()) {
        std::vector<std::int64_t> next;
        for (const std::int64_t i : frontier) {
            const Element base = g.element_at(i);
            for (const Element& gen : gens) {
                const std::int64_t j = (base + gen).index();
                if (!seen[static_cast<std::size_t>(j)]) {
                    seen[static_cast<std::size_t>(j)] = 1;
                    next.push_back(j);
                }
            }
        }
        frontier = std::move(next);
    }
    std::vector<std::int64_t> indices;
    for (std::int64_t i = 0; i < g.order(); ++i)
        if (seen[static_cast<std::size_t>(i)]) indices.push_back(i);
    return Subgroup(g, std::move(indices));
}

/// Image a*X of the multiplication-by-a endomorphism.
inline Subgroup endo_image(const Group& g, std::int64_t a) {
    std::vector<char> seen(static_cast<std::size_t>(g.order()), 0);
    std::vector<std::int64_t> indices;
    for (std::int64_t i = 0; i < g.order(); ++i) {
        const std::int64_t j = scalar_mul(a, g.element_at(i)).index();
        if (!seen[static_cast<std::size_t>(j)]) {
            seen[static_cast<std::size_t>(j)] = 1;
            indices.push_back(j);
        }
    }
    std::sort(indices.begin(), indices.end());
    return Subgroup(g, std::move(indices));
}

/// Kernel {x : a*x = 0} of the multiplication-by-a endomorphism.
inline Subgroup endo_kernel(const Group& g, std::int64_t a) {
    std::vector<std::int64_t> indices;
    for (std::int64_t i = 0; i < g.order(); ++i)
        if (scalar_mul(a, g.element_at(i)).is_zero()) indices.push_back(i);
    return Subgroup(g, std::move(indices));
}

/// An integer a is admissible for the group when a*X != {0}; equivalently,
/// when some modulus does not divide a. Decided exactly, without
/// enumeration.
inline bool is_admissible(const Group& g, std::int64_t a) {
    for (const std::int64_t n : g.moduli())
        if (detail::mod_reduce(a, n) != 0) return true;
    return false;
}

/// Annihilator A(X, H) = {x in X : (x, h) = 1 for all h in H} of a
/// subgroup H of the dual group. The dual group must carry the same
/// moduli as g.
inline Subgroup annihilator(const Group& g, const Subgroup& dual_subgroup) {
    if (dual_subgroup.parent() != g)
        throw GroupMismatchError("annihilator expects a subgroup of the dual presentation");
    const std::int64_t L = g.exponent();
    const auto& moduli = g.moduli();
    std::vector<std::vector<std::int64_t>> h_coords;
    h_coords.reserve(dual_subgroup.element_indices().size());
    for (const std::int64_t h : dual_subgroup.element_indices())
        h_coords.push_back(g.coords_at(h));
    std::vector<std::int64_t> indices;
    for (std::int64_t i = 0; i < g.order(); ++i) {
        const std::vector<std::int64_t> x = g.coords_at(i);
        bool annihilates = true;
        for (const auto& h : h_coords) {
            if (detail::pairing_phase(x, h, moduli, L) != 0) {
                annihilates = false;
                break;
            }
        }
        if (annihilates) indices.push_back(i);
    }
    return Subgroup(g, std::move(indices));
}

}  // namespace heyde
