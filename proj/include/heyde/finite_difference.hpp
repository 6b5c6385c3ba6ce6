#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "heyde/group.hpp"
#include "heyde/rational.hpp"
#include "heyde/tolerances.hpp"

namespace heyde {

namespace detail {

inline bool value_is_zero(const std::complex<double>& v, double tol) {
    return std::abs(v) <= tol;
}
inline bool value_is_zero(double v, double tol) { return std::abs(v) <= tol; }
inline bool value_is_zero(const Rational& v, double) { return v.is_zero(); }

inline double value_magnitude(const std::complex<double>& v) { return std::abs(v); }
inline double value_magnitude(double v) { return std::abs(v); }
inline double value_magnitude(const Rational& v) { return std::abs(v.to_double()); }

/// Index permutation y -> y + h over the whole domain, used to turn every
/// difference step into a table lookup.
inline std::vector<std::int64_t> shift_table(const Group& domain,
                                             const std::vector<std::int64_t>& h_coords) {
    const auto& moduli = domain.moduli();
    std::vector<std::int64_t> table(static_cast<std::size_t>(domain.order()));
    for (std::int64_t i = 0; i < domain.order(); ++i) {
        std::vector<std::int64_t> c = domain.coords_at(i);
        for (std::size_t k = 0; k < c.size(); ++k)
            c[k] = mod_reduce(c[k] + h_coords[k], moduli[k]);
        table[static_cast<std::size_t>(i)] = domain.index_of(c);
    }
    return table;
}

}  // namespace detail

/// A function tabulated on a finite group. In the symmetry machinery the
/// domain is the dual group Y, or Y x Y via direct_product; shifts are
/// therefore Character values.
template <typename T>
class GroupFunctionT {
public:
    GroupFunctionT(Group domain, std::vector<T> values)
        : domain_(std::move(domain)), values_(std::move(values)) {
        if (static_cast<std::int64_t>(values_.size()) != domain_.order())
            throw std::invalid_argument("value table size does not match group order");
    }

    static GroupFunctionT constant(const Group& domain, T value) {
        return GroupFunctionT(domain,
                              std::vector<T>(static_cast<std::size_t>(domain.order()), value));
    }

    static GroupFunctionT zero(const Group& domain) { return constant(domain, T{}); }

    template <typename Fn>
    static GroupFunctionT tabulate(const Group& domain, Fn&& fn) {
        std::vector<T> values;
        values.reserve(static_cast<std::size_t>(domain.order()));
        for (std::int64_t i = 0; i < domain.order(); ++i)
            values.push_back(fn(domain.character_at(i)));
        return GroupFunctionT(domain, std::move(values));
    }

    const Group& domain() const { return domain_; }
    const std::vector<T>& values() const { return values_; }
    std::vector<T>& values() { return values_; }

    const T& value_at(std::int64_t index) const {
        return values_[static_cast<std::size_t>(index)];
    }
    T& value_at(std::int64_t index) { return values_[static_cast<std::size_t>(index)]; }

    const T& value(const Character& y) const {
        if (y.group() != domain_)
            throw GroupMismatchError("argument from a different group");
        return value_at(y.index());
    }

    bool is_zero(double tol = kAlgebraTol) const {
        for (const T& v : values_)
            if (!detail::value_is_zero(v, tol)) return false;
        return true;
    }

    double max_abs() const {
        double m = 0.0;
        for (const T& v : values_) m = std::max(m, detail::value_magnitude(v));
        return m;
    }

private:
    Group domain_;
    std::vector<T> values_;
};

using GroupFunction = GroupFunctionT<std::complex<double>>;
using RealGroupFunction = GroupFunctionT<double>;
using RationalGroupFunction = GroupFunctionT<Rational>;

/// Finite difference (delta_h f)(y) = f(y + h) - f(y).
template <typename T>
GroupFunctionT<T> delta(const Character& h, const GroupFunctionT<T>& f) {
    if (h.group() != f.domain())
        throw GroupMismatchError("difference direction from a different group");
    const std::vector<std::int64_t> table = detail::shift_table(f.domain(), h.coords());
    std::vector<T> out(f.values().size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = f.values()[static_cast<std::size_t>(table[i])] - f.values()[i];
    return GroupFunctionT<T>(f.domain(), std::move(out));
}

/// Composition delta_{h_k} ... delta_{h_1} f, applied left to right over hs.
template <typename T>
GroupFunctionT<T> iterated_delta(const std::vector<Character>& hs,
                                 const GroupFunctionT<T>& f) {
    GroupFunctionT<T> cur = f;
    for (const Character& h : hs) cur = delta(h, cur);
    return cur;
}

struct PolynomialTestResult {
    bool is_polynomial = false;
    /// Smallest n with delta_h^{n+1} f = 0 for every h; present only on
    /// success. The zero function gets degree 0.
    std::optional<std::int64_t> degree;
    struct Witness {
        std::vector<std::int64_t> direction;  // h whose chain fails to vanish
        std::vector<std::int64_t> point;      // argument where the residual is largest
    };
    std::optional<Witness> witness;
};

/// Tests whether f is a polynomial: some n has delta_h^{n+1} f identically
/// zero for every direction h. Degrees are probed up to max_degree
/// (defaulting to the domain order, past which no new functions appear).
/// On a finite group a polynomial is necessarily constant; callers rely on
/// the reported degree rather than that theorem.
template <typename T>
PolynomialTestResult is_polynomial(const GroupFunctionT<T>& f,
                                   std::optional<std::int64_t> max_degree = std::nullopt,
                                   double zero_tol = kClassifyTol) {
    const Group& domain = f.domain();
    const std::int64_t probe_limit = max_degree.value_or(domain.order());
    PolynomialTestResult result;
    std::int64_t max_annihilation_order = 0;
    for (std::int64_t h = 0; h < domain.order(); ++h) {
        const std::vector<std::int64_t> h_coords = domain.coords_at(h);
        const std::vector<std::int64_t> table = detail::shift_table(domain, h_coords);
        GroupFunctionT<T> cur = f;
        std::int64_t order = -1;
        for (std::int64_t m = 0; m <= probe_limit; ++m) {
            if (cur.is_zero(zero_tol)) {
                order = m;
                break;
            }
            std::vector<T> next(cur.values().size());
            for (std::size_t i = 0; i < next.size(); ++i)
                next[i] = cur.values()[static_cast<std::size_t>(table[i])] - cur.values()[i];
            cur = GroupFunctionT<T>(domain, std::move(next));
        }
        if (order < 0) {
            // delta_h^{probe_limit + 1} f still nonzero: report the largest
            // surviving value as the witness.
            std::size_t arg = 0;
            double best = -1.0;
            for (std::size_t i = 0; i < cur.values().size(); ++i) {
                const double mag = detail::value_magnitude(cur.values()[i]);
                if (mag > best) {
                    best = mag;
                    arg = i;
                }
            }
            result.is_polynomial = false;
            result.witness = PolynomialTestResult::Witness{
                h_coords, domain.coords_at(static_cast<std::int64_t>(arg))};
            return result;
        }
        max_annihilation_order = std::max(max_annihilation_order, order);
    }
    result.is_polynomial = true;
    result.degree = std::max<std::int64_t>(0, max_annihilation_order - 1);
    return result;
}

/// Largest violation of the parallelogram identity
///   phi(u + v) + phi(u - v) - 2 phi(u) - 2 phi(v)
/// over all pairs (u, v) of the domain.
inline double fe1_max_violation(const RealGroupFunction& phi) {
    const Group& domain = phi.domain();
    const std::int64_t n = domain.order();
    require_enumerable(n * n);
    std::vector<std::vector<std::int64_t>> coords;
    coords.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) coords.push_back(domain.coords_at(i));
    const auto& moduli = domain.moduli();
    double worst = 0.0;
    for (std::int64_t u = 0; u < n; ++u) {
        for (std::int64_t v = 0; v < n; ++v) {
            std::vector<std::int64_t> sum(coords[0].size()), diff(coords[0].size());
            for (std::size_t k = 0; k < sum.size(); ++k) {
                sum[k] = detail::mod_reduce(coords[u][k] + coords[v][k], moduli[k]);
                diff[k] = detail::mod_reduce(coords[u][k] - coords[v][k], moduli[k]);
            }
            const double lhs = phi.value_at(domain.index_of(sum)) +
                               phi.value_at(domain.index_of(diff));
            const double rhs = 2.0 * phi.value_at(u) + 2.0 * phi.value_at(v);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

/// Whether phi solves the parallelogram identity within tol.
inline bool satisfies_fe1(const RealGroupFunction& phi, double tol = kEquationTol) {
    return fe1_max_violation(phi) <= tol;
}

/// Exact-arithmetic form of the same test.
inline bool satisfies_fe1(const RationalGroupFunction& phi) {
    const Group& domain = phi.domain();
    const std::int64_t n = domain.order();
    require_enumerable(n * n);
    const auto& moduli = domain.moduli();
    for (std::int64_t u = 0; u < n; ++u) {
        const std::vector<std::int64_t> cu = domain.coords_at(u);
        for (std::int64_t v = 0; v < n; ++v) {
            const std::vector<std::int64_t> cv = domain.coords_at(v);
            std::vector<std::int64_t> sum(cu.size()), diff(cu.size());
            for (std::size_t k = 0; k < cu.size(); ++k) {
                sum[k] = detail::mod_reduce(cu[k] + cv[k], moduli[k]);
                diff[k] = detail::mod_reduce(cu[k] - cv[k], moduli[k]);
            }
            const Rational lhs = phi.value_at(domain.index_of(sum)) +
                                 phi.value_at(domain.index_of(diff));
            const Rational rhs = (phi.value_at(u) + phi.value_at(v)) * Rational(2);
            if (lhs != rhs) return false;
        }
    }
    return true;
}

}  // namespace heyde
