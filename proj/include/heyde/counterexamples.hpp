#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heyde/distribution.hpp"
#include "heyde/group.hpp"
#include "heyde/linear_forms.hpp"
#include "heyde/oracle.hpp"
#include "heyde/symmetry.hpp"
#include "heyde/tolerances.hpp"

namespace heyde::counterexamples {

/// One verification item of a constructed instance: a named residual or
/// predicate. For predicate checks the error field is 0 when satisfied.
struct CheckItem {
    std::string name;
    bool ok = false;
    double error = 0.0;
};

/// A pre-verified instance that passes the symmetry condition while
/// escaping the degenerate conclusion. The kind string doubles as the
/// CLI construction token.
struct CounterexampleInstance {
    std::string kind;  // "thm1-ii", "lemma5" or "lemma6"

    // Construction parameters, populated per kind.
    std::optional<std::vector<std::int64_t>> x0;
    std::optional<std::int64_t> p;
    std::optional<std::int64_t> k;
    std::optional<std::int64_t> y1;
    std::optional<std::int64_t> y2;
    std::optional<double> a_weight;

    Instance instance;
    HeydeVerdict cf;
    HeydeVerdict exact;
    std::vector<CheckItem> checks;
    std::vector<std::string> warnings;

    bool verified() const {
        if (!cf.holds || !exact.holds) return false;
        for (const CheckItem& c : checks)
            if (!c.ok) return false;
        return true;
    }
};

namespace detail_cx {

inline void append_verdicts(CounterexampleInstance& out) {
    out.cf = check_heyde_cf(out.instance.group, out.instance.forms, out.instance.mus);
    out.exact =
        check_heyde_exact(out.instance.group, out.instance.forms, out.instance.mus);
}

inline void require_weight_interior(double a_weight) {
    if (!(a_weight > 0.0 && a_weight < 1.0))
        throw std::invalid_argument("mixture weight must lie strictly between 0 and 1");
}

}  // namespace detail_cx

/// Mixes a point mass at zero with the Haar law of the cyclic subgroup
/// generated by x0, whose order p must be prime with p*X != {0}. With the
/// forms L1 = p x_1 - x_2, L2 = x_1 + p x_2 the pair (mu, mu) passes the
/// symmetry sweep, both laws are non-degenerate with nonvanishing
/// transforms, and the transform takes exactly the two values 1 (on the
/// annihilator of the subgroup) and a_weight (elsewhere).
inline CounterexampleInstance subgroup_mixture_instance(const Group& g, const Element& x0,
                                                        double a_weight = 0.5) {
    if (x0.group() != g) throw GroupMismatchError("generator from a different group");
    if (x0.is_zero())
        throw std::invalid_argument("generator must be a nonzero element");
    detail_cx::require_weight_interior(a_weight);
    const std::int64_t p = order_of(x0);
    if (!detail::is_prime(p))
        throw std::invalid_argument("generator order " + std::to_string(p) +
                                    " is not prime");
    if (!is_admissible(g, p))
        throw std::invalid_argument("p = " + std::to_string(p) +
                                    " acts trivially on the group, so the coefficient "
                                    "spec would be inadmissible");
    const Subgroup m = subgroup_generated(g, {x0});
    const Distribution mu = Distribution::mixture(
        {{a_weight, Distribution::point_mass(g.zero())}, {1.0 - a_weight, Distribution::haar(m)}});

    CounterexampleInstance out{
        .kind = "thm1-ii",
        .instance = Instance{g, LinearFormsSpec({p, -1}, {1, p}), {mu, mu}}};
    out.x0 = x0.coords();
    out.p = p;
    out.a_weight = a_weight;
    detail_cx::append_verdicts(out);

    const CharFunction f = char_function(mu);
    const Subgroup ann = annihilator(g, m);
    double profile_err = 0.0;
    for (std::int64_t y = 0; y < g.order(); ++y) {
        const double expected = ann.contains_index(y) ? 1.0 : a_weight;
        profile_err = std::max(profile_err, std::abs(f.value_at(y) - expected));
    }
    out.checks.push_back({"two-level-transform", profile_err <= kAlgebraTol, profile_err});

    double coset_err = 0.0;
    for (std::int64_t y = 0; y < g.order(); ++y) {
        const Character cy = g.character_at(y);
        for (const std::int64_t h : ann.element_indices()) {
            const std::int64_t shifted = (cy + g.character_at(h)).index();
            coset_err = std::max(coset_err,
                                 std::abs(f.value_at(shifted) - f.value_at(y)));
        }
    }
    out.checks.push_back(
        {"transform-constant-on-annihilator-cosets", coset_err <= kAlgebraTol, coset_err});

    bool nondegenerate = true;
    for (const Distribution& d : out.instance.mus)
        nondegenerate = nondegenerate && !is_degenerate(d);
    out.checks.push_back({"all-nondegenerate", nondegenerate, 0.0});
    out.checks.push_back({"all-nonvanishing", f.nonvanishing(), 0.0});
    return out;
}

/// Builds nu on Z(p^k), k >= 2, by inverting the truncated two-level
/// table: 1 at zero, a_weight on the rest of the p-torsion of the dual,
/// 0 outside it. The inverse is the mixture
///   a_weight * m_{pZ(p^k)} + (1 - a_weight) * m_X,
/// which is not a shifted subgroup Haar law, yet (nu, nu) passes the
/// sweep for L1 = p x_1 - x_2, L2 = x_1 + p x_2. p = 2 is admitted with a
/// warning: the construction goes through, but the group then lies outside
/// the positive case's hypotheses for other reasons.
inline CounterexampleInstance truncated_padic_mixture_instance(std::int64_t p,
                                                               std::int64_t k,
                                                               double a_weight = 0.5) {
    if (!detail::is_prime(p))
        throw std::invalid_argument("p must be prime");
    if (k < 2) throw std::invalid_argument("need k >= 2");
    detail_cx::require_weight_interior(a_weight);
    std::int64_t order = 1;
    for (std::int64_t i = 0; i < k; ++i) {
        if (order > enumeration_bound() / p)
            throw EnumerationBoundError(INT64_MAX, enumeration_bound());
        order *= p;
    }
    const Group g({order});
    const Subgroup torsion = endo_kernel(g, p);
    std::vector<std::complex<double>> table(static_cast<std::size_t>(g.order()), 0.0);
    for (const std::int64_t y : torsion.element_indices())
        table[static_cast<std::size_t>(y)] = y == 0 ? 1.0 : a_weight;
    const Distribution nu = from_char_function(CharFunction(g, std::move(table)));

    CounterexampleInstance out{
        .kind = "lemma5",
        .instance = Instance{g, LinearFormsSpec({p, -1}, {1, p}), {nu, nu}}};
    out.p = p;
    out.k = k;
    out.a_weight = a_weight;
    if (p == 2)
        out.warnings.push_back(
            "p = 2: construction admitted, but groups of exponent two are outside "
            "the positive case");
    detail_cx::append_verdicts(out);

    const Distribution expected = Distribution::mixture(
        {{a_weight, Distribution::haar(annihilator(g, torsion))},
         {1.0 - a_weight, Distribution::uniform(g)}});
    double mixture_err = 0.0;
    for (std::int64_t i = 0; i < g.order(); ++i)
        mixture_err =
            std::max(mixture_err, std::abs(nu.mass_at(i) - expected.mass_at(i)));
    out.checks.push_back(
        {"mixture-recovery", mixture_err <= kMassRecoveryTol, mixture_err});

    const CharFunction back = char_function(nu);
    double roundtrip_err = 0.0;
    for (std::int64_t y = 0; y < g.order(); ++y) {
        const double expected_value =
            torsion.contains_index(y) ? (y == 0 ? 1.0 : a_weight) : 0.0;
        roundtrip_err = std::max(roundtrip_err,
                                 std::abs(back.value_at(y) - expected_value));
    }
    out.checks.push_back(
        {"truncated-two-level-transform", roundtrip_err <= kMassRecoveryTol, roundtrip_err});
    out.checks.push_back(
        {"outside-haar-shift-class", !is_idempotent_shift(nu), 0.0});
    return out;
}

/// Cosine-density pair on Z(p), p > 3 prime: nu_i has density
/// 1 + cos(2 pi x y_i / p) against the uniform law, so its transform is 1
/// at zero, 1/2 at +-y_i and 0 elsewhere. The four-variable instance
/// (nu_1, nu_2, nu_1, nu_2) with L1 = x_1 + x_2 + x_3 + x_4 and
/// L2 = x_1 + x_2 + 2 x_3 + 2 x_4 passes the sweep because
/// nu_1 * nu_2 is the uniform law. Requires y1 != +-y2, both nonzero.
inline CounterexampleInstance harmonic_density_instance(std::int64_t p, std::int64_t y1,
                                                        std::int64_t y2) {
    if (!detail::is_prime(p) || p <= 3)
        throw std::invalid_argument("p must be a prime greater than 3");
    const std::int64_t r1 = detail::mod_reduce(y1, p);
    const std::int64_t r2 = detail::mod_reduce(y2, p);
    if (r1 == 0 || r2 == 0)
        throw std::invalid_argument("character labels must be nonzero");
    if (r1 == r2 || r1 == p - r2)
        throw std::invalid_argument("character labels must satisfy y1 != +-y2");
    const Group g({p});
    const auto make_density = [&](std::int64_t label) {
        std::vector<double> masses(static_cast<std::size_t>(p));
        for (std::int64_t x = 0; x < p; ++x)
            masses[static_cast<std::size_t>(x)] =
                (1.0 + std::cos(2.0 * std::numbers::pi * static_cast<double>((x * label) % p) /
                                static_cast<double>(p))) /
                static_cast<double>(p);
        return Distribution::from_weights(g, masses);
    };
    const Distribution nu1 = make_density(r1);
    const Distribution nu2 = make_density(r2);

    CounterexampleInstance out{
        .kind = "lemma6",
        .instance = Instance{g, LinearFormsSpec({1, 1, 1, 1}, {1, 1, 2, 2}),
                             {nu1, nu2, nu1, nu2}}};
    out.p = p;
    out.y1 = r1;
    out.y2 = r2;
    detail_cx::append_verdicts(out);

    const CharFunction f1 = char_function(nu1);
    const CharFunction f2 = char_function(nu2);
    const auto profile_error = [&](const CharFunction& f, std::int64_t label) {
        double err = 0.0;
        for (std::int64_t y = 0; y < p; ++y) {
            double expected = 0.0;
            if (y == 0)
                expected = 1.0;
            else if (y == label || y == p - label)
                expected = 0.5;
            err = std::max(err, std::abs(f.value_at(y) - expected));
        }
        return err;
    };
    const double prof1 = profile_error(f1, r1);
    const double prof2 = profile_error(f2, r2);
    out.checks.push_back(
        {"three-level-transform", std::max(prof1, prof2) <= kAlgebraTol,
         std::max(prof1, prof2)});

    // nu1 * nu2 must be the uniform law, i.e. the transform product is the
    // zero-indicator.
    double product_err = 0.0;
    for (std::int64_t y = 0; y < p; ++y) {
        const std::complex<double> prod = f1.value_at(y) * f2.value_at(y);
        const double expected = y == 0 ? 1.0 : 0.0;
        product_err = std::max(product_err, std::abs(prod - expected));
    }
    out.checks.push_back(
        {"product-is-uniform-transform", product_err <= kAlgebraTol, product_err});

    // The sweep reduces to the uniform transform identity
    // m(u+v) m(u+2v) = m(u-v) m(u-2v) with m the zero-indicator.
    double reduced_err = 0.0;
    const auto indicator = [&](std::int64_t value) {
        return detail::mod_reduce(value, p) == 0 ? 1.0 : 0.0;
    };
    for (std::int64_t u = 0; u < p; ++u)
        for (std::int64_t v = 0; v < p; ++v)
            reduced_err = std::max(
                reduced_err, std::abs(indicator(u + v) * indicator(u + 2 * v) -
                                      indicator(u - v) * indicator(u - 2 * v)));
    out.checks.push_back(
        {"reduced-product-equation", reduced_err <= kAlgebraTol, reduced_err});
    out.checks.push_back({"outside-haar-shift-class",
                          !is_idempotent_shift(nu1) && !is_idempotent_shift(nu2), 0.0});
    return out;
}

}  // namespace heyde::counterexamples
