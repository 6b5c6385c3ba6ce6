#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "heyde/finite_difference.hpp"
#include "heyde/linear_forms.hpp"
#include "heyde/symmetry.hpp"

namespace heyde {

/// Defect function of the symmetry condition in additive form,
///   F(u, v) = sum_j psi_j(a_j u + b_j v) - sum_j psi_j(a_j u - b_j v),
/// tabulated on Y x Y (index u * |Y| + v). For psi_j = -log mu_j_hat of
/// nonvanishing transforms, the condition holds iff F = 0 up to branch
/// multiples of 2 pi i.
inline GroupFunction symmetry_defect(const std::vector<GroupFunction>& psis,
                                     const LinearFormsSpec& forms) {
    if (psis.size() != forms.count())
        throw std::invalid_argument("need exactly one function per variable");
    const Group& g = psis.front().domain();
    for (const GroupFunction& psi : psis)
        if (psi.domain() != g)
            throw GroupMismatchError("functions tabulated on different groups");
    const auto tables = detail::form_shift_tables(g, forms);
    const std::int64_t n = g.order();
    std::vector<std::complex<double>> values(static_cast<std::size_t>(n * n), 0.0);
    for (std::int64_t at = 0; at < n * n; ++at) {
        std::complex<double> sum = 0.0;
        for (std::size_t j = 0; j < psis.size(); ++j)
            sum += psis[j].value_at(tables.plus[j][static_cast<std::size_t>(at)]) -
                   psis[j].value_at(tables.minus[j][static_cast<std::size_t>(at)]);
        values[static_cast<std::size_t>(at)] = sum;
    }
    return GroupFunction(direct_product(g, g), std::move(values));
}

struct ReductionResult {
    GroupFunction residual;        // on Y x Y after every elimination step
    GroupFunction residual_slice;  // the same function at v = 0, on Y
};

/// Finite-difference elimination of the defect function. Two passes of
/// substitute-and-subtract steps are applied to F:
///   for t = n..1:  G(u, v) <- G(u + b_t h_t, v + a_t h_t) - G(u, v)
///   for t = n..2:  G(u, v) <- G(u + b_t k_t, v - a_t k_t) - G(u, v)
/// Each step cancels variable t's contribution on one side of the defect,
/// so the residual collapses to an iterated difference of psi_1 alone:
///   residual(u, v) = [delta_{m_n1 k_n} ... delta_{m_21 k_2}
///                     delta_{l_n1 h_n} ... delta_{l_11 h_1} psi_1]
///                    (a_1 u + b_1 v)
/// with l_ij = a_j b_i + b_j a_i and m_ij = a_j b_i - b_j a_i. When the
/// symmetry condition holds the defect is zero and so is the residual.
inline ReductionResult reduction_pipeline(const std::vector<GroupFunction>& psis,
                                          const LinearFormsSpec& forms,
                                          const std::vector<Character>& hs,
                                          const std::vector<Character>& ks) {
    const std::size_t n_vars = forms.count();
    if (psis.size() != n_vars)
        throw std::invalid_argument("need exactly one function per variable");
    if (hs.size() != n_vars)
        throw std::invalid_argument("first pass needs one direction per variable");
    if (ks.size() != n_vars - 1)
        throw std::invalid_argument(
            "second pass needs one direction per variable beyond the first");
    const Group& g = psis.front().domain();
    for (const Character& h : hs)
        if (h.group() != g) throw GroupMismatchError("direction from a different group");
    for (const Character& k : ks)
        if (k.group() != g) throw GroupMismatchError("direction from a different group");

    GroupFunction current = symmetry_defect(psis, forms);
    const Group& product = current.domain();
    const auto pair_shift = [&](const Character& first, const Character& second) {
        std::vector<std::int64_t> coords = first.coords();
        coords.insert(coords.end(), second.coords().begin(), second.coords().end());
        return product.character(std::move(coords));
    };
    for (std::size_t t = n_vars; t-- > 0;) {
        const Character h = hs[t];
        current = delta(pair_shift(scalar_mul(forms.b()[t], h),
                                   scalar_mul(forms.a()[t], h)),
                        current);
    }
    for (std::size_t t = n_vars; t-- > 1;) {
        const Character k = ks[t - 1];
        current = delta(pair_shift(scalar_mul(forms.b()[t], k),
                                   scalar_mul(-forms.a()[t], k)),
                        current);
    }

    const std::int64_t n = g.order();
    std::vector<std::complex<double>> slice(static_cast<std::size_t>(n));
    for (std::int64_t u = 0; u < n; ++u)
        slice[static_cast<std::size_t>(u)] = current.value_at(u * n);
    return ReductionResult{current, GroupFunction(g, std::move(slice))};
}

}  // namespace heyde
