#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heyde/distribution.hpp"
#include "heyde/finite_difference.hpp"
#include "heyde/group.hpp"
#include "heyde/linear_forms.hpp"
#include "heyde/tolerances.hpp"

namespace heyde {

/// A complete problem instance: independent variables x_1..x_n with laws
/// mus[j] on the common group, observed through the forms L1 and L2.
struct Instance {
    Group group;
    LinearFormsSpec forms;
    std::vector<Distribution> mus;
};

inline void validate_instance(const Group& g, const LinearFormsSpec& forms,
                              const std::vector<Distribution>& mus) {
    if (mus.size() != forms.count())
        throw std::invalid_argument("need exactly one distribution per variable");
    for (const Distribution& mu : mus)
        if (mu.group() != g)
            throw GroupMismatchError("distribution on a different group");
}

inline void validate_instance(const Instance& inst) {
    validate_instance(inst.group, inst.forms, inst.mus);
}

/// Verdict of a symmetry check. The witness, present when the check
/// fails, holds the coordinate pair exhibiting the largest violation;
/// its meaning (a character pair, or a value pair of the two forms)
/// depends on which checker produced it.
struct HeydeVerdict {
    bool holds = false;
    double max_violation = 0.0;
    double tolerance = 0.0;
    std::optional<std::array<std::vector<std::int64_t>, 2>> witness;
};

namespace detail {

/// Characteristic function tables of all distributions, as flat vectors.
inline std::vector<std::vector<std::complex<double>>> cf_tables(
    const std::vector<Distribution>& mus) {
    std::vector<std::vector<std::complex<double>>> tables;
    tables.reserve(mus.size());
    for (const Distribution& mu : mus) tables.push_back(char_function(mu).values());
    return tables;
}

/// Per-variable index maps (u, v) -> a_j u + b_j v and a_j u - b_j v,
/// so the double sweep is pure table lookup.
struct FormShiftTables {
    // plus[j][u * order + v] = index of a_j u + b_j v; likewise minus.
    std::vector<std::vector<std::int64_t>> plus;
    std::vector<std::vector<std::int64_t>> minus;
};

inline FormShiftTables form_shift_tables(const Group& g, const LinearFormsSpec& forms) {
    const std::int64_t n = g.order();
    require_enumerable(n * n);
    const auto& moduli = g.moduli();
    const std::size_t rank = moduli.size();
    std::vector<std::vector<std::int64_t>> coords;
    coords.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) coords.push_back(g.coords_at(i));
    FormShiftTables tables;
    tables.plus.assign(forms.count(), {});
    tables.minus.assign(forms.count(), {});
    std::vector<std::int64_t> w(rank);
    for (std::size_t j = 0; j < forms.count(); ++j) {
        std::vector<std::int64_t> aj(rank), bj(rank);
        for (std::size_t k = 0; k < rank; ++k) {
            aj[k] = mod_reduce(forms.a()[j], moduli[k]);
            bj[k] = mod_reduce(forms.b()[j], moduli[k]);
        }
        auto& plus = tables.plus[j];
        auto& minus = tables.minus[j];
        plus.resize(static_cast<std::size_t>(n * n));
        minus.resize(static_cast<std::size_t>(n * n));
        for (std::int64_t u = 0; u < n; ++u) {
            for (std::int64_t v = 0; v < n; ++v) {
                const std::size_t at = static_cast<std::size_t>(u * n + v);
                for (std::size_t k = 0; k < rank; ++k)
                    w[k] = mod_reduce(aj[k] * coords[u][k] + bj[k] * coords[v][k],
                                      moduli[k]);
                plus[at] = g.index_of(w);
                for (std::size_t k = 0; k < rank; ++k)
                    w[k] = mod_reduce(aj[k] * coords[u][k] - bj[k] * coords[v][k],
                                      moduli[k]);
                minus[at] = g.index_of(w);
            }
        }
    }
    return tables;
}

}  // namespace detail

/// Characteristic-function form of the symmetry condition: L2 is
/// conditionally symmetric given L1 iff
///   prod_j mu_j_hat(a_j u + b_j v) = prod_j mu_j_hat(a_j u - b_j v)
/// for every pair (u, v) of characters. The sweep is exhaustive over
/// Y x Y and reports the largest absolute difference.
inline HeydeVerdict check_heyde_cf(const Group& g, const LinearFormsSpec& forms,
                                   const std::vector<Distribution>& mus,
                                   double tol = kEquationTol) {
    validate_instance(g, forms, mus);
    const auto cfs = detail::cf_tables(mus);
    const auto tables = detail::form_shift_tables(g, forms);
    const std::int64_t n = g.order();
    HeydeVerdict verdict;
    verdict.tolerance = tol;
    std::int64_t worst_u = 0, worst_v = 0;
    for (std::int64_t u = 0; u < n; ++u) {
        for (std::int64_t v = 0; v < n; ++v) {
            const std::size_t at = static_cast<std::size_t>(u * n + v);
            std::complex<double> plus = 1.0, minus = 1.0;
            for (std::size_t j = 0; j < mus.size(); ++j) {
                plus *= cfs[j][static_cast<std::size_t>(tables.plus[j][at])];
                minus *= cfs[j][static_cast<std::size_t>(tables.minus[j][at])];
            }
            const double violation = std::abs(plus - minus);
            if (violation > verdict.max_violation) {
                verdict.max_violation = violation;
                worst_u = u;
                worst_v = v;
            }
        }
    }
    verdict.holds = verdict.max_violation <= tol;
    if (!verdict.holds)
        verdict.witness = std::array<std::vector<std::int64_t>, 2>{
            g.coords_at(worst_u), g.coords_at(worst_v)};
    return verdict;
}

/// Result of the Q-form of the symmetry check, which tests whether the
/// principal logarithm r(u, v) of the product ratio is a polynomial on
/// Y x Y vanishing at the origin.
struct QHeydeResult {
    HeydeVerdict verdict;
    PolynomialTestResult polynomial;
    double log_ratio_at_zero = 0.0;
    GroupFunction log_ratio;
};

/// Q-form of the symmetry condition. Requires every characteristic
/// function to be nonvanishing; a zero raises VanishingCharFunctionError
/// naming the distribution and the character.
inline QHeydeResult check_q_heyde(const Group& g, const LinearFormsSpec& forms,
                                  const std::vector<Distribution>& mus,
                                  double tol = kEquationTol,
                                  double vanish_tol = kClassifyTol) {
    validate_instance(g, forms, mus);
    const auto cfs = detail::cf_tables(mus);
    for (std::size_t j = 0; j < cfs.size(); ++j)
        for (std::int64_t y = 0; y < g.order(); ++y)
            if (std::abs(cfs[j][static_cast<std::size_t>(y)]) <= vanish_tol)
                throw VanishingCharFunctionError(j, g.coords_at(y));
    const auto tables = detail::form_shift_tables(g, forms);
    const std::int64_t n = g.order();
    const Group product = direct_product(g, g);
    std::vector<std::complex<double>> r(static_cast<std::size_t>(n * n));
    for (std::int64_t u = 0; u < n; ++u) {
        for (std::int64_t v = 0; v < n; ++v) {
            const std::size_t at = static_cast<std::size_t>(u * n + v);
            std::complex<double> plus = 1.0, minus = 1.0;
            for (std::size_t j = 0; j < mus.size(); ++j) {
                plus *= cfs[j][static_cast<std::size_t>(tables.plus[j][at])];
                minus *= cfs[j][static_cast<std::size_t>(tables.minus[j][at])];
            }
            r[at] = std::log(plus / minus);
        }
    }
    GroupFunction log_ratio(product, std::move(r));
    QHeydeResult result{HeydeVerdict{}, is_polynomial(log_ratio, std::nullopt, tol),
                        std::abs(log_ratio.value_at(0)), log_ratio};
    result.verdict.tolerance = tol;
    result.verdict.holds =
        result.polynomial.is_polynomial && result.log_ratio_at_zero <= tol;
    double worst = 0.0;
    std::int64_t worst_at = 0;
    for (std::int64_t i = 0; i < n * n; ++i) {
        const double mag = std::abs(log_ratio.value_at(i));
        if (mag > worst) {
            worst = mag;
            worst_at = i;
        }
    }
    result.verdict.max_violation = worst;
    if (!result.verdict.holds)
        result.verdict.witness = std::array<std::vector<std::int64_t>, 2>{
            g.coords_at(worst_at / n), g.coords_at(worst_at % n)};
    return result;
}

/// Per-distribution membership flags for the conclusion classes.
struct DistributionClassification {
    bool degenerate = false;
    bool gaussian = false;
    bool idempotent_shift = false;
    bool gaussian_haar = false;
    bool nonvanishing = false;
};

/// What a passing (or failing) symmetry verdict means for the instance.
/// Status values:
///   not-symmetric             the condition fails; nothing to classify
///   forms-degenerate          all off-diagonal m_ij act trivially, so the
///                             two forms are proportional
///   exponent-two-out-of-scope every modulus is 2; outside the positive
///                             case's hypotheses
///   prime-exponent-consistent elementary p-group case where the conclusion
///                             (all laws degenerate) is required and holds
///   prime-exponent-violated   same case but the conclusion fails, which
///                             would mean a checker defect
///   all-degenerate            conclusion holds without being required
///   counterexample-nonvanishing  symmetric, nonvanishing transforms, yet
///                             not all degenerate
///   counterexample-vanishing  symmetric with vanishing transforms and some
///                             law outside the Gaussian-Haar class
///   within-haar-class         symmetric with vanishing transforms, all
///                             laws inside the Gaussian-Haar class
struct ClassificationReport {
    bool symmetric = false;
    std::optional<std::int64_t> prime_exponent;
    bool forms_degenerate = false;
    bool all_nonvanishing = false;
    bool all_degenerate = false;
    bool all_gaussian_haar = false;
    std::vector<DistributionClassification> per_distribution;
    std::string status;
};

inline ClassificationReport classify_conclusion(const Group& g,
                                                const LinearFormsSpec& forms,
                                                const std::vector<Distribution>& mus,
                                                const HeydeVerdict& verdict,
                                                double tol = kClassifyTol) {
    validate_instance(g, forms, mus);
    ClassificationReport report;
    report.symmetric = verdict.holds;
    if (g.has_prime_exponent()) report.prime_exponent = g.exponent();
    report.forms_degenerate =
        check_coefficients(g, forms).off_diagonal_m_all_inadmissible;
    report.all_nonvanishing = true;
    report.all_degenerate = true;
    report.all_gaussian_haar = true;
    for (const Distribution& mu : mus) {
        DistributionClassification c;
        c.degenerate = is_degenerate(mu, tol);
        c.gaussian = is_gaussian(mu, tol);
        c.idempotent_shift = is_idempotent_shift(mu, tol);
        c.gaussian_haar = in_gaussian_haar_class(mu, tol);
        c.nonvanishing = char_function(mu).nonvanishing(tol);
        report.all_nonvanishing = report.all_nonvanishing && c.nonvanishing;
        report.all_degenerate = report.all_degenerate && c.degenerate;
        report.all_gaussian_haar = report.all_gaussian_haar && c.gaussian_haar;
        report.per_distribution.push_back(c);
    }
    if (!report.symmetric) {
        report.status = "not-symmetric";
    } else if (report.forms_degenerate) {
        report.status = "forms-degenerate";
    } else if (report.prime_exponent == 2) {
        report.status = "exponent-two-out-of-scope";
    } else if (report.prime_exponent &&
               (*report.prime_exponent == 3 || report.all_nonvanishing)) {
        report.status = report.all_degenerate ? "prime-exponent-consistent"
                                              : "prime-exponent-violated";
    } else if (report.all_degenerate) {
        report.status = "all-degenerate";
    } else if (report.all_nonvanishing) {
        report.status = "counterexample-nonvanishing";
    } else if (!report.all_gaussian_haar) {
        report.status = "counterexample-vanishing";
    } else {
        report.status = "within-haar-class";
    }
    return report;
}

}  // namespace heyde
