#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "heyde/group.hpp"

namespace heyde {

/// Integer coefficients of a pair of linear forms
///   L1 = a_1 x_1 + ... + a_n x_n,   L2 = b_1 x_1 + ... + b_n x_n
/// in n >= 2 independent group-valued variables, together with the derived
/// cross sums l_ij = a_j b_i + b_j a_i and differences
/// m_ij = a_j b_i - b_j a_i that drive the finite-difference elimination.
/// Indices are zero-based; the diagonal sums are l_jj = 2 a_j b_j.
class LinearFormsSpec {
public:
    LinearFormsSpec(std::vector<std::int64_t> a, std::vector<std::int64_t> b)
        : a_(std::move(a)), b_(std::move(b)) {
        if (a_.size() != b_.size())
            throw std::invalid_argument("coefficient lists must have equal length");
        if (a_.size() < 2)
            throw std::invalid_argument("need at least two variables");
    }

    std::size_t count() const { return a_.size(); }
    const std::vector<std::int64_t>& a() const { return a_; }
    const std::vector<std::int64_t>& b() const { return b_; }

    std::int64_t l(std::size_t i, std::size_t j) const {
        return a_[j] * b_[i] + b_[j] * a_[i];
    }
    std::int64_t m(std::size_t i, std::size_t j) const {
        return a_[j] * b_[i] - b_[j] * a_[i];
    }

    /// The forms with every b_j negated; symmetry verdicts are invariant
    /// under this substitution.
    LinearFormsSpec with_negated_b() const {
        std::vector<std::int64_t> nb(b_.size());
        for (std::size_t j = 0; j < b_.size(); ++j) nb[j] = -b_[j];
        return LinearFormsSpec(a_, std::move(nb));
    }

    friend bool operator==(const LinearFormsSpec& x, const LinearFormsSpec& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator!=(const LinearFormsSpec& x, const LinearFormsSpec& y) {
        return !(x == y);
    }

private:
    std::vector<std::int64_t> a_;
    std::vector<std::int64_t> b_;
};

/// Admissibility report for a coefficient spec over a concrete group.
/// The gate follows the positive-case hypotheses: every a_j, every b_j and
/// every cross sum l_ij (including the diagonal 2 a_j b_j) must act
/// nontrivially on the group. The cross differences m_ij are reported but
/// never gate; when all off-diagonal m_ij act trivially the two forms are
/// proportional and the symmetry question degenerates, which
/// classification reports as its own case.
struct CoefficientReport {
    std::vector<bool> a_admissible;
    std::vector<bool> b_admissible;
    std::vector<std::vector<bool>> l_admissible;  // n x n
    std::vector<std::vector<bool>> m_admissible;  // n x n; diagonal is always false
    bool pass = false;
    bool off_diagonal_m_all_inadmissible = false;
};

inline CoefficientReport check_coefficients(const Group& g, const LinearFormsSpec& forms) {
    const std::size_t n = forms.count();
    CoefficientReport report;
    report.a_admissible.resize(n);
    report.b_admissible.resize(n);
    report.l_admissible.assign(n, std::vector<bool>(n));
    report.m_admissible.assign(n, std::vector<bool>(n));
    report.pass = true;
    report.off_diagonal_m_all_inadmissible = true;
    for (std::size_t j = 0; j < n; ++j) {
        report.a_admissible[j] = is_admissible(g, forms.a()[j]);
        report.b_admissible[j] = is_admissible(g, forms.b()[j]);
        report.pass = report.pass && report.a_admissible[j] && report.b_admissible[j];
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            report.l_admissible[i][j] = is_admissible(g, forms.l(i, j));
            report.m_admissible[i][j] = is_admissible(g, forms.m(i, j));
            report.pass = report.pass && report.l_admissible[i][j];
            if (i != j && report.m_admissible[i][j])
                report.off_diagonal_m_all_inadmissible = false;
        }
    }
    return report;
}

}  // namespace heyde
