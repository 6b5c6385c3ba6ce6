#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "heyde/json_io.hpp"

namespace heyde::io {

/// Effective settings for one CLI command. Everything that influences a
/// report is either in here or in the input file, and is echoed into the
/// report's "defaults" object so runs are self-describing.
struct ReportConfig {
    double equation_tol = kEquationTol;
    double classify_tol = kClassifyTol;
    double tv_tol = kTvTol;
    std::uint64_t seed = 0;
    int jobs = 1;  // accepted and recorded; execution is single-threaded
    bool with_exact = false;
    bool with_q = false;
    bool with_classify = false;
    bool force = false;  // run the sweep even if the coefficient gate fails
};

struct CommandOutcome {
    ojson report;
    int exit_code = 0;
};

inline ojson defaults_json(const ReportConfig& cfg) {
    return ojson{{"equation_tolerance", jnum(cfg.equation_tol)},
                 {"classification_tolerance", jnum(cfg.classify_tol)},
                 {"tv_tolerance", jnum(cfg.tv_tol)},
                 {"mass_recovery_tolerance", jnum(kMassRecoveryTol)},
                 {"enum_bound", enumeration_bound()},
                 {"seed", cfg.seed},
                 {"jobs", cfg.jobs},
                 {"rng", "splitmix64"}};
}

inline ojson report_envelope(const std::string& command, const ReportConfig& cfg) {
    return ojson{{"tool", "heyde"}, {"command", command}, {"defaults", defaults_json(cfg)}};
}

/// The `check` command: coefficient gate, characteristic-function sweep,
/// optional exact, Q-form and classification passes. Exit code 0 means the
/// symmetry condition holds, 1 means it fails, 2 means the input violates
/// a precondition (including inadmissible coefficients, unless forced).
inline CommandOutcome build_check_report(const Instance& inst, const ReportConfig& cfg) {
    CommandOutcome out;
    out.report = report_envelope("check", cfg);
    out.report["group"] = to_json(inst.group);
    out.report["forms"] = to_json(inst.forms);
    const CoefficientReport coeffs = check_coefficients(inst.group, inst.forms);
    out.report["coefficients"] = to_json(coeffs, inst.forms);
    if (!coeffs.pass && !cfg.force) {
        out.report["error"] = "inadmissible coefficient";
        out.report["symmetric"] = nullptr;
        out.report["exit_code"] = 2;
        out.exit_code = 2;
        return out;
    }
    const HeydeVerdict cf =
        check_heyde_cf(inst.group, inst.forms, inst.mus, cfg.equation_tol);
    out.report["cf"] = verdict_to_json(cf, "u", "v");
    bool agree = true;
    if (cfg.with_exact) {
        const HeydeVerdict exact =
            check_heyde_exact(inst.group, inst.forms, inst.mus, cfg.tv_tol);
        out.report["exact"] = verdict_to_json(exact, "l1", "l2");
        agree = cf.holds == exact.holds;
        out.report["checkers_agree"] = agree;
    }
    bool q_failed = false;
    if (cfg.with_q) {
        try {
            const QHeydeResult q = check_q_heyde(inst.group, inst.forms, inst.mus,
                                                 cfg.equation_tol, cfg.classify_tol);
            out.report["q"] = ojson{{"verdict", verdict_to_json(q.verdict, "u", "v")},
                                    {"polynomial", to_json(q.polynomial)},
                                    {"log_ratio_at_zero", jnum(q.log_ratio_at_zero)}};
        } catch (const VanishingCharFunctionError& e) {
            out.report["q"] =
                ojson{{"error", "vanishing characteristic function"},
                      {"distribution_index",
                       static_cast<std::int64_t>(e.distribution_index())},
                      {"character", e.character_coords()}};
            q_failed = true;
        }
    }
    if (cfg.with_classify) {
        out.report["classification"] =
            to_json(classify_conclusion(inst.group, inst.forms, inst.mus, cf,
                                        cfg.classify_tol));
    }
    out.report["symmetric"] = cf.holds;
    out.exit_code = q_failed ? 2 : (cf.holds ? 0 : 1);
    if (!coeffs.pass) out.exit_code = 2;  // forced run still reports the gate failure
    out.report["exit_code"] = out.exit_code;
    return out;
}

/// The `construct` command: wraps a pre-verified construction. Exit code 0
/// when every verification item passed.
inline CommandOutcome build_construct_report(
    const counterexamples::CounterexampleInstance& cx, const ReportConfig& cfg) {
    CommandOutcome out;
    out.report = report_envelope("construct", cfg);
    out.report["result"] = to_json(cx);
    out.exit_code = cx.verified() ? 0 : 1;
    out.report["exit_code"] = out.exit_code;
    return out;
}

/// The `classify` command for a single distribution.
inline CommandOutcome build_classify_report(const Distribution& mu,
                                            const ReportConfig& cfg) {
    CommandOutcome out;
    out.report = report_envelope("classify", cfg);
    const CharFunction f = char_function(mu);
    out.report["group"] = to_json(mu.group());
    out.report["support_size"] =
        static_cast<std::int64_t>(support(mu, kAlgebraTol).size());
    out.report["degenerate"] = is_degenerate(mu, cfg.classify_tol);
    out.report["gaussian"] = is_gaussian(mu, cfg.classify_tol);
    out.report["idempotent_shift"] = is_idempotent_shift(mu, cfg.classify_tol);
    out.report["gaussian_haar"] = in_gaussian_haar_class(mu, cfg.classify_tol);
    out.report["nonvanishing"] = f.nonvanishing(cfg.classify_tol);
    out.report["min_transform_modulus"] = jnum(f.min_modulus());
    out.exit_code = 0;
    out.report["exit_code"] = out.exit_code;
    return out;
}

/// The `polytest` command. Exit code 0 when the function is a polynomial,
/// 1 otherwise.
inline CommandOutcome build_polytest_report(const GroupFunction& f,
                                            std::optional<std::int64_t> max_degree,
                                            const ReportConfig& cfg) {
    CommandOutcome out;
    out.report = report_envelope("polytest", cfg);
    const PolynomialTestResult result =
        is_polynomial(f, max_degree, cfg.classify_tol);
    out.report["group"] = to_json(f.domain());
    out.report["max_degree"] = max_degree ? ojson(*max_degree) : ojson(nullptr);
    out.report["result"] = to_json(result);
    out.exit_code = result.is_polynomial ? 0 : 1;
    out.report["exit_code"] = out.exit_code;
    return out;
}

/// The `oracle sample` command: Monte Carlo report plus the exact verdict
/// it is checked against.
inline CommandOutcome build_sample_report(const Instance& inst, std::int64_t trials,
                                          const ReportConfig& cfg) {
    CommandOutcome out;
    out.report = report_envelope("oracle-sample", cfg);
    out.report["group"] = to_json(inst.group);
    out.report["forms"] = to_json(inst.forms);
    out.report["sample"] =
        to_json(oracle::sample_check(inst.group, inst.forms, inst.mus, trials, cfg.seed));
    out.report["exact"] = verdict_to_json(
        check_heyde_exact(inst.group, inst.forms, inst.mus, cfg.tv_tol), "l1", "l2");
    out.exit_code = 0;
    out.report["exit_code"] = out.exit_code;
    return out;
}

}  // namespace heyde::io
