#pragma once

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "heyde/counterexamples.hpp"
#include "heyde/distribution.hpp"
#include "heyde/finite_difference.hpp"
#include "heyde/group.hpp"
#include "heyde/linear_forms.hpp"
#include "heyde/oracle.hpp"
#include "heyde/symmetry.hpp"

namespace heyde::io {

/// Reports use ordered maps so key order, and therefore serialized bytes,
/// are fixed by construction order.
using ojson = nlohmann::ordered_json;

/// Rounds to 15 significant digits. Emitted numbers are stable against
/// jitter in the last few bits and re-parse to the same value.
inline double canon15(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value in report");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return std::strtod(buf, nullptr);
}

inline ojson jnum(double x) { return ojson(canon15(x)); }

// ---- groups ----

inline ojson to_json(const Group& g) { return ojson{{"moduli", g.moduli()}}; }

/// Parses "Z(4)xZ(3)" (case-insensitive, spaces ignored).
inline Group parse_group_literal(const std::string& text) {
    std::string s;
    for (const char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    std::vector<std::int64_t> moduli;
    std::size_t at = 0;
    const auto fail = [&]() {
        throw std::invalid_argument("cannot parse group literal \"" + text +
                                    "\"; expected the form Z(4)xZ(3)");
    };
    while (true) {
        if (at >= s.size() || (s[at] != 'Z' && s[at] != 'z')) fail();
        ++at;
        if (at >= s.size() || s[at] != '(') fail();
        ++at;
        std::size_t digits = 0;
        std::int64_t value = 0;
        while (at < s.size() && std::isdigit(static_cast<unsigned char>(s[at]))) {
            value = value * 10 + (s[at] - '0');
            ++digits;
            ++at;
            if (digits > 18) fail();
        }
        if (digits == 0 || at >= s.size() || s[at] != ')') fail();
        ++at;
        moduli.push_back(value);
        if (at == s.size()) break;
        if (s[at] != 'x' && s[at] != 'X') fail();
        ++at;
    }
    return Group(std::move(moduli));
}

inline std::string group_literal(const Group& g) {
    std::string out;
    for (std::size_t i = 0; i < g.moduli().size(); ++i) {
        if (i) out += "x";
        out += "Z(" + std::to_string(g.moduli()[i]) + ")";
    }
    return out;
}

inline Group group_from_json(const ojson& j) {
    if (j.is_string()) return parse_group_literal(j.get<std::string>());
    if (j.is_object() && j.contains("moduli"))
        return Group(j.at("moduli").get<std::vector<std::int64_t>>());
    throw std::invalid_argument(
        "group must be a literal string or an object with \"moduli\"");
}

inline std::vector<std::int64_t> coords_from_json(const Group& g, const ojson& j) {
    const auto coords = j.get<std::vector<std::int64_t>>();
    if (coords.size() != g.rank())
        throw std::invalid_argument("coordinate count does not match group rank");
    return coords;
}

// ---- distributions ----

inline ojson to_json(const Distribution& mu) {
    ojson probs = ojson::array();
    for (std::int64_t i = 0; i < mu.group().order(); ++i) {
        if (mu.mass_at(i) != 0.0) {
            probs.push_back(
                ojson{{"coords", mu.group().coords_at(i)}, {"mass", jnum(mu.mass_at(i))}});
        }
    }
    return ojson{{"group", to_json(mu.group())}, {"probs", std::move(probs)}};
}

namespace detail_io {

/// Mass entries accept JSON numbers and exact rational strings.
struct MassValue {
    double as_double = 0.0;
    std::optional<Rational> exact;
};

inline MassValue parse_mass(const ojson& j) {
    MassValue m;
    if (j.is_string()) {
        m.exact = Rational::parse(j.get<std::string>());
        m.as_double = m.exact->to_double();
        return m;
    }
    if (j.is_number_integer()) {
        m.exact = Rational(j.get<std::int64_t>());
        m.as_double = m.exact->to_double();
        return m;
    }
    if (j.is_number()) {
        m.as_double = j.get<double>();
        return m;
    }
    throw std::invalid_argument("mass must be a number or a rational string");
}

inline Group resolve_group(const ojson& j, const std::optional<Group>& ambient) {
    if (j.is_object() && j.contains("group")) return group_from_json(j.at("group"));
    if (ambient) return *ambient;
    throw std::invalid_argument("distribution needs a \"group\" (none inherited)");
}

}  // namespace detail_io

inline Distribution distribution_from_json(const ojson& j,
                                           const std::optional<Group>& ambient = {});

namespace detail_io {

inline Distribution from_probs(const Group& g, const ojson& probs) {
    if (!probs.is_array() || probs.empty())
        throw std::invalid_argument("\"probs\" must be a non-empty array");
    std::vector<MassValue> masses(static_cast<std::size_t>(g.order()));
    std::vector<bool> used(static_cast<std::size_t>(g.order()), false);
    bool all_exact = true;
    double total = 0.0;
    for (const ojson& entry : probs) {
        const auto coords = g.reduce(coords_from_json(g, entry.at("coords")));
        const std::size_t at = static_cast<std::size_t>(g.index_of(coords));
        if (used[at]) throw std::invalid_argument("duplicate support point in \"probs\"");
        used[at] = true;
        masses[at] = parse_mass(entry.at("mass"));
        if (masses[at].as_double < -kAlgebraTol)
            throw std::invalid_argument("negative mass in \"probs\"");
        all_exact = all_exact && masses[at].exact.has_value();
        total += masses[at].as_double;
    }
    if (std::abs(total - 1.0) > 1e-6)
        throw std::invalid_argument("masses sum to " + std::to_string(total) +
                                    ", expected 1");
    if (all_exact) {
        std::vector<Rational> weights(masses.size());
        for (std::size_t i = 0; i < masses.size(); ++i)
            weights[i] = masses[i].exact.value_or(Rational(0));
        return Distribution::from_rational_weights(g, weights);
    }
    std::vector<double> weights(masses.size());
    for (std::size_t i = 0; i < masses.size(); ++i)
        weights[i] = std::max(0.0, masses[i].as_double);
    return Distribution::from_weights(g, weights);
}

}  // namespace detail_io

inline Distribution distribution_from_json(const ojson& j,
                                           const std::optional<Group>& ambient) {
    if (!j.is_object()) throw std::invalid_argument("distribution must be an object");
    const Group g = detail_io::resolve_group(j, ambient);
    if (j.contains("kind")) {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "point_mass")
            return Distribution::point_mass(g.element(coords_from_json(g, j.at("at"))));
        if (kind == "uniform") return Distribution::uniform(g);
        if (kind == "haar") {
            if (!j.contains("generators")) return Distribution::uniform(g);
            std::vector<Element> gens;
            for (const ojson& c : j.at("generators"))
                gens.push_back(g.element(coords_from_json(g, c)));
            return Distribution::haar(subgroup_generated(g, gens));
        }
        if (kind == "mixture") {
            std::vector<std::pair<double, Distribution>> parts;
            for (const ojson& comp : j.at("components")) {
                const auto weight = detail_io::parse_mass(comp.at("weight"));
                parts.emplace_back(weight.as_double,
                                   distribution_from_json(comp.at("distribution"), g));
            }
            return Distribution::mixture(parts);
        }
        throw std::invalid_argument("unknown distribution kind \"" + kind + "\"");
    }
    if (!j.contains("probs"))
        throw std::invalid_argument("distribution needs \"probs\" or a \"kind\"");
    return detail_io::from_probs(g, j.at("probs"));
}

// ---- linear forms and instances ----

inline ojson to_json(const LinearFormsSpec& forms) {
    return ojson{{"a", forms.a()}, {"b", forms.b()}};
}

inline LinearFormsSpec forms_from_json(const ojson& j) {
    return LinearFormsSpec(j.at("a").get<std::vector<std::int64_t>>(),
                           j.at("b").get<std::vector<std::int64_t>>());
}

inline ojson to_json(const Instance& inst) {
    ojson dists = ojson::array();
    for (const Distribution& mu : inst.mus) {
        ojson d = to_json(mu);
        d.erase("group");  // inherited from the instance
        dists.push_back(std::move(d));
    }
    return ojson{{"group", to_json(inst.group)},
                 {"a", inst.forms.a()},
                 {"b", inst.forms.b()},
                 {"distributions", std::move(dists)}};
}

inline Instance instance_from_json(const ojson& j) {
    Group g = group_from_json(j.at("group"));
    LinearFormsSpec forms(j.at("a").get<std::vector<std::int64_t>>(),
                          j.at("b").get<std::vector<std::int64_t>>());
    std::vector<Distribution> mus;
    for (const ojson& d : j.at("distributions"))
        mus.push_back(distribution_from_json(d, g));
    Instance inst{std::move(g), std::move(forms), std::move(mus)};
    validate_instance(inst);
    return inst;
}

// ---- verdicts and reports ----

inline ojson verdict_to_json(const HeydeVerdict& v, const char* first_label,
                             const char* second_label) {
    ojson out{{"holds", v.holds},
              {"max_violation", jnum(v.max_violation)},
              {"tolerance", jnum(v.tolerance)}};
    if (v.witness) {
        out["witness"] =
            ojson{{first_label, (*v.witness)[0]}, {second_label, (*v.witness)[1]}};
    } else {
        out["witness"] = nullptr;
    }
    return out;
}

inline ojson to_json(const CoefficientReport& r, const LinearFormsSpec& forms) {
    const std::size_t n = forms.count();
    ojson l = ojson::array(), m = ojson::array();
    for (std::size_t i = 0; i < n; ++i) {
        ojson lrow = ojson::array(), mrow = ojson::array();
        for (std::size_t j = 0; j < n; ++j) {
            lrow.push_back(forms.l(i, j));
            mrow.push_back(forms.m(i, j));
        }
        l.push_back(std::move(lrow));
        m.push_back(std::move(mrow));
    }
    return ojson{{"a_admissible", r.a_admissible},
                 {"b_admissible", r.b_admissible},
                 {"l", std::move(l)},
                 {"l_admissible", r.l_admissible},
                 {"m", std::move(m)},
                 {"m_admissible", r.m_admissible},
                 {"pass", r.pass},
                 {"off_diagonal_m_all_inadmissible", r.off_diagonal_m_all_inadmissible}};
}

inline ojson to_json(const PolynomialTestResult& r) {
    ojson out{{"is_polynomial", r.is_polynomial}};
    out["degree"] = r.degree ? ojson(*r.degree) : ojson(nullptr);
    if (r.witness)
        out["witness"] =
            ojson{{"direction", r.witness->direction}, {"point", r.witness->point}};
    else
        out["witness"] = nullptr;
    return out;
}

inline ojson to_json(const DistributionClassification& c) {
    return ojson{{"degenerate", c.degenerate},
                 {"gaussian", c.gaussian},
                 {"idempotent_shift", c.idempotent_shift},
                 {"gaussian_haar", c.gaussian_haar},
                 {"nonvanishing", c.nonvanishing}};
}

inline ojson to_json(const ClassificationReport& r) {
    ojson per = ojson::array();
    for (const DistributionClassification& c : r.per_distribution)
        per.push_back(to_json(c));
    return ojson{{"symmetric", r.symmetric},
                 {"prime_exponent", r.prime_exponent ? ojson(*r.prime_exponent)
                                                     : ojson(nullptr)},
                 {"forms_degenerate", r.forms_degenerate},
                 {"all_nonvanishing", r.all_nonvanishing},
                 {"all_degenerate", r.all_degenerate},
                 {"all_gaussian_haar", r.all_gaussian_haar},
                 {"per_distribution", std::move(per)},
                 {"status", r.status}};
}

inline ojson to_json(const oracle::SampleReport& r) {
    return ojson{{"algorithm", r.algorithm},
                 {"seed", r.seed},
                 {"trials", r.trials},
                 {"tv_empirical_pair", jnum(r.tv_empirical_pair)},
                 {"tv_vs_exact", jnum(r.tv_vs_exact)},
                 {"chi_square", jnum(r.chi_square)},
                 {"chi_cells", r.chi_cells}};
}

inline ojson to_json(const counterexamples::CounterexampleInstance& cx) {
    ojson params = ojson::object();
    if (cx.x0) params["x0"] = *cx.x0;
    if (cx.p) params["p"] = *cx.p;
    if (cx.k) params["k"] = *cx.k;
    if (cx.y1) params["y1"] = *cx.y1;
    if (cx.y2) params["y2"] = *cx.y2;
    if (cx.a_weight) params["a_weight"] = jnum(*cx.a_weight);
    ojson checks = ojson::array();
    for (const counterexamples::CheckItem& c : cx.checks)
        checks.push_back(ojson{{"name", c.name}, {"ok", c.ok}, {"error", jnum(c.error)}});
    return ojson{{"kind", cx.kind},
                 {"params", std::move(params)},
                 {"instance", to_json(cx.instance)},
                 {"verification", ojson{{"cf", verdict_to_json(cx.cf, "u", "v")},
                                        {"exact", verdict_to_json(cx.exact, "l1", "l2")},
                                        {"checks", std::move(checks)},
                                        {"warnings", cx.warnings},
                                        {"verified", cx.verified()}}}};
}

// ---- tabulated functions ----

inline ojson to_json(const GroupFunction& f) {
    ojson values = ojson::array();
    for (std::int64_t i = 0; i < f.domain().order(); ++i) {
        const std::complex<double> v = f.value_at(i);
        if (v != 0.0)
            values.push_back(ojson{{"coords", f.domain().coords_at(i)},
                                   {"re", jnum(v.real())},
                                   {"im", jnum(v.imag())}});
    }
    return ojson{{"group", to_json(f.domain())}, {"values", std::move(values)}};
}

/// Reads a tabulated function; entries omitted from "values" are zero and
/// "im" defaults to zero.
inline GroupFunction group_function_from_json(const ojson& j) {
    const Group g = group_from_json(j.at("group"));
    std::vector<std::complex<double>> values(static_cast<std::size_t>(g.order()), 0.0);
    for (const ojson& entry : j.at("values")) {
        const auto coords = g.reduce(coords_from_json(g, entry.at("coords")));
        const double re = entry.at("re").get<double>();
        const double im = entry.contains("im") ? entry.at("im").get<double>() : 0.0;
        values[static_cast<std::size_t>(g.index_of(coords))] = {re, im};
    }
    return GroupFunction(g, std::move(values));
}

}  // namespace heyde::io
