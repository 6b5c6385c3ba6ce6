// Command line front end. All substance lives in the headers; this file
// parses arguments and files, dispatches to the report builders and prints
// one JSON report per run. Exit codes: 0 the checked property holds, 1 it
// fails, 2 input or precondition error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heyde/heyde.hpp"

namespace {

using heyde::io::ojson;

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open \"" + path + "\"");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ojson parse_json_file(const std::string& path) {
    try {
        return ojson::parse(slurp(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
    }
}

double parse_weight(const std::string& text) {
    if (text.find('/') != std::string::npos)
        return heyde::Rational::parse(text).to_double();
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size())
        throw std::invalid_argument("cannot parse weight \"" + text + "\"");
    return v;
}

void apply_enum_bound_env() {
    const char* env = std::getenv("HEYDE_ENUM_BOUND");
    if (!env) return;
    std::size_t used = 0;
    std::int64_t bound = 0;
    try {
        bound = std::stoll(env, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("HEYDE_ENUM_BOUND is not an integer");
    }
    if (used != std::string(env).size() || bound < 1)
        throw std::invalid_argument("HEYDE_ENUM_BOUND must be a positive integer");
    heyde::set_enumeration_bound(bound);
}

int emit(const heyde::io::CommandOutcome& outcome) {
    std::cout << outcome.report.dump(2) << "\n";
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact symmetry analysis of linear forms in independent random\n"
                 "variables on finite Abelian groups"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand

    heyde::io::ReportConfig cfg;
    std::uint64_t seed = 0;
    app.add_option("--tolerance", cfg.equation_tol,
                   "equation sweep tolerance")
        ->capture_default_str();
    app.add_option("--classify-tolerance", cfg.classify_tol,
                   "classification predicate tolerance")
        ->capture_default_str();
    app.add_option("--tv-tolerance", cfg.tv_tol,
                   "total variation tolerance for the exact checker")
        ->capture_default_str();
    app.add_option("--seed", seed, "PRNG seed (splitmix64)")->capture_default_str();
    app.add_option("--jobs", cfg.jobs,
                   "worker count; recorded in reports, execution is single-threaded")
        ->capture_default_str();

    // check
    CLI::App* check = app.add_subcommand(
        "check", "verdict for the symmetry condition of an instance file");
    std::string check_file;
    check->add_option("file", check_file, "instance JSON (\"-\" for stdin)")->required();
    check->add_flag("--exact", cfg.with_exact,
                    "also run the exact joint-law checker");
    check->add_flag("--q", cfg.with_q, "also run the Q-form (log-ratio) checker");
    check->add_flag("--classify", cfg.with_classify,
                    "classify the conclusion for the instance");
    check->add_flag("--force", cfg.force,
                    "run the sweep even if the coefficient gate fails (exit stays 2)");

    // construct
    CLI::App* construct = app.add_subcommand(
        "construct", "build a pre-verified instance (kinds: thm1-ii, lemma5, lemma6)");
    std::string kind;
    construct->add_option("kind", kind, "construction kind")
        ->required()
        ->check(CLI::IsMember({"thm1-ii", "lemma5", "lemma6"}));
    std::string group_literal;
    std::vector<std::int64_t> x0;
    std::int64_t p = 0, k = 2, y1 = 1, y2 = 2;
    std::string a_weight = "1/2";
    construct->add_option("--group", group_literal,
                          "group literal, e.g. \"Z(9)\" (thm1-ii)");
    construct->add_option("--x0", x0, "generator coordinates (thm1-ii)");
    construct->add_option("--p", p, "prime parameter (lemma5, lemma6)");
    construct->add_option("--k", k, "power parameter, >= 2 (lemma5)")
        ->capture_default_str();
    construct->add_option("--y1", y1, "first character label (lemma6)")
        ->capture_default_str();
    construct->add_option("--y2", y2, "second character label (lemma6)")
        ->capture_default_str();
    construct->add_option("--a-weight", a_weight,
                          "mixture weight in (0,1), rational or decimal")
        ->capture_default_str();

    // classify
    CLI::App* classify = app.add_subcommand(
        "classify", "membership of one distribution in the conclusion classes");
    std::string classify_file;
    classify->add_option("file", classify_file, "distribution JSON (\"-\" for stdin)")
        ->required();

    // polytest
    CLI::App* polytest = app.add_subcommand(
        "polytest", "finite-difference polynomial test for a tabulated function");
    std::string polytest_file;
    std::int64_t max_degree = -1;
    polytest->add_option("file", polytest_file, "function JSON (\"-\" for stdin)")
        ->required();
    polytest->add_option("--max-degree", max_degree,
                         "largest degree to probe (default: group order)");

    // oracle sample
    CLI::App* oracle_cmd = app.add_subcommand("oracle", "statistical cross-checks");
    oracle_cmd->require_subcommand(1);
    oracle_cmd->fallthrough();
    CLI::App* sample = oracle_cmd->add_subcommand(
        "sample", "Monte Carlo check of an instance against the exact joint law");
    std::string sample_file;
    std::int64_t trials = 10000;
    sample->add_option("file", sample_file, "instance JSON (\"-\" for stdin)")->required();
    sample->add_option("--trials", trials, "number of samples")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        apply_enum_bound_env();
        cfg.seed = seed;
        if (check->parsed()) {
            const heyde::Instance inst =
                heyde::io::instance_from_json(parse_json_file(check_file));
            return emit(heyde::io::build_check_report(inst, cfg));
        }
        if (construct->parsed()) {
            const double weight = parse_weight(a_weight);
            const auto build = [&]() -> heyde::counterexamples::CounterexampleInstance {
                if (kind == "thm1-ii") {
                    if (group_literal.empty() || x0.empty())
                        throw std::invalid_argument("thm1-ii needs --group and --x0");
                    const heyde::Group g = heyde::io::parse_group_literal(group_literal);
                    return heyde::counterexamples::subgroup_mixture_instance(
                        g, g.element(x0), weight);
                }
                if (kind == "lemma5")
                    return heyde::counterexamples::truncated_padic_mixture_instance(
                        p == 0 ? 3 : p, k, weight);
                return heyde::counterexamples::harmonic_density_instance(
                    p == 0 ? 5 : p, y1, y2);
            };
            return emit(heyde::io::build_construct_report(build(), cfg));
        }
        if (classify->parsed()) {
            const heyde::Distribution mu =
                heyde::io::distribution_from_json(parse_json_file(classify_file));
            return emit(heyde::io::build_classify_report(mu, cfg));
        }
        if (polytest->parsed()) {
            const heyde::GroupFunction f =
                heyde::io::group_function_from_json(parse_json_file(polytest_file));
            return emit(heyde::io::build_polytest_report(
                f,
                max_degree < 0 ? std::nullopt
                               : std::optional<std::int64_t>(max_degree),
                cfg));
        }
        if (sample->parsed()) {
            const heyde::Instance inst =
                heyde::io::instance_from_json(parse_json_file(sample_file));
            return emit(heyde::io::build_sample_report(inst, trials, cfg));
        }
    } catch (const std::exception& e) {
        std::cerr << ojson{{"error", e.what()}}.dump(2) << "\n";
        return 2;
    }
    return 2;
}
