#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "heyde/json_io.hpp"
#include "heyde/reports.hpp"

using namespace heyde;
namespace io = heyde::io;
using io::ojson;

namespace {

// Shared symmetric instance: two copies of the half point mass, half Haar
// mixture on Z(9) under forms whose sweep passes.
const char* const kMixtureInstanceJson = R"json({
  "group": "Z(9)",
  "a": [3, -1],
  "b": [1, 3],
  "distributions": [
    {"kind": "mixture", "components": [
      {"weight": "1/2", "distribution": {"kind": "point_mass", "at": [0]}},
      {"weight": "1/2", "distribution": {"kind": "haar", "generators": [[3]]}}]},
    {"kind": "mixture", "components": [
      {"weight": "1/2", "distribution": {"kind": "point_mass", "at": [0]}},
      {"weight": "1/2", "distribution": {"kind": "haar", "generators": [[3]]}}]}
  ]
})json";

Instance point_mass_pair(const Group& g, std::int64_t at1, std::int64_t at2,
                         std::vector<std::int64_t> a, std::vector<std::int64_t> b) {
    std::vector<Distribution> mus{
        Distribution::point_mass(g.element({at1})),
        Distribution::point_mass(g.element({at2}))};
    return Instance{g, LinearFormsSpec(std::move(a), std::move(b)), std::move(mus)};
}

}  // namespace

TEST_CASE("group literals parse with flexible case and spacing", "[json]") {
    CHECK(io::parse_group_literal("Z(4)xZ(3)").moduli() ==
          std::vector<std::int64_t>{4, 3});
    CHECK(io::parse_group_literal(" z( 12 ) X z(2) ").moduli() ==
          std::vector<std::int64_t>{12, 2});
    CHECK(io::parse_group_literal("Z(7)").moduli() == std::vector<std::int64_t>{7});

    CHECK(io::group_literal(Group({4, 3})) == "Z(4)xZ(3)");
    for (const auto& moduli :
         std::vector<std::vector<std::int64_t>>{{5}, {2, 2, 2}, {9, 4}}) {
        const Group g(moduli);
        CHECK(io::parse_group_literal(io::group_literal(g)) == g);
    }
}

TEST_CASE("malformed group literals are rejected", "[json]") {
    for (const char* bad : {"", "Z", "Z(", "Z()", "Z(4", "Z(4)x", "Z(4)yZ(3)", "4x3",
                            "Z(4)Z(3)", "xZ(4)", "Z(9999999999999999999)"}) {
        CHECK_THROWS_AS(io::parse_group_literal(bad), std::invalid_argument);
    }
    // parses as a literal but fails group construction
    CHECK_THROWS_AS(io::parse_group_literal("Z(1)"), std::invalid_argument);
    CHECK_THROWS_AS(io::parse_group_literal("Z(0)"), std::invalid_argument);
}

TEST_CASE("group json accepts literal strings and moduli objects", "[json]") {
    CHECK(io::group_from_json(ojson("Z(6)")) == Group({6}));
    CHECK(io::group_from_json(ojson::parse(R"json({"moduli": [2, 4]})json")) == Group({2, 4}));

    const Group g({3, 9});
    CHECK(io::to_json(g) == ojson::parse(R"json({"moduli": [3, 9]})json"));
    CHECK(io::group_from_json(io::to_json(g)) == g);

    CHECK_THROWS_AS(io::group_from_json(ojson(6)), std::invalid_argument);
    CHECK_THROWS_AS(io::group_from_json(ojson::parse(R"json({"order": 6})json")),
                    std::invalid_argument);
}

TEST_CASE("distribution kinds cover point masses, haar laws, and mixtures", "[json]") {
    const Distribution point = io::distribution_from_json(
        ojson::parse(R"json({"group": "Z(5)", "kind": "point_mass", "at": [2]})json"));
    CHECK(point.mass_at(2) == 1.0);
    CHECK(point.mass_at(0) == 0.0);

    const Distribution unif =
        io::distribution_from_json(ojson::parse(R"json({"kind": "uniform"})json"), Group({4}));
    for (std::int64_t i = 0; i < 4; ++i) CHECK(unif.mass_at(i) == 0.25);

    const Distribution haar = io::distribution_from_json(ojson::parse(
        R"json({"group": "Z(4)", "kind": "haar", "generators": [[2]]})json"));
    CHECK(haar.mass_at(0) == 0.5);
    CHECK(haar.mass_at(1) == 0.0);
    CHECK(haar.mass_at(2) == 0.5);

    // without generators the haar law is the full uniform
    const Distribution whole = io::distribution_from_json(
        ojson::parse(R"json({"group": "Z(3)", "kind": "haar"})json"));
    CHECK(whole.mass_at(1) == Catch::Approx(1.0 / 3.0).margin(1e-15));

    const Distribution mix = io::distribution_from_json(ojson::parse(R"json({
        "group": "Z(3)", "kind": "mixture", "components": [
          {"weight": "1/2", "distribution": {"kind": "uniform"}},
          {"weight": "1/2", "distribution": {"kind": "point_mass", "at": [0]}}]})json"));
    CHECK(mix.mass_at(0) == Catch::Approx(2.0 / 3.0).margin(1e-15));
    CHECK(mix.mass_at(1) == Catch::Approx(1.0 / 6.0).margin(1e-15));

    CHECK_THROWS_AS(io::distribution_from_json(ojson::parse(
                        R"json({"group": "Z(3)", "kind": "gaussian"})json")),
                    std::invalid_argument);
}

TEST_CASE("probs entries with rational strings reconstruct masses exactly", "[json]") {
    const Group g({3});
    const Distribution parsed = io::distribution_from_json(ojson::parse(R"json({
        "group": "Z(3)", "probs": [
          {"coords": [0], "mass": "1/6"},
          {"coords": [1], "mass": "1/3"},
          {"coords": [2], "mass": "1/2"}]})json"));
    const Distribution expected = Distribution::from_rational_weights(
        g, {Rational(1, 6), Rational(1, 3), Rational(1, 2)});
    for (std::int64_t i = 0; i < 3; ++i)
        CHECK(parsed.mass_at(i) == expected.mass_at(i));

    // integer masses take the exact path too
    const Distribution one = io::distribution_from_json(ojson::parse(
        R"json({"group": "Z(3)", "probs": [{"coords": [1], "mass": 1}]})json"));
    CHECK(one.mass_at(1) == 1.0);

    // a single float entry drops the whole list to the floating path
    const Distribution mixed = io::distribution_from_json(ojson::parse(R"json({
        "group": "Z(3)", "probs": [
          {"coords": [0], "mass": "1/4"},
          {"coords": [1], "mass": 0.75}]})json"));
    CHECK(mixed.mass_at(0) == 0.25);
    CHECK(mixed.mass_at(1) == 0.75);
}

TEST_CASE("probs validation rejects duplicates, negatives, and bad sums", "[json]") {
    const auto parse_dist = [](const char* text) {
        return io::distribution_from_json(ojson::parse(text));
    };
    // [4] reduces to [1] on Z(3)
    CHECK_THROWS_AS(parse_dist(R"json({"group": "Z(3)", "probs": [
        {"coords": [1], "mass": "1/2"}, {"coords": [4], "mass": "1/2"}]})json"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_dist(R"json({"group": "Z(3)", "probs": [
        {"coords": [0], "mass": 1.2}, {"coords": [1], "mass": -0.2}]})json"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_dist(R"json({"group": "Z(3)", "probs": [
        {"coords": [0], "mass": 0.4}, {"coords": [1], "mass": 0.3}]})json"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_dist(R"json({"group": "Z(3)", "probs": []})json"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_dist(R"json({"group": "Z(3)", "probs": [
        {"coords": [0], "mass": true}]})json"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_dist(R"json({"group": "Z(3)", "probs": [
        {"coords": [0], "mass": "0.5"}, {"coords": [1], "mass": "1/2"}]})json"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_dist(R"json({"group": "Z(3)", "probs": [
        {"coords": [0, 0], "mass": 1}]})json"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_dist(R"json({"group": "Z(3)", "probs": [
        {"coords": [0], "mass": "1/0"}]})json"),
                    std::domain_error);
    // no group key and no ambient group to inherit
    CHECK_THROWS_AS(io::distribution_from_json(
                        ojson::parse(R"json({"probs": [{"coords": [0], "mass": 1}]})json")),
                    std::invalid_argument);

    // a sum within 1e-6 of one is accepted and renormalized
    const Distribution near = parse_dist(R"json({"group": "Z(2)", "probs": [
        {"coords": [0], "mass": 0.5}, {"coords": [1], "mass": 0.5000001}]})json");
    CHECK(std::abs(near.mass_at(0) + near.mass_at(1) - 1.0) < 1e-15);
}

TEST_CASE("distribution json roundtrips and omits zero masses", "[json]") {
    const Group g({4});
    const Distribution haar = Distribution::haar(
        subgroup_generated(g, {g.element({2})}));
    const ojson j = io::to_json(haar);
    CHECK(j.at("probs").size() == 2);

    const Distribution back = io::distribution_from_json(j);
    for (std::int64_t i = 0; i < g.order(); ++i)
        CHECK(back.mass_at(i) == haar.mass_at(i));  // dyadic masses survive exactly

    // non-dyadic masses roundtrip through 15 significant digits
    const Distribution thirds = Distribution::from_rational_weights(
        Group({3}), {Rational(1, 3), Rational(1, 3), Rational(1, 3)});
    const Distribution tback = io::distribution_from_json(io::to_json(thirds));
    for (std::int64_t i = 0; i < 3; ++i)
        CHECK(tback.mass_at(i) == Catch::Approx(thirds.mass_at(i)).margin(1e-14));
}

TEST_CASE("instance json inherits the ambient group and validates counts", "[json]") {
    const Instance inst = io::instance_from_json(ojson::parse(kMixtureInstanceJson));
    CHECK(inst.group == Group({9}));
    CHECK(inst.forms == LinearFormsSpec({3, -1}, {1, 3}));
    REQUIRE(inst.mus.size() == 2);
    CHECK(inst.mus[0].group() == inst.group);
    CHECK(inst.mus[0].mass_at(0) == Catch::Approx(2.0 / 3.0).margin(1e-15));
    CHECK(inst.mus[0].mass_at(3) == Catch::Approx(1.0 / 6.0).margin(1e-15));

    const ojson out = io::to_json(inst);
    for (const ojson& d : out.at("distributions")) CHECK_FALSE(d.contains("group"));
    const Instance back = io::instance_from_json(out);
    CHECK(back.forms == inst.forms);
    for (std::int64_t i = 0; i < 9; ++i)
        CHECK(back.mus[1].mass_at(i) ==
              Catch::Approx(inst.mus[1].mass_at(i)).margin(1e-14));

    // two coefficients but only one distribution
    CHECK_THROWS_AS(io::instance_from_json(ojson::parse(R"json({
        "group": "Z(3)", "a": [1, 1], "b": [1, 2],
        "distributions": [{"kind": "uniform"}]})json")),
                    std::invalid_argument);
    // a member distribution on a different group than the instance
    CHECK_THROWS_AS(io::instance_from_json(ojson::parse(R"json({
        "group": "Z(3)", "a": [1, 1], "b": [1, 2],
        "distributions": [{"kind": "uniform"},
                          {"group": "Z(4)", "kind": "uniform"}]})json")),
                    GroupMismatchError);
}

TEST_CASE("canonical number formatting is idempotent and rejects non-finite input",
          "[json]") {
    CHECK(io::canon15(1.0 / 3.0) == std::stod("0.333333333333333"));
    CHECK(io::canon15(0.5) == 0.5);
    CHECK(io::canon15(-2.25) == -2.25);
    CHECK(io::canon15(0.1) == 0.1);
    CHECK(io::canon15(1e300) == 1e300);
    CHECK(io::canon15(0.0) == 0.0);

    for (const double x : {1.0 / 3.0, 3.141592653589793, std::sqrt(2.0), 1e-7 / 3.0}) {
        const double once = io::canon15(x);
        CHECK(io::canon15(once) == once);
    }

    CHECK_THROWS_AS(io::canon15(std::numeric_limits<double>::quiet_NaN()),
                    std::invalid_argument);
    CHECK_THROWS_AS(io::canon15(std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
    CHECK_THROWS_AS(io::canon15(-std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
    CHECK(io::jnum(0.75).get<double>() == 0.75);
}

TEST_CASE("verdict serialization labels witnesses and encodes absence as null",
          "[json]") {
    const Group g({5});
    const Instance failing = point_mass_pair(g, 1, 0, {1, 1}, {1, 1});
    const HeydeVerdict bad =
        check_heyde_cf(failing.group, failing.forms, failing.mus, 1e-9);
    REQUIRE_FALSE(bad.holds);
    const ojson jb = io::verdict_to_json(bad, "u", "v");
    CHECK(jb.at("holds") == false);
    CHECK(jb.at("tolerance").get<double>() == 1e-9);
    REQUIRE(jb.at("witness").is_object());
    CHECK(jb.at("witness").at("u").get<std::vector<std::int64_t>>() == (*bad.witness)[0]);
    CHECK(jb.at("witness").at("v").get<std::vector<std::int64_t>>() == (*bad.witness)[1]);

    const Instance holding = point_mass_pair(g, 1, 1, {1, 1}, {2, -2});
    const HeydeVerdict good =
        check_heyde_cf(holding.group, holding.forms, holding.mus, 1e-9);
    REQUIRE(good.holds);
    CHECK(io::verdict_to_json(good, "u", "v").at("witness").is_null());
}

TEST_CASE("polynomial test results serialize the degree or the witness", "[json]") {
    const Group g({5});
    const GroupFunction constant(
        g, std::vector<std::complex<double>>(5, {1.0, 0.0}));
    const ojson jc = io::to_json(is_polynomial(constant));
    CHECK(jc.at("is_polynomial") == true);
    CHECK(jc.at("degree") == 0);
    CHECK(jc.at("witness").is_null());

    std::vector<std::complex<double>> wave(5);
    for (std::int64_t i = 0; i < 5; ++i)
        wave[static_cast<std::size_t>(i)] =
            std::polar(1.0, 2.0 * 3.14159265358979323846 * static_cast<double>(i) / 5.0);
    const ojson jw = io::to_json(is_polynomial(GroupFunction(g, wave)));
    CHECK(jw.at("is_polynomial") == false);
    CHECK(jw.at("degree").is_null());
    REQUIRE(jw.at("witness").is_object());
    CHECK(jw.at("witness").contains("direction"));
    CHECK(jw.at("witness").contains("point"));
}

TEST_CASE("tabulated function json roundtrips with sparse values", "[json]") {
    const Group g({4});
    const GroupFunction f(
        g, {{1.0, 0.0}, {0.0, 0.0}, {-0.5, 0.0}, {0.0, 0.25}});
    const ojson j = io::to_json(f);
    CHECK(j.at("values").size() == 3);

    const GroupFunction back = io::group_function_from_json(j);
    for (std::int64_t i = 0; i < 4; ++i) CHECK(back.value_at(i) == f.value_at(i));

    const GroupFunction sparse = io::group_function_from_json(ojson::parse(
        R"json({"group": "Z(3)", "values": [{"coords": [1], "re": 2.5}]})json"));
    CHECK(sparse.value_at(0) == std::complex<double>(0.0, 0.0));
    CHECK(sparse.value_at(1) == std::complex<double>(2.5, 0.0));
}

TEST_CASE("check reports carry the gate, the sweeps, and the exit code", "[json]") {
    io::ReportConfig cfg;
    cfg.with_exact = true;
    cfg.with_q = true;
    cfg.with_classify = true;

    const Instance good = io::instance_from_json(ojson::parse(kMixtureInstanceJson));
    const io::CommandOutcome pass = io::build_check_report(good, cfg);
    CHECK(pass.exit_code == 0);
    CHECK(pass.report.at("tool") == "heyde");
    CHECK(pass.report.at("command") == "check");
    CHECK(pass.report.at("defaults").at("rng") == "splitmix64");
    CHECK(pass.report.at("defaults").at("enum_bound") == enumeration_bound());
    CHECK(pass.report.at("coefficients").at("pass") == true);
    CHECK(pass.report.at("cf").at("holds") == true);
    CHECK(pass.report.at("checkers_agree") == true);
    CHECK(pass.report.at("exact").at("witness").is_null());
    CHECK(pass.report.at("q").at("verdict").at("holds") == true);
    CHECK(pass.report.at("q").at("polynomial").at("degree") == 0);
    CHECK(pass.report.at("classification").at("status") == "counterexample-nonvanishing");
    CHECK(pass.report.at("symmetric") == true);
    CHECK(pass.report.at("exit_code") == 0);

    const Instance bad = point_mass_pair(Group({5}), 1, 0, {1, 1}, {1, 1});
    const io::CommandOutcome fail = io::build_check_report(bad, cfg);
    CHECK(fail.exit_code == 1);
    CHECK(fail.report.at("symmetric") == false);
    CHECK(fail.report.at("cf").at("witness").is_object());
    CHECK(fail.report.at("exact").at("witness").contains("l1"));

    io::ReportConfig plain;
    const Instance gated = point_mass_pair(Group({3}), 0, 0, {3, -1}, {1, 3});
    const io::CommandOutcome gate = io::build_check_report(gated, plain);
    CHECK(gate.exit_code == 2);
    CHECK(gate.report.at("error") == "inadmissible coefficient");
    CHECK(gate.report.at("symmetric").is_null());
    CHECK_FALSE(gate.report.contains("cf"));

    io::ReportConfig forced = plain;
    forced.force = true;
    const io::CommandOutcome pushed = io::build_check_report(gated, forced);
    CHECK(pushed.exit_code == 2);  // the gate failure still owns the exit code
    CHECK(pushed.report.contains("cf"));
    CHECK(pushed.report.at("coefficients").at("pass") == false);
}

TEST_CASE("check reports surface vanishing transforms in the q pass", "[json]") {
    const Group g({9});
    std::vector<Distribution> mus{
        Distribution::haar(subgroup_generated(g, {g.element({3})})),
        Distribution::point_mass(g.element({0}))};
    const Instance inst{g, LinearFormsSpec({1, 1}, {1, 4}), std::move(mus)};

    io::ReportConfig cfg;
    cfg.with_q = true;
    const io::CommandOutcome out = io::build_check_report(inst, cfg);
    CHECK(out.exit_code == 2);
    CHECK(out.report.at("coefficients").at("pass") == true);
    CHECK(out.report.at("q").at("error") == "vanishing characteristic function");
    CHECK(out.report.at("q").at("distribution_index") == 0);
    CHECK(out.report.at("q").at("character").get<std::vector<std::int64_t>>() ==
          std::vector<std::int64_t>{1});
}

TEST_CASE("classify, polytest, construct, and sample reports expose their verdicts",
          "[json]") {
    io::ReportConfig cfg;

    const io::CommandOutcome cls =
        io::build_classify_report(Distribution::uniform(Group({6})), cfg);
    CHECK(cls.exit_code == 0);
    CHECK(cls.report.at("command") == "classify");
    CHECK(cls.report.at("support_size") == 6);
    CHECK(cls.report.at("degenerate") == false);
    CHECK(cls.report.at("idempotent_shift") == true);
    CHECK(cls.report.at("gaussian_haar") == true);
    CHECK(cls.report.at("nonvanishing") == false);
    // Uniform transform vanishes off zero; the minimum is DFT noise, not exact.
    CHECK(cls.report.at("min_transform_modulus").get<double>() < 1e-12);

    const Group g5({5});
    const io::CommandOutcome point =
        io::build_classify_report(Distribution::point_mass(g5.element({2})), cfg);
    CHECK(point.report.at("degenerate") == true);
    CHECK(point.report.at("gaussian") == true);
    CHECK(point.report.at("min_transform_modulus").get<double>() ==
          Catch::Approx(1.0).margin(1e-12));

    const GroupFunction constant(
        g5, std::vector<std::complex<double>>(5, {2.0, 0.0}));
    const io::CommandOutcome poly =
        io::build_polytest_report(constant, std::nullopt, cfg);
    CHECK(poly.exit_code == 0);
    CHECK(poly.report.at("max_degree").is_null());
    CHECK(poly.report.at("result").at("degree") == 0);

    std::vector<std::complex<double>> wave(5);
    for (std::int64_t i = 0; i < 5; ++i)
        wave[static_cast<std::size_t>(i)] =
            std::polar(1.0, 2.0 * 3.14159265358979323846 * static_cast<double>(i) / 5.0);
    const io::CommandOutcome nonpoly = io::build_polytest_report(
        GroupFunction(g5, wave), std::optional<std::int64_t>{2}, cfg);
    CHECK(nonpoly.exit_code == 1);
    CHECK(nonpoly.report.at("max_degree") == 2);
    CHECK(nonpoly.report.at("result").at("is_polynomial") == false);

    const Group g9({9});
    const io::CommandOutcome built = io::build_construct_report(
        counterexamples::subgroup_mixture_instance(g9, g9.element({3})), cfg);
    CHECK(built.exit_code == 0);
    CHECK(built.report.at("result").at("kind") == "thm1-ii");
    CHECK(built.report.at("result").at("verification").at("verified") == true);

    io::ReportConfig seeded;
    seeded.seed = 7;
    const Instance inst = io::instance_from_json(ojson::parse(kMixtureInstanceJson));
    const io::CommandOutcome sampled = io::build_sample_report(inst, 2000, seeded);
    CHECK(sampled.exit_code == 0);
    CHECK(sampled.report.at("sample").at("algorithm") == "splitmix64");
    CHECK(sampled.report.at("sample").at("seed") == 7);
    CHECK(sampled.report.at("sample").at("trials") == 2000);
    CHECK(sampled.report.at("sample").at("tv_vs_exact").get<double>() < 0.2);
    CHECK(sampled.report.at("exact").at("holds") == true);
}

TEST_CASE("reports serialize to identical bytes on repeated runs", "[json]") {
    io::ReportConfig cfg;
    cfg.with_exact = true;
    cfg.with_q = true;
    cfg.with_classify = true;
    cfg.seed = 11;

    const auto check_once = [&]() {
        const Instance inst =
            io::instance_from_json(ojson::parse(kMixtureInstanceJson));
        return io::build_check_report(inst, cfg).report.dump(2);
    };
    CHECK(check_once() == check_once());

    const Instance inst = io::instance_from_json(ojson::parse(kMixtureInstanceJson));
    const auto sample_once = [&](std::uint64_t seed) {
        io::ReportConfig c;
        c.seed = seed;
        return io::build_sample_report(inst, 500, c).report.dump();
    };
    CHECK(sample_once(11) == sample_once(11));
    CHECK(sample_once(11) != sample_once(12));

    const Group g9({9});
    const auto construct_once = [&]() {
        return io::build_construct_report(
                   counterexamples::subgroup_mixture_instance(g9, g9.element({3})), cfg)
            .report.dump();
    };
    CHECK(construct_once() == construct_once());
}
