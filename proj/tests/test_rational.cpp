#include <catch2/catch_amalgamated.hpp>

#include <stdexcept>

#include "heyde/rational.hpp"

using heyde::Rational;

TEST_CASE("rationals reduce to lowest terms with positive denominator", "[rational]") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, 4) == Rational(-1, 2));
    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK(Rational(-2, -4) == Rational(1, 2));
    CHECK(Rational(0, -7).num() == 0);
    CHECK(Rational(0, -7).den() == 1);
    CHECK(Rational(6, 3).num() == 2);
    CHECK(Rational(6, 3).den() == 1);
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("rational arithmetic is exact", "[rational]") {
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
    CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
    CHECK(Rational(1, 2) / Rational(3, 4) == Rational(2, 3));
    CHECK(-Rational(1, 2) == Rational(-1, 2));
    CHECK_THROWS_AS(Rational(1, 2) / Rational(0), std::domain_error);

    Rational sum(0);
    for (int i = 0; i < 3; ++i) sum += Rational(1, 3);
    CHECK(sum == Rational(1));

    // 1/3 + 1/3 + 1/3 has no floating-point analogue; the exact path is the
    // whole reason the class exists.
    CHECK((Rational(1, 10) + Rational(2, 10)) == Rational(3, 10));
}

TEST_CASE("rational comparisons cross-multiply without overflow", "[rational]") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(-1, 3));
    CHECK(Rational(7, 1) > Rational(13, 2));
    CHECK(Rational(2, 3) <= Rational(2, 3));
    CHECK(Rational(2, 3) >= Rational(2, 3));
    CHECK(Rational(1, 3) != Rational(2, 3));

    const std::int64_t big = std::int64_t{1} << 40;
    CHECK(Rational(big, big + 1) < Rational(big + 1, big + 2));
}

TEST_CASE("rational arithmetic detects 64-bit overflow", "[rational]") {
    const std::int64_t big = std::int64_t{1} << 40;
    CHECK_THROWS_AS(Rational(big, 3) * Rational(big, 5), std::overflow_error);
    CHECK_NOTHROW(Rational(big, 3) * Rational(3, big));
}

TEST_CASE("rational parsing accepts integers and fractions", "[rational]") {
    CHECK(Rational::parse("3/4") == Rational(3, 4));
    CHECK(Rational::parse("-3/4") == Rational(-3, 4));
    CHECK(Rational::parse("7") == Rational(7));
    CHECK(Rational::parse("-7") == Rational(-7));
    CHECK(Rational::parse("2/4") == Rational(1, 2));
    CHECK_THROWS_AS(Rational::parse("3/4/5"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("1.5"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("a"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("1/0"), std::domain_error);
}

TEST_CASE("rational printing round-trips through parse", "[rational]") {
    for (const Rational r : {Rational(3, 4), Rational(-3, 4), Rational(5), Rational(0)}) {
        CHECK(Rational::parse(r.to_string()) == r);
    }
    CHECK(Rational(1, 2).to_double() == 0.5);
    CHECK(Rational(-1, 4).to_double() == -0.25);
    CHECK(Rational(0).is_zero());
    CHECK(Rational(-1, 4).is_negative());
    CHECK_FALSE(Rational(1, 4).is_negative());
}
