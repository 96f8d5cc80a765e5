#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fusionkit/rational.hpp"

using namespace fusionkit;

TEST_CASE("basic arithmetic stays in lowest terms with positive denominator") {
    Scalar a(1, 3), b(2, 5);
    CHECK((a + b).str() == "11/15");
    CHECK((a - b).str() == "-1/15");
    CHECK((a * b).str() == "2/15");
    CHECK((a / b).str() == "5/6");
    Scalar c(2, -4);
    CHECK(c.str() == "-1/2");
    CHECK(c.den() == 2);
}

TEST_CASE("string codec round-trips losslessly") {
    std::mt19937_64 rng(20240915);
    std::uniform_int_distribution<long> num(-1000000, 1000000);
    std::uniform_int_distribution<long> den(1, 1000000);
    for (int i = 0; i < 200; ++i) {
        Scalar s(num(rng), den(rng));
        CHECK(Scalar::parse(s.str()) == s);
    }
    CHECK(Scalar::parse("-7/3") == Scalar(-7, 3));
    CHECK(Scalar::parse("42") == Scalar(42));
}

TEST_CASE("generalized binomial coefficients") {
    CHECK(binomial(4, 2) == Scalar(6));
    CHECK(binomial(0, 0) == Scalar(1));
    CHECK(binomial(0, 1) == Scalar(0));
    CHECK(binomial(-1, 3) == Scalar(-1));
    CHECK(binomial(-2, 3) == Scalar(-4));
    CHECK(binomial(-3, 2) == Scalar(6));
    // Pascal recurrence for negative upper index
    for (long n = -6; n <= 6; ++n) {
        for (long j = 1; j <= 6; ++j) {
            CHECK(binomial(n, j) == binomial(n - 1, j) + binomial(n - 1, j - 1));
        }
    }
}

TEST_CASE("integer powers of rationals") {
    Scalar w(2, 3);
    CHECK(pow_scalar(w, 0) == Scalar(1));
    CHECK(pow_scalar(w, 3) == Scalar(8, 27));
    CHECK(pow_scalar(w, -2) == Scalar(9, 4));
    CHECK_THROWS_AS(pow_scalar(Scalar(0), -1), std::domain_error);
}
