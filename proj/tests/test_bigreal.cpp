#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "mdet/bigreal.hpp"
#include "mdet/bigcomplex.hpp"

using namespace mdet;

static bool close_to(const BigReal& a, const BigReal& b, int digits) {
    return abs(a - b) < pow10(-digits, a.digits());
}

TEST_CASE("pi to 60 digits") {
    BigReal p = BigReal::pi(60);
    BigReal ref = BigReal::parse(
        "3.14159265358979323846264338327950288419716939937510582097494", 60);
    CHECK(close_to(p, ref, 58));
}

TEST_CASE("arithmetic and precision propagation") {
    BigReal a = BigReal::of(1L, 80) / BigReal::of(3L, 80);
    CHECK(close_to(a * BigReal::of(3L, 80), BigReal::of(1L, 80), 78));
    BigReal lo = BigReal::of(2L, 30);
    CHECK((a * lo).digits() == 30);
    CHECK((a + lo).digits() == 30);

    BigReal s = sqrt(BigReal::of(2L, 60));
    CHECK(close_to(s * s, BigReal::of(2L, 60), 58));
}

TEST_CASE("parse and print round trip") {
    BigReal x = BigReal::parse("-1.25e-3", 40);
    CHECK(x.to_double() == doctest::Approx(-0.00125));
    BigReal y = BigReal::parse(x.str(35), 40);
    CHECK(close_to(x, y, 33));
}

TEST_CASE("integer extraction") {
    CHECK(BigReal::parse("2.6", 30).round_z() == 3);
    CHECK(BigReal::parse("-2.6", 30).round_z() == -3);
    CHECK(BigReal::parse("2.5", 30).round_z() == 3);
    CHECK(BigReal::parse("-2.6", 30).floor_z() == -3);
    CHECK(BigReal::parse("2.9", 30).floor_z() == 2);
    CHECK(BigReal::of(mpz_class("123456789012345678901234567890"), 40).str(30)
          == BigReal::parse("1.2345678901234567890123456789e29", 40).str(30));
}

TEST_CASE("rational constructor") {
    mpq_class q(22, 7);
    BigReal x = BigReal::of(q, 50);
    CHECK(close_to(x * 7L, BigReal::of(22L, 50), 48));
}

TEST_CASE("incomplete gamma") {
    // Gamma(1,x) = exp(-x), Gamma(2,x) = exp(-x)(1+x)
    for (double xv : {0.3, 1.0, 4.5}) {
        BigReal x = BigReal::of(xv, 50);
        BigReal g1 = upper_incomplete_gamma(1, x);
        CHECK(close_to(g1, exp(-x), 45));
        BigReal g2 = upper_incomplete_gamma(2, x);
        CHECK(close_to(g2, exp(-x) * (x + 1L), 45));
    }
    // recurrence Gamma(s+1,x) = s Gamma(s,x) + x^s exp(-x)
    BigReal x = BigReal::parse("2.75", 50);
    for (long s : {1L, 2L, 3L, 5L}) {
        BigReal lhs = upper_incomplete_gamma(s + 1, x);
        BigReal rhs = BigReal::of(s, 50) * upper_incomplete_gamma(s, x) + pow(x, s) * exp(-x);
        CHECK(close_to(lhs, rhs, 44));
    }
    CHECK_THROWS_AS(upper_incomplete_gamma(2, BigReal::of(0L, 30)), domain_error);
}

TEST_CASE("gamma at quarter integers") {
    // Gamma(1/4) Gamma(3/4) = pi / sin(pi/4) = pi sqrt(2)
    BigReal g14 = gamma_fn(BigReal::parse("0.25", 60));
    BigReal g34 = gamma_fn(BigReal::parse("0.75", 60));
    BigReal pi = BigReal::pi(60);
    CHECK(close_to(g14 * g34, pi * sqrt(BigReal::of(2L, 60)), 57));
}

TEST_CASE("complex basics") {
    int d = 50;
    BigComplex z(BigReal::of(3L, d), BigReal::of(4L, d));
    CHECK(close_to(abs(z), BigReal::of(5L, d), 48));
    BigComplex w = sqrt(z * z);
    CHECK(close_to(w.re, z.re, 46));
    CHECK(close_to(w.im, z.im, 46));

    // principal branch: sqrt(-1 + 0i) = i, sqrt(-1 - eps i) near -i
    BigComplex m1 = sqrt(BigComplex::of(-1, 0, d));
    CHECK(close_to(m1.im, BigReal::of(1L, d), 46));
    BigComplex below = sqrt(BigComplex(BigReal::of(-1L, d), -pow10(-20, d)));
    CHECK(below.im < 0);

    BigComplex c = cbrt(BigComplex::of(-8, 0, d));
    CHECK(close_to(c.re, BigReal::of(1L, d), 46));
    CHECK(close_to(c.im, sqrt(BigReal::of(3L, d)), 46));

    BigComplex e = exp(BigComplex(BigReal::of(0L, d), BigReal::pi(d)));
    CHECK(close_to(e.re, BigReal::of(-1L, d), 46));

    BigComplex p = pow(BigComplex::of(1, 1, d), 10L);
    CHECK(close_to(p.re, BigReal::of(0L, d), 40));
    CHECK(close_to(p.im, BigReal::of(32L, d), 46));
}
