#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "mdet/quadrature.hpp"

using namespace mdet;

static bool close_to(const BigReal& a, const BigReal& b, int digits) {
    return abs(a - b) < pow10(-digits, a.digits());
}

TEST_CASE("smooth integrand") {
    int d = 50;
    BigReal pi = BigReal::pi(d);
    BigReal one = BigReal::of(1L, d);
    BigReal r = tanh_sinh_integrate([&](const BigReal& x) { return sin(x); },
                                    BigReal::of(0L, d), pi, d);
    CHECK(close_to(r, BigReal::of(2L, d), d - 4));

    r = tanh_sinh_integrate([&](const BigReal& x) { return 4L / (one + x * x); },
                            BigReal::of(0L, d), one, d);
    CHECK(close_to(r, pi, d - 4));
}

TEST_CASE("endpoint singularities") {
    int d = 50;
    BigReal zero = BigReal::of(0L, d), one = BigReal::of(1L, d);
    BigReal r = tanh_sinh_integrate([](const BigReal& x) { return log(x); }, zero, one, d);
    CHECK(close_to(r, BigReal::of(-1L, d), d - 4));

    r = tanh_sinh_integrate([](const BigReal& x) { return 1L / sqrt(x); }, zero, one, d);
    CHECK(close_to(r, BigReal::of(2L, d), d - 4));

    // both endpoints: beta(1/2,1/2) = pi
    r = tanh_sinh_integrate([&](const BigReal& x) { return 1L / sqrt(x * (one - x)); },
                            zero, one, d);
    CHECK(close_to(r, BigReal::pi(d), d - 4));
}

TEST_CASE("high precision") {
    int d = 110;
    BigReal one = BigReal::of(1L, d);
    BigReal r = tanh_sinh_integrate([&](const BigReal& x) { return log(x) * log(one - x); },
                                    BigReal::of(0L, d), one, d);
    // int_0^1 log x log(1-x) dx = 2 - pi^2/6
    BigReal pi = BigReal::pi(d);
    BigReal ref = BigReal::of(2L, d) - pi * pi / 6L;
    CHECK(close_to(r, ref, d - 6));
}

TEST_CASE("general interval") {
    int d = 40;
    BigReal r = tanh_sinh_integrate([](const BigReal& x) { return exp(x); },
                                    BigReal::of(-2L, d), BigReal::of(3L, d), d);
    BigReal ref = exp(BigReal::of(3L, d)) - exp(BigReal::of(-2L, d));
    CHECK(close_to(r, ref, d - 5));
}
