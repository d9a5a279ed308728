#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "mdet/algebraic.hpp"

using namespace mdet;

TEST_CASE("recognizes rationals, quadratics and quartics") {
    int d = 60;
    // 22/7
    auto p = recognize_minpoly(BigReal::of(mpq_class(22, 7), d), 4, d);
    REQUIRE(p.size() == 2);
    CHECK(p[0] == -22);
    CHECK(p[1] == 7);

    // 8 + 6 sqrt2: x^2 - 16x - 8
    BigReal x = 8L + 6L * sqrt(BigReal::of(2L, d));
    p = recognize_minpoly(x, 4, d);
    REQUIRE(p.size() == 3);
    CHECK(p[0] == -8);
    CHECK(p[1] == -16);
    CHECK(p[2] == 1);

    // sqrt2 + sqrt3: x^4 - 10x^2 + 1
    BigReal y = sqrt(BigReal::of(2L, d)) + sqrt(BigReal::of(3L, d));
    p = recognize_minpoly(y, 6, d);
    REQUIRE(p.size() == 5);
    CHECK(p[0] == 1);
    CHECK(p[1] == 0);
    CHECK(p[2] == -10);
    CHECK(p[3] == 0);
    CHECK(p[4] == 1);
    CHECK(verify_minpoly(p, y));

    // transcendental input yields nothing
    CHECK(recognize_minpoly(BigReal::pi(d), 3, d, 24).empty());
}

TEST_CASE("poly evaluation") {
    int d = 50;
    std::vector<mpz_class> p{-3, 0, 1}; // x^2 - 3
    BigReal r = eval_poly(p, sqrt(BigReal::of(3L, d)));
    CHECK(abs(r) < pow10(-(d - 6), d));
    BigComplex z = eval_poly(p, BigComplex::of(1, 1, d));
    CHECK(abs(z - BigComplex::of(-3, 2, d)) < pow10(-(d - 6), d));
}

TEST_CASE("real root counts via sturm") {
    CHECK(count_real_roots({-2, 0, 1}) == 2);          // x^2 - 2
    CHECK(count_real_roots({2, 0, 1}) == 0);           // x^2 + 2
    CHECK(count_real_roots({1, 0, -10, 0, 1}) == 4);   // totally real quartic
    CHECK(count_real_roots({1, 0, 0, 0, 1}) == 0);     // x^4 + 1
    CHECK(count_real_roots({-1, 0, 0, 0, 1}) == 2);    // x^4 - 1
    CHECK(count_real_roots({-2, 0, 0, 1}) == 1);       // x^3 - 2
    CHECK(count_real_roots({0, 1}) == 1);              // x
    CHECK(count_real_roots({-6, 11, -6, 1}) == 3);     // (x-1)(x-2)(x-3)
}

TEST_CASE("complex roots") {
    int d = 50;
    // x^2 + 1
    auto roots = poly_roots({1, 0, 1}, d);
    REQUIRE(roots.size() == 2);
    CHECK(abs(roots[0] + BigComplex::i_unit(d)) < pow10(-(d - 5), d));
    CHECK(abs(roots[1] - BigComplex::i_unit(d)) < pow10(-(d - 5), d));

    // x^4 - 10x^2 + 1, roots +-sqrt2 +- sqrt3
    roots = poly_roots({1, 0, -10, 0, 1}, d);
    REQUIRE(roots.size() == 4);
    BigReal s23 = sqrt(BigReal::of(2L, d)) + sqrt(BigReal::of(3L, d));
    CHECK(abs(roots[3].re - s23) < pow10(-(d - 5), d));
    CHECK(abs(roots[0].re + s23) < pow10(-(d - 5), d));
}

TEST_CASE("poly printing") {
    CHECK(poly_str({-8, -16, 1}) == "x^2 - 16x - 8");
    CHECK(poly_str({1, 0, -10, 0, 1}) == "x^4 - 10x^2 + 1");
    CHECK(poly_str({0, 1}) == "x");
    CHECK(poly_str({-22, 7}) == "7x - 22");
}
