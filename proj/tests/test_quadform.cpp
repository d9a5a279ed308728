#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "mdet/quadform.hpp"

using namespace mdet;

TEST_CASE("class numbers") {
    // h(D) for small discriminants, cross-checked against the classical table
    struct Row { long D; long h; };
    for (Row r : {Row{-3, 1}, {-4, 1}, {-7, 1}, {-8, 1}, {-11, 1}, {-12, 1},
                  {-15, 2}, {-16, 1}, {-20, 2}, {-23, 3}, {-24, 2}, {-27, 1},
                  {-32, 2}, {-36, 2}, {-47, 5}, {-48, 2}, {-63, 4}, {-64, 2},
                  {-71, 7}, {-108, 3}, {-135, 6}, {-192, 4}, {-555, 4}, {-260, 8}}) {
        CHECK(class_number(mpz_class(r.D)) == r.h);
    }
}

TEST_CASE("reduced forms are reduced and have the right disc") {
    for (long Dv : {-64L, -192L, -555L, -1004L}) {
        mpz_class D(Dv);
        auto forms = reduced_forms(D);
        for (const QForm& f : forms) {
            CHECK(f.disc() == D);
            CHECK(f.primitive());
            CHECK(abs(f.b) <= f.a);
            CHECK(f.a <= f.c);
            if (abs(f.b) == f.a || f.a == f.c) CHECK(f.b >= 0);
        }
    }
}

TEST_CASE("transform preserves discriminant and composes") {
    QForm f{3, 1, 5};
    QForm g = transform(f, 2, 1, 1, 1);
    CHECK(g.disc() == f.disc());
    // (pq,rs) = identity fixes the form
    QForm id = transform(f, 1, 0, 0, 1);
    CHECK(id == f);
    // inverse transform undoes it
    QForm back = transform(g, 1, -1, -1, 2);
    CHECK(back == f);
}

TEST_CASE("gamma0 reduction lands in the domain and is idempotent") {
    for (int ell : {3, 4}) {
        for (long a = 1; a <= 12; ++a)
            for (long b = -15; b <= 15; ++b)
                for (long c = 1; c <= 12; ++c) {
                    QForm f{a, b, c};
                    if (f.disc() >= 0) continue;
                    QForm r = reduce_gamma0(f, ell);
                    CHECK(in_gamma0_domain(r, ell));
                    CHECK(r.disc() == f.disc());
                    CHECK(reduce_gamma0(r, ell) == r);
                }
    }
}

TEST_CASE("domain membership boundary conventions") {
    // left edge kept, right edge excluded; left arc kept, right arc excluded
    CHECK(in_gamma0_domain({5, 5, 3}, 4));
    CHECK(!in_gamma0_domain({5, -5, 3}, 4));
    CHECK(in_gamma0_domain({7, 4, 1}, 4));
    CHECK(!in_gamma0_domain({7, -4, 1}, 4));
    CHECK(in_gamma0_domain({5, 3, 1}, 3));
    CHECK(!in_gamma0_domain({5, -3, 1}, 3));
}

TEST_CASE("domain point counts match index times class number") {
    // the domain tiles H under Gamma0(ell); the number of disc-D points is
    // h(D) times the number of cosets whose translate hits a distinct point,
    // which for generic D is the full index (6 for ell=4, 4 for ell=3)
    auto pts64 = gamma0_domain_points(mpz_class(-64), 4);
    CHECK(pts64.size() <= 6 * class_number(mpz_class(-64)));
    CHECK(!pts64.empty());
    for (const QForm& f : pts64) {
        CHECK(in_gamma0_domain(f, 4));
        CHECK(f.disc() == -64);
    }
    // [16,0,1] embeds to i/4, the point behind the classical degree-2 fixture
    bool found = false;
    for (const QForm& f : pts64)
        if (f == QForm{16, 0, 1}) found = true;
    CHECK(found);

    auto pts12 = gamma0_domain_points(mpz_class(-12), 3);
    for (const QForm& f : pts12) CHECK(in_gamma0_domain(f, 3));
    bool found3 = false;
    for (const QForm& f : pts12)
        if (f == QForm{3, 0, 1}) found3 = true;
    CHECK(found3);
}

TEST_CASE("embedding") {
    QForm f{16, 0, 1};
    BigComplex tau = embed(f, 50);
    CHECK(abs(tau.re) < pow10(-45, 50));
    CHECK(abs(tau.im - BigReal::parse("0.25", 50)) < pow10(-45, 50));
}
