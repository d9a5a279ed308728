#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include <sstream>
#include "mdet/algebraic.hpp"
#include "mdet/classify.hpp"
#include "mdet/errors.hpp"

using namespace mdet;

TEST_CASE("degree-1 census, family P") {
    ClassifyResult r = classify(Family::P, 1, 60);
    Census c = r.census();
    CHECK(c.rational == 3);
    CHECK(c.total() == 3);
    CHECK(r.failures.empty());
    std::vector<mpq_class> vals = r.rational_values();
    REQUIRE(vals.size() == 3);
    CHECK(vals[0] == -16);
    CHECK(vals[1] == 8);
    CHECK(vals[2] == 32);
}

TEST_CASE("degree-1 census, family Q") {
    ClassifyResult r = classify(Family::Q, 1, 60);
    std::vector<mpq_class> vals = r.rational_values();
    REQUIRE(vals.size() == 3);
    CHECK(vals[0] == -216);
    CHECK(vals[1] == 24);
    CHECK(vals[2] == 54);
    CHECK(r.failures.empty());
}

TEST_CASE("degree-2 census, family Q") {
    ClassifyResult r = classify(Family::Q, 2, 60);
    Census c = r.census();
    CHECK(c.rational == 3);
    CHECK(c.real_quadratic == 15);
    CHECK(c.imag_quadratic == 2);
    CHECK(c.total() == 20);
    CHECK(r.failures.empty());
}

TEST_CASE("degree-2 census, family P, with the pinned orbit of 8 +- 6 sqrt 2") {
    ClassifyResult r = classify(Family::P, 2, 60);
    Census c = r.census();
    CHECK(c.rational == 3);
    CHECK(c.real_quadratic == 12);
    CHECK(c.imag_quadratic == 4);
    CHECK(c.total() == 19);
    CHECK(r.failures.empty());

    std::vector<mpz_class> want = {-8, -16, 1}; // x^2 - 16x - 8
    bool seen = false;
    for (const Orbit& o : r.orbits) {
        if (o.minpoly != want) continue;
        seen = true;
        CHECK(o.kind == OrbitKind::real_quadratic);
        REQUIRE(o.points.size() == 2);
        CHECK(o.disc() == -64);
        // larger root 8 + 6 sqrt 2 comes first; it sits at tau = i/4
        CHECK(o.points[0].form == QForm{16, 0, 1});
        CHECK(o.points[0].t.approx.re > BigReal::of(16L, 30));
        CHECK(o.points[1].t.approx.re < BigReal::of(0L, 30));
    }
    CHECK(seen);
}

TEST_CASE("orbit structure properties on a truncated scan") {
    ClassifyResult r = classify(Family::P, 4, 60, 200);
    CHECK(r.failures.empty());
    CHECK(!r.orbits.empty());
    for (const Orbit& o : r.orbits) {
        int deg = (int)o.minpoly.size() - 1;
        // a full conjugate orbit shows up: one point per embedding
        CHECK((int)o.points.size() == deg);
        for (const ClassifiedPoint& p : o.points) {
            CHECK(p.disc() == o.disc());
            CHECK(class_number(p.disc()) <= deg);
            CHECK(verify_minpoly(o.minpoly, p.t.approx));
        }
        for (size_t i = 1; i < o.points.size(); ++i) {
            // canonical order inside the orbit: Re t weakly decreasing
            BigReal prev = o.points[i - 1].t.approx.re;
            BigReal cur = o.points[i].t.approx.re;
            BigReal tol = (abs(prev) + abs(cur) + BigReal::of(1L, 60)) * pow10(-50, 120);
            CHECK(prev > cur - tol);
        }
    }
}

TEST_CASE("jsonl export") {
    ClassifyResult r = classify(Family::Q, 1, 60);
    std::string s = classify_jsonl(r);
    size_t lines = 0, pos = 0;
    while ((pos = s.find('\n', pos)) != std::string::npos) { ++lines; ++pos; }
    size_t pts = 0;
    for (const Orbit& o : r.orbits) pts += o.points.size();
    CHECK(lines == pts);
    CHECK(s.find("\"family\":\"Q\"") != std::string::npos);
    CHECK(s.find("\"degree\":1") != std::string::npos);
    CHECK(s.find("\"minpoly\":[-54,1]") != std::string::npos);
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(classify(Family::P, 0, 60), domain_error);
    CHECK_THROWS_AS(classify(Family::P, 5, 60), domain_error);
    CHECK_THROWS_AS(classify(Family::P, 2, 10), domain_error);
    CHECK_THROWS_AS(classify(Family::P, 2, 60, -5), domain_error);
}
