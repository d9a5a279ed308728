#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "mdet/eta.hpp"
#include "mdet/modular.hpp"

using namespace mdet;

static bool close_c(const BigComplex& a, const BigComplex& b, int digits) {
    return abs(a - b) < pow10(-digits, a.digits());
}
static bool close_to(const BigReal& a, const BigReal& b, int digits) {
    return abs(a - b) < pow10(-digits, a.digits());
}

TEST_CASE("eta at i and 2i") {
    int d = 60;
    BigReal pi = BigReal::pi(d);
    BigReal g14 = gamma_fn(BigReal::parse("0.25", d));
    BigComplex ei = dedekind_eta(BigComplex::i_unit(d));
    BigReal ref = g14 / (2L * pow(pi, BigReal::parse("0.75", d)));
    CHECK(close_to(ei.re, ref, d - 6));
    CHECK(abs(ei.im) < pow10(-(d - 6), d));

    // eta(2i) = eta(i) / 2^(3/8)
    BigComplex e2i = dedekind_eta(BigComplex::of(0, 2, d));
    BigReal ref2 = ref / pow(BigReal::of(2L, d), BigReal::parse("0.375", d));
    CHECK(close_to(e2i.re, ref2, d - 6));
}

TEST_CASE("eta functional equations") {
    int d = 50;
    for (auto [re, im] : {std::pair{"0.37", "0.81"}, {"-1.6", "0.22"}, {"0.5", "3.0"}}) {
        BigComplex tau(BigReal::parse(re, d), BigReal::parse(im, d));
        BigComplex lhs = dedekind_eta(tau + BigComplex::of(1, 0, d));
        BigReal pi = BigReal::pi(d);
        BigComplex phase = exp(BigComplex(BigReal::of(0L, d), pi / 12L));
        CHECK(close_c(lhs, phase * dedekind_eta(tau), d - 8));

        BigComplex inv = dedekind_eta(BigComplex::of(-1, 0, d) / tau);
        BigComplex mi_tau(tau.im, -tau.re); // -i tau
        CHECK(close_c(inv, sqrt(mi_tau) * dedekind_eta(tau), d - 8));
    }
}

TEST_CASE("lambda and j at cm points") {
    int d = 60;
    BigComplex i = BigComplex::i_unit(d);
    CHECK(close_c(lambda_fn(i), BigComplex(BigReal::parse("0.5", d)), d - 8));
    CHECK(close_c(j_fn(i), BigComplex(BigReal::of(1728L, d)), d - 10));
    CHECK(close_c(j_fn(i * 2L), BigComplex(BigReal::of(287496L, d)), d - 10));
    // j((1+i sqrt(3))/2) = 0
    BigComplex rho(BigReal::parse("0.5", d), sqrt(BigReal::of(3L, d)) / 2L);
    CHECK(abs(j_fn(rho)) < pow10(-(d - 12), d));
}

TEST_CASE("hauptmodul pins") {
    int d = 60;
    // t_P(i/4) = 8 + 6 sqrt(2)
    BigComplex tau(BigReal::of(0L, d), BigReal::parse("0.25", d));
    BigComplex t = t_P(tau);
    BigReal ref = 8L + 6L * sqrt(BigReal::of(2L, d));
    CHECK(close_to(t.re, ref, d - 8));
    CHECK(abs(t.im) < pow10(-(d - 8), d));

    // j of the two family parametrizations agrees with j(4 tau) / j(3 tau)
    CHECK(close_c(j_of_F(t), j_fn(tau * 4L), d - 10));

    BigComplex tauq(BigReal::of(0L, d), 1L / sqrt(BigReal::of(3L, d)));
    BigComplex tq = t_Q(tauq);
    CHECK(close_c(j_of_C(tq), j_fn(tauq * 3L), d - 10));
}

TEST_CASE("inverse period maps round trip") {
    int d = 50;
    for (const char* ts : {"33.9411254969543", "32", "270.7", "17.2", "500"}) {
        BigComplex t(BigReal::parse(ts, d));
        BigComplex tau = tau_from_tP(t);
        CHECK(tau.im > 0);
        CHECK(close_c(t_P(tau), t, d - 10));
    }
    for (const char* ts : {"54", "28.5", "300", "-10"}) {
        BigComplex t(BigReal::parse(ts, d));
        BigComplex tau = tau_from_tQ(t);
        CHECK(tau.im > 0);
        CHECK(close_c(t_Q(tau), t, d - 10));
    }
    // negative t on the degree-2 side lands on the boundary of the domain
    BigComplex tneg(BigReal::of(-16L, d));
    BigComplex tau = tau_from_tP(tneg);
    CHECK(tau.im > 0);
    CHECK(close_c(t_P(tau), tneg, d - 10));
}
