#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "mdet/hyp2f1.hpp"
#include "mdet/quadrature.hpp"

using namespace mdet;

static bool close_to(const BigReal& a, const BigReal& b, int digits) {
    return abs(a - b) < pow10(-digits, a.digits());
}
static bool close_c(const BigComplex& a, const BigComplex& b, int digits) {
    return abs(a - b) < pow10(-digits, a.digits());
}

// 2F1(1/2,1/2;1;z) = 1/agm(1, sqrt(1-z)) for real z < 1
static BigReal agm_oracle(const BigReal& z) {
    int d = z.digits();
    BigReal a = BigReal::of(1L, d), b = sqrt(1L - z);
    BigReal tol = pow10(-(d - 3), d);
    for (int i = 0; i < 400; ++i) {
        BigReal an = (a + b) / 2L;
        b = sqrt(a * b);
        a = an;
        if (abs(a - b) < tol) break;
    }
    return 1L / a;
}

// Euler integral, Re c > Re b > 0:
// 2F1(a,b;c;z) = [Gamma(c)/(Gamma(b)Gamma(c-b))] int_0^1 t^(b-1)(1-t)^(c-b-1)(1-zt)^(-a) dt
static BigComplex euler_oracle(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                               const BigComplex& z) {
    int d = z.digits();
    int wd = d + 10;
    BigReal ar = BigReal::of(a, wd), br = BigReal::of(b, wd), cr = BigReal::of(c, wd);
    BigComplex zw = z.with_digits(wd);
    auto integrand = [&](const BigReal& t) {
        BigComplex w = BigComplex(1L - zw.re * t, -(zw.im * t));
        BigComplex val = exp(log(w) * (-ar));
        BigReal u = pow(t, br - 1L) * pow(1L - t, cr - br - 1L);
        return val * u;
    };
    BigReal re = tanh_sinh_integrate([&](const BigReal& t) { return integrand(t).re; },
                                     BigReal::of(0L, wd), BigReal::of(1L, wd), wd);
    BigReal im = tanh_sinh_integrate([&](const BigReal& t) { return integrand(t).im; },
                                     BigReal::of(0L, wd), BigReal::of(1L, wd), wd);
    BigReal pref = gamma_fn(cr) / (gamma_fn(br) * gamma_fn(cr - br));
    return (BigComplex(re, im) * pref).with_digits(d);
}

TEST_CASE("agm oracle in all real regimes") {
    int d = 60;
    mpq_class h(1, 2), one(1);
    for (const char* zs : {"0.3", "-5", "0.9", "0.999", "-0.74", "0.05"}) {
        BigReal z = BigReal::parse(zs, d);
        BigReal f = hyp2f1(h, h, one, z);
        CHECK(close_to(f, agm_oracle(z), d - 8));
    }
}

TEST_CASE("euler oracle for the (1/3,2/3;1) family") {
    int d = 50;
    mpq_class a(1, 3), b(2, 3), one(1);
    for (const char* zs : {"0.5", "-2", "0.95"}) {
        BigReal z = BigReal::parse(zs, d);
        BigReal f = hyp2f1(a, b, one, z);
        BigComplex ref = euler_oracle(a, b, one, BigComplex(z));
        CHECK(close_to(f, ref.re, d - 8));
    }
}

TEST_CASE("complex arguments against the euler integral") {
    int d = 50;
    mpq_class h(1, 2), one(1);
    // series region, pfaff region, ode continuation region
    for (auto [re, im] : {std::pair{"0.3", "0.4"}, {"-3.0", "1.0"}, {"3.0", "0.2"},
                          {"0.5", "-0.8"}, {"-0.2", "-2.0"}}) {
        BigComplex z(BigReal::parse(re, d), BigReal::parse(im, d));
        BigComplex f = hyp2f1(h, h, one, z);
        BigComplex ref = euler_oracle(h, h, one, z);
        CHECK(close_c(f, ref, d - 9));
    }
    mpq_class a(1, 3), b(2, 3);
    for (auto [re, im] : {std::pair{"0.2", "0.7"}, {"2.5", "0.3"}, {"1.2", "-0.4"}}) {
        BigComplex z(BigReal::parse(re, d), BigReal::parse(im, d));
        BigComplex f = hyp2f1(a, b, one, z);
        BigComplex ref = euler_oracle(a, b, one, z);
        CHECK(close_c(f, ref, d - 9));
    }
}

TEST_CASE("closed form at one half") {
    // 2F1(1/2,1/2;1;1/2) = Gamma(1/4)^2 / (2 pi^(3/2))
    int d = 70;
    BigReal f = hyp2f1(mpq_class(1, 2), mpq_class(1, 2), mpq_class(1), BigReal::parse("0.5", d));
    BigReal g14 = gamma_fn(BigReal::parse("0.25", d));
    BigReal pi = BigReal::pi(d);
    BigReal ref = g14 * g14 / (2L * pi * sqrt(pi));
    CHECK(close_to(f, ref, d - 8));
}

TEST_CASE("cut approached from above") {
    int d = 50;
    mpq_class h(1, 2), one(1);
    BigComplex on_cut = hyp2f1(h, h, one, BigComplex::of(2, 0, d));
    BigComplex above = hyp2f1(h, h, one, BigComplex(BigReal::of(2L, d), pow10(-20, d)));
    CHECK(abs(on_cut - above) < pow10(-15, d));
    CHECK(on_cut.im.sign() != 0);
    // conjugation symmetry off the cut
    BigComplex z(BigReal::parse("0.4", d), BigReal::parse("0.7", d));
    BigComplex f = hyp2f1(h, h, one, z);
    BigComplex fc = hyp2f1(h, h, one, conj(z));
    CHECK(close_c(conj(f), fc, d - 9));
}

TEST_CASE("real argument past one is rejected") {
    CHECK_THROWS_AS(hyp2f1(mpq_class(1, 2), mpq_class(1, 2), mpq_class(1),
                           BigReal::of(2L, 40)),
                    domain_error);
}
