#include "mdet/modular.hpp"
#include "mdet/eta.hpp"
#include "mdet/hyp2f1.hpp"

namespace mdet {

BigComplex lambda_fn(const BigComplex& tau) {
    int d = tau.digits(), wd = d + 10;
    BigComplex t = tau.with_digits(wd);
    BigComplex r = dedekind_eta(t / 2L) * pow(dedekind_eta(t * 2L), 2) /
                   pow(dedekind_eta(t), 3);
    return (pow(r, 8) * 16L).with_digits(d);
}

BigComplex t_P(const BigComplex& tau) {
    int d = tau.digits(), wd = d + 10;
    BigComplex t = tau.with_digits(wd);
    BigComplex r = pow(dedekind_eta(t * 2L), 24) /
                   (pow(dedekind_eta(t), 8) * pow(dedekind_eta(t * 4L), 16));
    return r.with_digits(d);
}

BigComplex t_Q(const BigComplex& tau) {
    int d = tau.digits(), wd = d + 10;
    BigComplex t = tau.with_digits(wd);
    BigComplex r = pow(dedekind_eta(t) / dedekind_eta(t * 3L), 12);
    return (r + 27L).with_digits(d);
}

BigComplex j_fn(const BigComplex& tau) {
    int d = tau.digits(), wd = d + 10;
    BigComplex l = lambda_fn(tau.with_digits(wd));
    BigComplex one = BigComplex::of(1, 0, wd);
    BigComplex num = pow(one - l + l * l, 3) * 256L;
    BigComplex den = l * l * pow(one - l, 2);
    return (num / den).with_digits(d);
}

BigComplex j_of_F(const BigComplex& t) {
    int d = t.digits(), wd = d + 10;
    BigComplex x = t.with_digits(wd);
    BigComplex num = pow(x * x - x * 16L + 16L, 3);
    BigComplex den = x * (x - 16L);
    return (num / den).with_digits(d);
}

BigComplex j_of_C(const BigComplex& t) {
    int d = t.digits(), wd = d + 10;
    BigComplex x = t.with_digits(wd);
    BigComplex num = x * pow(x + 216L, 3);
    BigComplex den = pow(x - 27L, 3);
    return (num / den).with_digits(d);
}

BigComplex tau_from_tP(const BigComplex& t) {
    if (t.im.is_zero() && (t.re.is_zero() || t.re == 16L))
        throw domain_error("tau_from_tP: t in {0, 16}");
    int d = t.digits(), wd = d + 10;
    BigComplex z = BigComplex::of(16, 0, wd) / t.with_digits(wd);
    BigComplex one = BigComplex::of(1, 0, wd);
    mpq_class h(1, 2);
    BigComplex num = hyp2f1(h, h, 1, one - z);
    BigComplex den = hyp2f1(h, h, 1, z);
    BigComplex ratio = num / den;
    // tau' = (i/2) ratio
    return (BigComplex(-ratio.im, ratio.re) / 2L).with_digits(d);
}

BigComplex tau_from_tQ(const BigComplex& t) {
    if (t.im.is_zero() && (t.re.is_zero() || t.re == 27L))
        throw domain_error("tau_from_tQ: t in {0, 27}");
    int d = t.digits(), wd = d + 10;
    BigComplex z = BigComplex::of(27, 0, wd) / t.with_digits(wd);
    BigComplex one = BigComplex::of(1, 0, wd);
    mpq_class a(1, 3), b(2, 3);
    BigComplex num = hyp2f1(a, b, 1, one - z);
    BigComplex den = hyp2f1(a, b, 1, z);
    BigComplex ratio = num / den;
    // tau' = (i/sqrt(3)) ratio
    BigReal s3 = sqrt(BigReal::of(3L, wd));
    return (BigComplex(-ratio.im, ratio.re) / s3).with_digits(d);
}

} // namespace mdet
