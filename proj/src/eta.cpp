#include "mdet/eta.hpp"

namespace mdet {

namespace {

// Pentagonal-number series at a reduced point (Im tau >= ~0.8):
//   eta(tau) = e^{pi i tau / 12} sum_{k in Z} (-1)^k q^{k(3k-1)/2}
BigComplex eta_series(const BigComplex& tau, int wd) {
    BigReal pi = BigReal::pi(wd);
    BigComplex q = exp_2pii(tau, pi);
    BigComplex lead = exp_2pii(tau / 24L, pi); // e^{pi i tau/12}
    BigComplex sum = BigComplex::of(1, 0, wd);
    BigReal eps = pow10(-(long)wd, wd);
    for (long k = 1; k < 10000; ++k) {
        long e1 = k * (3 * k - 1) / 2;
        long e2 = k * (3 * k + 1) / 2;
        BigComplex term = pow(q, e1) + pow(q, e2);
        if (k & 1) sum -= term;
        else sum += term;
        if (abs(term) < eps) break;
    }
    return lead * sum;
}

} // namespace

BigComplex dedekind_eta(const BigComplex& tau_in) {
    if (!(tau_in.im > 0)) throw domain_error("dedekind_eta: Im tau must be positive");
    int d = tau_in.digits();
    int wd = d + 10;
    BigComplex tau = tau_in.with_digits(wd);
    BigComplex mult = BigComplex::of(1, 0, wd);
    BigReal pi = BigReal::pi(wd);

    // eta(tau_in) = mult * eta(tau) is maintained throughout.
    for (int guard = 0; guard < 8000; ++guard) {
        mpz_class n = tau.re.round_z();
        if (n != 0) {
            tau.re -= BigReal::of(n, wd);
            // eta(tau + n) = e^{i pi n / 12} eta(tau)
            mpz_class r = n % 24;
            BigReal ph = pi * BigReal::of(r, wd) / 12L;
            mult *= BigComplex(cos(ph), sin(ph));
        }
        if (norm(tau) >= 1) break;
        // eta(sigma) = sqrt(-i tau) eta(tau) with sigma = -1/tau, so
        // eta(tau) = eta(-1/sigma) needs mult *= sqrt(-i sigma).
        BigComplex sigma = BigComplex::of(-1, 0, wd) / tau;
        BigComplex mi_sigma = {sigma.im, -sigma.re}; // -i sigma
        mult *= sqrt(mi_sigma);
        tau = sigma;
    }
    return (mult * eta_series(tau, wd)).with_digits(d);
}

} // namespace mdet
