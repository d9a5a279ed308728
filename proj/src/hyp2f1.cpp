#include "mdet/hyp2f1.hpp"
#include <vector>

namespace mdet {

namespace {

BigReal to_r(const mpq_class& q, int d) { return BigReal::of(q, d); }

// Direct power series, |z| < 1 (practical for |z| <= 0.75).
BigComplex series(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                  const BigComplex& z, int digits) {
    int wd = digits + 10;
    BigComplex zz = z.with_digits(wd);
    BigComplex term = BigComplex::of(1, 0, wd);
    BigComplex sum = term;
    BigReal eps = pow10(-(long)wd, wd);
    mpq_class an = a, bn = b, cn = c;
    for (long n = 0; n < 100000; ++n) {
        mpq_class ratio = an * bn / (cn * (n + 1));
        term = term * zz * to_r(ratio, wd);
        sum += term;
        if (abs(term) < eps * (abs(sum) + 1L)) return sum.with_digits(digits);
        an += 1;
        bn += 1;
        cn += 1;
    }
    throw precision_error("hyp2f1: series did not converge");
}

// Logarithmic connection at z -> 1 for c = a + b:
//   2F1(a,b;a+b;z) = G * sum_n ((a)_n (b)_n / (n!)^2) *
//                    [2 psi(n+1) - psi(a+n) - psi(b+n) - log(1-z)] (1-z)^n
// with G = Gamma(a+b) / (Gamma(a) Gamma(b)).
BigComplex connection_log(const mpq_class& a, const mpq_class& b,
                          const BigComplex& one_minus_z, int digits) {
    int wd = digits + 10;
    BigComplex w = one_minus_z.with_digits(wd);
    // Branch convention on the cut (real z > 1, i.e. w < 0): continue from the
    // upper half z-plane, where arg(1-z) -> -pi.
    BigComplex logw = (w.im.is_zero() && w.re.sign() < 0)
                          ? BigComplex(log(abs(w)), -BigReal::pi(wd))
                          : log(w);
    BigReal g = gamma_fn(to_r(a + b, wd)) / (gamma_fn(to_r(a, wd)) * gamma_fn(to_r(b, wd)));

    BigReal psi1 = -BigReal::euler_gamma(wd); // psi(1)
    BigReal psia = digamma(to_r(a, wd));
    BigReal psib = digamma(to_r(b, wd));

    BigComplex pw = BigComplex::of(1, 0, wd); // (1-z)^n
    BigReal poch = BigReal::of(1L, wd);       // (a)_n (b)_n / (n!)^2
    BigComplex sum(wd);
    BigReal eps = pow10(-(long)wd, wd);
    mpq_class an = a, bn = b;
    for (long n = 0; n < 100000; ++n) {
        BigComplex bracket = BigComplex(psi1 * 2L - psia - psib) - logw;
        BigComplex term = bracket * pw * poch;
        sum += term;
        if (n > 2 && abs(term) < eps * (abs(sum) + 1L)) break;
        // advance n -> n+1
        mpq_class num = an * bn;
        poch = poch * to_r(num, wd) / to_r(mpq_class((n + 1)) * (n + 1), wd);
        pw *= w;
        psi1 += BigReal::of(1L, wd) / BigReal::of((long)n + 1, wd);
        psia += BigReal::of(1L, wd) / to_r(an, wd);
        psib += BigReal::of(1L, wd) / to_r(bn, wd);
        an += 1;
        bn += 1;
    }
    return (BigComplex(g) * sum).with_digits(digits);
}

// General connection at z -> 1 for non-integer c-a-b.
BigComplex connection_general(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                              const BigComplex& one_minus_z, int digits);

BigComplex pfaff(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                 const BigComplex& z, int digits);

// Evaluate 2F1 and its derivative at an ordinary point z0 (|z0|<1, via series).
//   d/dz 2F1(a,b;c;z) = (ab/c) 2F1(a+1,b+1;c+1;z)
void series_with_deriv(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                       const BigComplex& z0, int digits, BigComplex& f, BigComplex& fp) {
    f = series(a, b, c, z0, digits);
    mpq_class s = a * b / c;
    fp = series(a + 1, b + 1, c + 1, z0, digits) * to_r(s, digits + 10);
}

// Taylor-step continuation of the hypergeometric ODE
//   z(1-z) w'' + [c - (a+b+1) z] w' - a b w = 0
// along a polyline from z_start (where w, w' are known) to z_end.
void ode_step(const mpq_class& a, const mpq_class& b, const mpq_class& c,
              const BigComplex& z0, const BigComplex& z1, int wd,
              BigComplex& w, BigComplex& wp) {
    // Taylor coefficients around z0: c_{k+2} from c_k, c_{k+1}.
    BigComplex zeta = z1 - z0;
    BigReal ra = to_r(a, wd), rb = to_r(b, wd), rc = to_r(c, wd);
    BigReal abp1 = to_r(a + b + 1, wd);
    BigComplex q0 = z0 * (1L - z0); // z0(1-z0)
    std::vector<BigComplex> cs;
    cs.push_back(w);
    cs.push_back(wp);
    BigReal eps = pow10(-(long)wd, wd);
    BigComplex val = cs[0] + cs[1] * zeta;
    BigComplex dval = cs[1];
    BigComplex zp = zeta; // zeta^k for val terms
    for (long k = 0;; ++k) {
        // c_{k+2} = [ (k+a)(k+b) c_k - (k+1)((1-2 z0) k + c - (a+b+1) z0) c_{k+1} ]
        //           / ((k+1)(k+2) z0(1-z0))
        BigReal kk = BigReal::of(k, wd);
        BigComplex num = cs[k] * ((kk + ra) * (kk + rb)) -
                         cs[k + 1] * ((1L - z0 * 2L) * kk + rc - z0 * abp1) * (k + 1);
        BigComplex ck2 = num / (q0 * ((k + 1) * (k + 2)));
        cs.push_back(ck2);
        BigComplex t = ck2 * zp * zeta; // zeta^{k+2}
        val += t;
        dval += ck2 * zp * (k + 2);
        zp *= zeta;
        if (k > 4 && abs(t) < eps * (abs(val) + 1L) &&
            abs(ck2 * zp) * (k + 2) < eps * (abs(dval) + 1L))
            break;
        if (k > 40000) throw precision_error("hyp2f1: ODE Taylor step stalled");
    }
    w = val;
    wp = dval;
}

BigComplex continuation(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                        const BigComplex& z, int digits) {
    int wd = digits + 15;
    BigComplex target = z.with_digits(wd);
    // start at 0.4 (safe series point), detour through +/- 0.9i to avoid
    // the singular points 0 and 1
    BigComplex z0 = BigComplex(BigReal::parse("0.4", wd));
    BigComplex w, wp;
    series_with_deriv(a, b, c, z0, wd, w, wp);
    int sgn = target.im.sign() >= 0 ? 1 : -1;
    BigComplex mid = {BigReal::parse("0.45", wd), BigReal::of(sgn * 9L, wd) / 10L};
    std::vector<BigComplex> waypoints;
    waypoints.push_back(mid);
    waypoints.push_back(target);
    for (const BigComplex& next : waypoints) {
        // advance from z0 to next in steps short relative to distance to {0,1}
        for (int guard = 0; guard < 400; ++guard) {
            BigComplex d = next - z0;
            BigReal dist = abs(d);
            BigReal rad = std::min(abs(z0), abs(z0 - 1L)) * 6L / 10L;
            if (dist <= rad) {
                ode_step(a, b, c, z0, next, wd, w, wp);
                z0 = next;
                break;
            }
            BigComplex z1 = z0 + d * (rad / dist);
            ode_step(a, b, c, z0, z1, wd, w, wp);
            z0 = z1;
        }
    }
    return w.with_digits(digits);
}

BigComplex eval(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                const BigComplex& z, int digits) {
    double az = abs(z).to_double();
    if (az <= 0.75) return series(a, b, c, z, digits);

    BigComplex zm1 = z - 1L;
    double azm = abs(z / zm1).to_double();
    if (azm <= 0.75) return pfaff(a, b, c, z, digits);

    double a1z = abs(1L - z).to_double();
    if (a1z <= 0.75) {
        mpq_class s = c - a - b;
        if (s == 0) return connection_log(a, b, 1L - z, digits);
        if (s.get_den() != 1) return connection_general(a, b, c, 1L - z, digits);
        throw domain_error("hyp2f1: integer nonzero c-a-b connection not supported");
    }
    return continuation(a, b, c, z, digits);
}

BigComplex pfaff(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                 const BigComplex& z, int digits) {
    int wd = digits + 10;
    BigComplex zz = z.with_digits(wd);
    BigComplex w = zz / (zz - 1L);
    BigComplex pre = exp(log(1L - zz) * (-to_r(a, wd)));
    return (pre * eval(a, c - b, c, w, wd)).with_digits(digits);
}

BigComplex connection_general(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                              const BigComplex& one_minus_z, int digits) {
    int wd = digits + 10;
    mpq_class s = c - a - b;
    BigComplex w = one_minus_z.with_digits(wd);
    BigReal g1 = gamma_fn(to_r(c, wd)) * gamma_fn(to_r(s, wd)) /
                 (gamma_fn(to_r(c - a, wd)) * gamma_fn(to_r(c - b, wd)));
    BigReal g2 = gamma_fn(to_r(c, wd)) * gamma_fn(to_r(-s, wd)) /
                 (gamma_fn(to_r(a, wd)) * gamma_fn(to_r(b, wd)));
    BigComplex f1 = eval(a, b, a + b - c + 1, w, wd);
    BigComplex f2 = eval(c - a, c - b, c - a - b + 1, w, wd);
    BigComplex logw = (w.im.is_zero() && w.re.sign() < 0)
                          ? BigComplex(log(abs(w)), -BigReal::pi(wd))
                          : log(w);
    BigComplex ws = exp(logw * to_r(s, wd));
    return (BigComplex(g1) * f1 + ws * BigComplex(g2) * f2).with_digits(digits);
}

} // namespace

BigComplex hyp2f1(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                  const BigComplex& z) {
    if (c <= 0 && c.get_den() == 1)
        throw domain_error("hyp2f1: c must not be a nonpositive integer");
    return eval(a, b, c, z, z.digits());
}

BigReal hyp2f1(const mpq_class& a, const mpq_class& b, const mpq_class& c,
               const BigReal& z) {
    if (z >= 1) throw domain_error("hyp2f1: real argument on the cut [1,inf)");
    return hyp2f1(a, b, c, BigComplex(z)).re;
}

} // namespace mdet
