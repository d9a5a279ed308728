#include "mdet/algebraic.hpp"
#include "mdet/pslq.hpp"
#include "mdet/errors.hpp"
#include <algorithm>

namespace mdet {

BigReal eval_poly(const std::vector<mpz_class>& p, const BigReal& x) {
    BigReal acc = BigReal::of(0L, x.digits());
    for (size_t i = p.size(); i-- > 0;) acc = acc * x + BigReal::of(p[i], x.digits());
    return acc;
}

BigComplex eval_poly(const std::vector<mpz_class>& p, const BigComplex& x) {
    BigComplex acc = BigComplex::of(0L, 0L, x.digits());
    for (size_t i = p.size(); i-- > 0;) acc = acc * x + BigComplex(BigReal::of(p[i], x.digits()), BigReal::of(0L, x.digits()));
    return acc;
}

std::vector<mpz_class> poly_derivative(const std::vector<mpz_class>& p) {
    std::vector<mpz_class> d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(mpz_class(i) * p[i]);
    return d;
}

namespace {

void normalize_primitive(std::vector<mpz_class>& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    if (p.empty()) return;
    mpz_class g = 0;
    for (const mpz_class& c : p) g = gcd(g, c);
    if (g > 1)
        for (mpz_class& c : p) c /= g;
    if (p.back() < 0)
        for (mpz_class& c : p) c = -c;
}

} // namespace

std::vector<mpz_class> recognize_minpoly(const BigReal& x, int max_degree, int digits,
                                         int max_coeff_bits) {
    for (int d = 1; d <= max_degree; ++d) {
        // spurious numeric relations of height ~10^(digits/(d+1)) always exist;
        // only accept coefficients the working precision can actually separate
        int cap = std::min(max_coeff_bits, (int)((digits - 15) * 3.3219 / (d + 1)));
        if (cap < 8) return {};
        std::vector<BigReal> v;
        BigReal pw = BigReal::of(1L, digits);
        v.push_back(pw);
        for (int k = 1; k <= d; ++k) {
            pw = pw * x.with_digits(digits);
            v.push_back(pw);
        }
        PSLQResult r = pslq(v, digits, cap);
        if (r.status == PSLQStatus::found) {
            std::vector<mpz_class> p = r.coeffs;
            normalize_primitive(p);
            if ((int)p.size() != d + 1) return {}; // inconsistent with lower-degree certificates
            if (!verify_minpoly(p, x)) return {};
            return p;
        }
        if (r.status == PSLQStatus::precision_exhausted) return {};
    }
    return {};
}

bool verify_minpoly(const std::vector<mpz_class>& p, const BigReal& x) {
    if (p.size() < 2) return false;
    int d = x.digits();
    BigReal height = BigReal::of(0L, d);
    for (const mpz_class& c : p) {
        BigReal a = abs(BigReal::of(c, d));
        if (a > height) height = a;
    }
    BigReal ax = abs(x);
    if (ax < BigReal::of(1L, d)) ax = BigReal::of(1L, d);
    BigReal bound = height * pow(ax, (long)(p.size() - 1)) * pow10(-(d - 10), d);
    return abs(eval_poly(p, x)) < bound;
}

bool verify_minpoly(const std::vector<mpz_class>& p, const BigComplex& x) {
    if (p.size() < 2) return false;
    int d = x.digits();
    BigReal height = BigReal::of(0L, d);
    for (const mpz_class& c : p) {
        BigReal a = abs(BigReal::of(c, d));
        if (a > height) height = a;
    }
    BigReal ax = abs(x);
    if (ax < BigReal::of(1L, d)) ax = BigReal::of(1L, d);
    BigReal bound = height * pow(ax, (long)(p.size() - 1)) * pow10(-(d - 10), d);
    return abs(eval_poly(p, x)) < bound;
}

namespace {

using QPoly = std::vector<mpq_class>;

int qdeg(const QPoly& p) {
    for (size_t i = p.size(); i-- > 0;)
        if (p[i] != 0) return (int)i;
    return -1;
}

QPoly qrem(QPoly num, const QPoly& den) {
    int dd = qdeg(den);
    for (int dn = qdeg(num); dn >= dd && dn >= 0; dn = qdeg(num)) {
        mpq_class f = num[dn] / den[dd];
        for (int i = 0; i <= dd; ++i) num[dn - dd + i] -= f * den[i];
        num[dn] = 0;
    }
    num.resize(std::max(qdeg(num) + 1, 1));
    return num;
}

int sign_at_inf(const QPoly& p, int dir) {
    int d = qdeg(p);
    if (d < 0) return 0;
    int s = sgn(p[d]);
    if (dir < 0 && (d % 2 == 1)) s = -s;
    return s;
}

} // namespace

int count_real_roots(const std::vector<mpz_class>& p) {
    QPoly p0;
    for (const mpz_class& c : p) p0.push_back(mpq_class(c));
    if (qdeg(p0) <= 0) return 0;
    QPoly p1;
    for (size_t i = 1; i < p0.size(); ++i) p1.push_back(mpq_class((long)i) * p0[i]);

    std::vector<QPoly> chain{p0, p1};
    while (qdeg(chain.back()) > 0) {
        QPoly r = qrem(chain[chain.size() - 2], chain.back());
        if (qdeg(r) < 0) break; // non-squarefree input; chain ends at the gcd
        for (mpq_class& c : r) c = -c;
        chain.push_back(r);
    }
    int vneg = 0, vpos = 0, sprevn = 0, sprevp = 0;
    for (const QPoly& q : chain) {
        int sn = sign_at_inf(q, -1), sp = sign_at_inf(q, +1);
        if (sn != 0) {
            if (sprevn != 0 && sn != sprevn) ++vneg;
            sprevn = sn;
        }
        if (sp != 0) {
            if (sprevp != 0 && sp != sprevp) ++vpos;
            sprevp = sp;
        }
    }
    return vneg - vpos;
}

std::vector<BigComplex> poly_roots(const std::vector<mpz_class>& p, int digits) {
    std::vector<mpz_class> q = p;
    while (!q.empty() && q.back() == 0) q.pop_back();
    if (q.size() < 2) throw domain_error("poly_roots: degree must be positive");
    int n = (int)q.size() - 1;
    int wd = digits + 20;

    std::vector<BigComplex> monic;
    BigReal lead = BigReal::of(q[n], wd);
    for (int i = 0; i <= n; ++i)
        monic.push_back(BigComplex(BigReal::of(q[i], wd) / lead, BigReal::of(0L, wd)));

    BigReal radius = BigReal::of(0L, wd);
    for (int i = 0; i < n; ++i) {
        BigReal a = abs(monic[i].re);
        if (a > radius) radius = a;
    }
    radius = radius + BigReal::of(1L, wd);

    std::vector<BigComplex> z;
    BigComplex seed = BigComplex(BigReal::parse("0.4", wd), BigReal::parse("0.9", wd));
    BigComplex cur = BigComplex(radius * BigReal::parse("0.7", wd), BigReal::of(0L, wd));
    for (int i = 0; i < n; ++i) {
        cur = cur * seed;
        z.push_back(cur);
    }

    auto evalm = [&](const BigComplex& x) {
        BigComplex acc = BigComplex::of(0L, 0L, wd);
        for (int i = n; i >= 0; --i) acc = acc * x + monic[i];
        return acc;
    };

    BigReal tol = pow10(-(digits + 5), wd);
    for (int iter = 0; iter < 500; ++iter) {
        BigReal worst = BigReal::of(0L, wd);
        for (int i = 0; i < n; ++i) {
            BigComplex denom = BigComplex::of(1L, 0L, wd);
            for (int j = 0; j < n; ++j)
                if (j != i) denom = denom * (z[i] - z[j]);
            BigComplex delta = evalm(z[i]) / denom;
            z[i] = z[i] - delta;
            BigReal ad = abs(delta);
            if (ad > worst) worst = ad;
        }
        if (worst < tol) {
            std::sort(z.begin(), z.end(), [](const BigComplex& u, const BigComplex& v) {
                if (!(u.re == v.re)) return u.re < v.re;
                return u.im < v.im;
            });
            for (BigComplex& w : z) w = w.with_digits(digits);
            return z;
        }
    }
    throw precision_error("poly_roots: iteration did not converge");
}

std::string poly_str(const std::vector<mpz_class>& p) {
    std::string s;
    for (size_t i = p.size(); i-- > 0;) {
        if (p[i] == 0) continue;
        mpz_class c = p[i];
        if (s.empty()) {
            if (c < 0) s += "-";
        } else {
            s += (c < 0) ? " - " : " + ";
        }
        mpz_class a = abs(c);
        if (a != 1 || i == 0) s += a.get_str();
        if (i >= 1) {
            s += "x";
            if (i >= 2) s += "^" + std::to_string(i);
        }
    }
    if (s.empty()) s = "0";
    return s;
}

} // namespace mdet
