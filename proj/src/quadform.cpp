#include "mdet/quadform.hpp"
#include "mdet/errors.hpp"
#include <algorithm>
#include <set>

namespace mdet {

bool QForm::primitive() const {
    mpz_class g = gcd(gcd(a, b), c);
    return g == 1;
}

BigComplex embed(const QForm& f, int digits) {
    BigReal sd = sqrt(BigReal::of(mpz_class(-f.disc()), digits));
    BigReal two_a = BigReal::of(mpz_class(2 * f.a), digits);
    return BigComplex(BigReal::of(mpz_class(-f.b), digits) / two_a, sd / two_a);
}

QForm transform(const QForm& f, long p, long q, long r, long s) {
    if (p * s - q * r != 1) throw domain_error("transform: matrix not in SL2(Z)");
    QForm g;
    g.a = f.a * s * s - f.b * r * s + f.c * r * r;
    g.b = -2 * f.a * q * s + f.b * (p * s + q * r) - 2 * f.c * p * r;
    g.c = f.a * q * q - f.b * p * q + f.c * p * p;
    return g;
}

std::vector<QForm> reduced_forms(const mpz_class& D) {
    if (D >= 0) throw domain_error("reduced_forms: discriminant must be negative");
    mpz_class r = D % 4;
    if (r < 0) r += 4;
    if (r != 0 && r != 1) throw domain_error("reduced_forms: discriminant must be 0 or 1 mod 4");

    std::vector<QForm> out;
    mpz_class absD = -D;
    for (mpz_class b = (absD % 2 == 0) ? 0 : 1; 3 * b * b <= absD; b += 2) {
        mpz_class m = (b * b + absD) / 4;
        mpz_class amax = sqrt(m);
        for (mpz_class a = (b == 0) ? 1 : b; a * a <= m; ++a) {
            if (m % a != 0) continue;
            mpz_class c = m / a;
            mpz_class g = gcd(gcd(a, b), c);
            if (g != 1) continue;
            out.push_back({a, b, c});
            if (b != 0 && b != a && a != c) out.push_back({a, -b, c});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

long class_number(const mpz_class& D) {
    return (long)reduced_forms(D).size();
}

bool in_gamma0_domain(const QForm& f, int ell) {
    if (ell != 3 && ell != 4) throw domain_error("in_gamma0_domain: ell must be 3 or 4");
    return -f.a < f.b && f.b <= f.a && -ell * f.c < f.b && f.b <= ell * f.c;
}

QForm reduce_gamma0(const QForm& f, int ell) {
    if (ell != 3 && ell != 4) throw domain_error("reduce_gamma0: ell must be 3 or 4");
    if (f.a <= 0 || f.disc() >= 0) throw domain_error("reduce_gamma0: form not positive definite");
    QForm g = f;
    for (int iter = 0; iter < 100000; ++iter) {
        // translate b into (-a, a]
        mpz_class k;
        mpz_fdiv_q(k.get_mpz_t(), mpz_class(g.b + g.a - 1).get_mpz_t(), mpz_class(2 * g.a).get_mpz_t());
        if (k != 0) {
            g.c = g.a * k * k - g.b * k + g.c;
            g.b = g.b - 2 * g.a * k;
        }
        if (g.b > ell * g.c) {
            // inside the right-hand excluded disk; [[1,0],[ell,1]] pulls it out
            g.a = g.a - ell * g.b + ell * ell * g.c;
            g.b = g.b - 2 * ell * g.c;
            continue;
        }
        if (g.b < -ell * g.c) {
            g.a = g.a + ell * g.b + ell * ell * g.c;
            g.b = g.b + 2 * ell * g.c;
            continue;
        }
        if (g.b == -ell * g.c) {
            // excluded right arc; its mirror on the left arc is kept
            g.b = -g.b;
            continue;
        }
        if (!in_gamma0_domain(g, ell)) throw error("reduce_gamma0: landed outside domain");
        return g;
    }
    throw error("reduce_gamma0: reduction did not terminate");
}

std::vector<QForm> gamma0_domain_points(const mpz_class& D, int ell) {
    static const long reps4[6][4] = {
        {1, 0, 0, 1}, {0, -1, 1, 0}, {0, -1, 1, 1}, {0, -1, 1, 2}, {0, -1, 1, 3}, {1, 0, 2, 1}};
    static const long reps3[4][4] = {
        {1, 0, 0, 1}, {0, -1, 1, 0}, {0, -1, 1, 1}, {0, -1, 1, 2}};
    const long(*reps)[4] = (ell == 4) ? reps4 : reps3;
    int nreps = (ell == 4) ? 6 : 4;

    std::set<QForm> seen;
    for (const QForm& f : reduced_forms(D)) {
        for (int i = 0; i < nreps; ++i) {
            QForm g = transform(f, reps[i][0], reps[i][1], reps[i][2], reps[i][3]);
            seen.insert(reduce_gamma0(g, ell));
        }
    }
    return std::vector<QForm>(seen.begin(), seen.end());
}

} // namespace mdet
