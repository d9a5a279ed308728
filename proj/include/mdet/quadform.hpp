#pragma once
#include <gmpxx.h>
#include <vector>
#include "mdet/bigcomplex.hpp"

namespace mdet {

// Integral positive definite binary quadratic form a x^2 + b x y + c y^2,
// a > 0, with discriminant b^2 - 4ac < 0.  Its root in the upper half plane
// is tau = (-b + sqrt(disc)) / (2a).
struct QForm {
    mpz_class a, b, c;

    mpz_class disc() const { return b * b - 4 * a * c; }
    bool primitive() const;
    bool operator==(const QForm& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(const QForm& o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        return c < o.c;
    }
    std::string str() const {
        return "[" + a.get_str() + "," + b.get_str() + "," + c.get_str() + "]";
    }
};

// Root of the form in the upper half plane at the given working precision.
BigComplex embed(const QForm& f, int digits);

// Form with root g(tau), g = [[p,q],[r,s]] in SL2(Z) acting by Moebius maps.
QForm transform(const QForm& f, long p, long q, long r, long s);

// All SL2(Z)-reduced primitive forms of discriminant D < 0
// (|b| <= a <= c with b >= 0 when |b| = a or a = c), sorted.
std::vector<QForm> reduced_forms(const mpz_class& D);

// Class number h(D) of the order of discriminant D.
long class_number(const mpz_class& D);

// Membership in the Gamma0(ell) domain used here (ell = 4 or 3):
// the strip |Re tau| <= 1/2 minus the open disks |tau -+ 1/ell| < 1/ell,
// keeping the left vertical edge and left arc, excluding their mirrors.
// In form coordinates: -a < b <= a and -ell*c < b <= ell*c.
bool in_gamma0_domain(const QForm& f, int ell);

// Gamma0(ell)-reduction of a form into that domain (ell = 4 or 3).
QForm reduce_gamma0(const QForm& f, int ell);

// All points of discriminant D in the Gamma0(ell) domain, as forms, sorted.
// Assembled from SL2-reduced representatives pushed through coset
// representatives of Gamma0(ell) \ SL2(Z) and re-reduced.
std::vector<QForm> gamma0_domain_points(const mpz_class& D, int ell);

} // namespace mdet
