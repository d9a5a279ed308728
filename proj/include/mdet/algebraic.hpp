#pragma once
#include <gmpxx.h>
#include <vector>
#include "mdet/bigcomplex.hpp"

namespace mdet {

// Integer polynomials are coefficient vectors, constant term first.
// A minimal polynomial is primitive with positive leading coefficient.

BigReal eval_poly(const std::vector<mpz_class>& p, const BigReal& x);
BigComplex eval_poly(const std::vector<mpz_class>& p, const BigComplex& x);
std::vector<mpz_class> poly_derivative(const std::vector<mpz_class>& p);

// Minimal polynomial of x up to max_degree, or empty when none is found.
// Degrees are searched in ascending order and lower degrees are ruled out
// with a certified coefficient bound before moving up, so a returned
// polynomial is minimal (hence irreducible over Q).
std::vector<mpz_class> recognize_minpoly(const BigReal& x, int max_degree, int digits,
                                         int max_coeff_bits = 64);

// |p(x)| < ||p|| * max(1,|x|)^deg * 10^(-(digits-10)) at x's own precision.
bool verify_minpoly(const std::vector<mpz_class>& p, const BigReal& x);
bool verify_minpoly(const std::vector<mpz_class>& p, const BigComplex& x);

// Exact count of distinct real roots via Sturm chains over Q.
int count_real_roots(const std::vector<mpz_class>& p);

// All complex roots by Durand-Kerner iteration (p squarefree).
std::vector<BigComplex> poly_roots(const std::vector<mpz_class>& p, int digits);

std::string poly_str(const std::vector<mpz_class>& p);

} // namespace mdet
