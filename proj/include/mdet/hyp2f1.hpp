#pragma once
#include <gmpxx.h>
#include "mdet/bigcomplex.hpp"

namespace mdet {

// Gauss hypergeometric function 2F1(a, b; c; z) for rational parameters and
// complex argument, on the principal branch (cut along [1, +inf)).
//
// Strategy: direct series for small |z|; Pfaff transformation when
// |z/(z-1)| is small; connection formula at 1-z (including the logarithmic
// case c = a + b, the case used throughout the period computations); and
// Taylor-step analytic continuation of the hypergeometric ODE for the
// remaining neighbourhood of |z| = |1-z| = 1.
BigComplex hyp2f1(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                  const BigComplex& z);

BigReal hyp2f1(const mpq_class& a, const mpq_class& b, const mpq_class& c,
               const BigReal& z);

} // namespace mdet
