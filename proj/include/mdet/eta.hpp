#pragma once
#include "mdet/bigcomplex.hpp"

namespace mdet {

// Dedekind eta function eta(tau) = q^{1/24} prod (1 - q^n), q = e^{2 pi i tau},
// for tau in the upper half plane.
//
// The argument is first reduced toward the fundamental domain with
// eta(tau+1) = e^{i pi/12} eta(tau) and eta(-1/tau) = sqrt(-i tau) eta(tau),
// tracking the accumulated multiplier, then the pentagonal-number series is
// summed where it converges rapidly.
BigComplex dedekind_eta(const BigComplex& tau);

} // namespace mdet
