#pragma once
#include "mdet/bigcomplex.hpp"

namespace mdet {

// Modular lambda: lambda(tau) = 16 (eta(tau/2) eta(2tau)^2 / eta(tau)^3)^8.
BigComplex lambda_fn(const BigComplex& tau);

// Hauptmodul of the degree-2 family: t_P(tau) = eta(2tau)^24 / (eta(tau)^8 eta(4tau)^16),
// equivalently 16 / lambda(2 tau).
BigComplex t_P(const BigComplex& tau);

// Hauptmodul of the degree-3 family: t_Q(tau) = 27 + (eta(tau)/eta(3tau))^12.
BigComplex t_Q(const BigComplex& tau);

// Klein j-invariant via lambda: j = 256 (1 - l + l^2)^3 / (l^2 (1 - l)^2).
BigComplex j_fn(const BigComplex& tau);

// j-invariant of the curve cut out by parameter t in each family.
BigComplex j_of_F(const BigComplex& t);
BigComplex j_of_C(const BigComplex& t);

// Inverse period maps: a point tau' with t_P(tau') = t (resp. t_Q(tau') = t),
// computed from hypergeometric period ratios.
BigComplex tau_from_tP(const BigComplex& t);
BigComplex tau_from_tQ(const BigComplex& t);

} // namespace mdet
