#pragma once
#include <functional>
#include "mdet/bigreal.hpp"

namespace mdet {

// Tanh-sinh (double exponential) quadrature of f over the finite interval
// [a, b], targeting `digits` correct decimal digits.
//
// The node/weight ladder is refined by halving the step until two successive
// levels agree to the target tolerance.  Integrands may blow up
// logarithmically (or with any integrable power) at either endpoint; nodes
// are generated as exact offsets from the endpoints so such singularities
// are sampled accurately.
//
// Throws precision_error if the level budget is exhausted before convergence.
BigReal tanh_sinh_integrate(const std::function<BigReal(const BigReal&)>& f,
                            const BigReal& a, const BigReal& b, int digits,
                            int max_level = 13);

} // namespace mdet
