#pragma once
#include <gmpxx.h>
#include <vector>
#include "mdet/bigreal.hpp"

namespace mdet {

enum class PSLQStatus {
    found,               // certified relation returned in coeffs
    none_certified,      // no relation with coefficients below the bit bound exists
    precision_exhausted  // undecided at this working precision
};

struct PSLQResult {
    PSLQStatus status = PSLQStatus::precision_exhausted;
    std::vector<mpz_class> coeffs; // relation: sum coeffs[j] * x[j] = 0
    long iterations = 0;
    // log2 of the certified lower bound on the Euclidean norm of any relation
    double norm_bound_bits = 0.0;
};

// PSLQ integer relation search on x (all entries nonzero), gamma = sqrt(4/3).
// Succeeds only if the candidate re-verifies against the inputs at full
// precision and all coefficients fit in max_coeff_bits bits.
PSLQResult pslq(const std::vector<BigReal>& x, int digits, int max_coeff_bits = 64);

} // namespace mdet
