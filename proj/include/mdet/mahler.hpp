#pragma once
#include "mdet/bigcomplex.hpp"
#include "mdet/classify.hpp"
#include "mdet/quadform.hpp"

namespace mdet {

// Which defining integral to use for the Q family.  `automatic` follows
// the cube-root rule: classical when the cube root of t lies outside the
// open deltoid region, modified when t is real in (-1, 27).
enum class Branch { automatic, classical, modified };

struct MahlerRequest {
    Family family = Family::P;
    BigComplex t;
    Branch branch = Branch::automatic;
};

// mu(t) = m(x + 1/x + y + 1/y + sqrt(t)), the Mahler measure of the
// P-family polynomial, by Jensen-reduced circle quadrature.  Defined for
// any complex t; the result does not depend on the square-root branch.
BigReal mu(const BigComplex& t, int prec);

// m(Q~_t) = I(t) + J(t) for the Q-family polynomial
// y^2 + (x^2 - t^{1/3} x) y + x.  Requires the cube root of t outside the
// open deltoid; inputs are treated as real exactly when Im t == 0 (real
// inputs take the real cube root, complex ones the principal root with
// argument in (-pi/3, pi/3]).
BigReal n_classical(const BigComplex& t, int prec);

// The modified measure I(t) - 2 J(t), where I integrates log|y_+| over
// the arc |theta| < c(t), J over the complement, and
// c(t) = arccos((t^{1/3} - 1)/2).  Requires real t in (-1, 27), t != 0.
BigReal n_modified(const BigReal& t, int prec);

// nu(t): branch dispatch over n_classical / n_modified.
BigReal nu(const BigComplex& t, int prec, Branch branch = Branch::automatic);

// Family dispatch: mu for P, nu for Q.
BigReal mahler(const MahlerRequest& req, int prec);

// True iff k lies strictly inside the 3-cusped hypocycloid with vertices
// 3, 3w, 3w^2 (w = e^{2 pi i/3}); boundary points give false.
bool in_deltoid(const BigComplex& k);

struct EKParams {
    Family family = Family::P;
    BigComplex tau0; // upper half plane
};

// The Eisenstein-Kronecker series
//   sum'_{m,n} chi(n) (f m Re(tau0) + n) / |f m tau0 + n|^4
// with (f, chi) = (4, chi_{-4}) for P and (3, chi_{-3}) for Q, summed
// with exponential acceleration: the m = 0 line in closed form, each
// m != 0 line as a cosecant expression over residue classes mod f.
BigReal ek_sum(const EKParams& params, int prec);

// mu(t_P(tau0)) via ek_sum, prefactor 16 Im(tau0)/pi^2.  The form must
// lie in the Gamma0(4) domain.
BigReal mu_via_ek(const QForm& tau0, int prec);

// nu(t_Q(tau0)) via ek_sum, prefactor 27 sqrt(3) Im(tau0)/(4 pi^2), with
// denominator (1 - 3 sgn(t)) pi^2 instead when t_Q(tau0) is real in
// (-1, 27).  The form must lie in the Gamma0(3) domain.
BigReal nu_via_ek(const QForm& tau0, int prec);

} // namespace mdet
