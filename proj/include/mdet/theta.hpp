#pragma once
#include <map>
#include <string>
#include <vector>
#include "mdet/classify.hpp"
#include "mdet/field.hpp"

namespace mdet {

// Kronecker symbol (D/n).
int kronecker_chi(long D, long n);

// Holomorphic q-expansion with exact coefficients in a number field, or
// (after ingestion of decimal data) numeric coefficients. Coefficients are
// reliable for 1 <= n <= truncation; absent entries are zero.
struct QExpansion {
    std::string label;
    long level = 1;
    long neben_disc = 1;  // nebentypus (neben_disc/.), 1 for trivial
    int weight = 2;
    long truncation = 0;
    FieldPtr field = rational_field();
    std::map<long, FieldElem> coeffs;
    std::map<long, BigComplex> numeric_coeffs;

    bool exact() const { return numeric_coeffs.empty(); }
    FieldElem a(long n) const;  // throws data_error in numeric mode
    BigComplex a_num(long n, int digits) const;
    void set(long n, FieldElem v);
    long first_nonzero() const;  // 0 when identically zero
    bool zero_through(long bound) const;
    QExpansion conj() const;
    std::string str(long upto) const;
};

QExpansion qexp_scale(const QExpansion& f, const FieldElem& c);
QExpansion qexp_add(const QExpansion& f, const QExpansion& g);

// Lattice theta attached to a CM point [a,b,c], following the family's
// weighted sum over Z^2. For family P the exponents are
// (16c m^2 + 4b mn + a n^2)/l with l = gcd(a,4b,16c) and weights
// chi_{-4}(n)(2bm+an); for family Q they are (9c m^2 + 3b mn + a n^2)/l
// with l = gcd(a,3b,9c) and weights chi_{-3}(n)(3bm+2an).
struct ThetaParams {
    long l = 1;
    long A[2][2] = {{0, 0}, {0, 0}};  // Gram matrix of the doubled form
    long D = 1;                       // nebentypus discriminant
    long N = 1;                       // level
};

ThetaParams theta_params(const QForm& form, Family family);
QExpansion theta_series(const QForm& form, Family family, long max_exponent);

// Sturm bound for M_k(Gamma_0(N)): floor(k * [SL2(Z):Gamma_0(N)] / 12).
long sturm_bound(long N, int weight = 2);

// f(d tau): coefficient n*d from coefficient n; level and truncation scale by d.
QExpansion embed_oldform(const QExpansion& f, long d);

// Hecke operator: a_n -> a_{np} + chi(p) p a_{n/p}. Truncation drops to
// floor(truncation/p); throws truncation_error when that leaves nothing.
QExpansion hecke_Tp(const QExpansion& f, long p);

struct Decomposition {
    bool ok = false;
    std::vector<FieldElem> coords;  // in the common overfield of basis and target
    long verified_through = 0;
    long witness = -1;  // first failing exponent when !ok
};

// Exact linear decomposition of target over basis, solved on exponents up to
// the Sturm bound of the common level plus a margin of 8 and verified on
// every exponent through min(truncations). All forms must share level,
// weight and character. Throws verify_error when the basis is rank
// deficient over the solve range.
Decomposition decompose(const QExpansion& target, const std::vector<QExpansion>& basis);

// Simultaneous Hecke eigenbasis of an exactly T_p-stable span (stability is
// verified through the Sturm bound for each probe prime, and a violation
// throws verify_error naming the prime). Eigenforms come back with exact
// coefficients in their eigenvalue field, first nonzero coefficient
// normalized to 1, sorted canonically. Empty probes starts from the first
// six primes coprime to the level and extends as separation requires;
// pairwise operator combinations handle orbits whose single-prime
// eigenvalues stay degenerate.
std::vector<QExpansion> eigenform_split(const std::vector<QExpansion>& span,
                                        std::vector<long> probes = {});

// Strips oldform content from a Hecke eigenform: divides the support gcd d0
// out, detects the scale prime p and weights w_k with
// E(tau) = sum_k w_k f(d0 p^k tau), solves the triangular system for the
// newform f (a_1 = 1), and reports the candidate exact level N/(d0 p^K).
// Requires chi(p) = 0 when oldform content is present.
struct ResolvedNewform {
    QExpansion form;
    long scale = 1;        // support gcd d0 divided out first
    long scale_prime = 1;  // p carrying the oldform weights
    std::vector<FieldElem> weights;  // w_0..w_K in form's field
};
ResolvedNewform resolve_newform(const QExpansion& eigenform);

// Text form: header "LABEL N k D", then one "n c_n" line per exponent with
// c_n an exact rational, or "re,im" decimals for coefficients outside Q.
std::string qexp_to_text(const QExpansion& f, long upto, int digits = 40);
QExpansion qexp_from_text(const std::string& text);

}  // namespace mdet
