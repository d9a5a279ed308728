#pragma once
#include <gmpxx.h>
#include <map>
#include <memory>
#include <string>
#include <vector>
#include "mdet/bigcomplex.hpp"

namespace mdet {

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

// Number field Q[x]/(g) with a distinguished complex root of g. g follows
// the minimal-polynomial convention (constant term first, primitive,
// positive leading coefficient) and must be irreducible over Q. The
// rational field is g = x with root 0.
class NumberField {
public:
  const std::vector<mpz_class>& minpoly() const { return g_; }
  int degree() const { return static_cast<int>(g_.size()) - 1; }
  bool rational() const { return degree() == 1; }

  // Roots of g sorted by decreasing (Re, Im). Elements evaluate at the
  // distinguished root roots(digits)[0].
  const std::vector<BigComplex>& roots(int digits) const;

  // Automorphisms as rational maps s of degree < deg g with g(s) = 0 mod g,
  // identity first, then ordered by the index of the image root. Throws
  // verify_error when the field is not Galois over Q.
  const std::vector<std::vector<mpq_class>>& automorphisms() const;

  // Index of the automorphism taking the distinguished root to its complex
  // conjugate (0 when that root is real).
  int conj_automorphism() const;

  std::string str() const;

private:
  friend FieldPtr make_field(std::vector<mpz_class> g);
  explicit NumberField(std::vector<mpz_class> g) : g_(std::move(g)) {}
  std::vector<mpz_class> g_;
  mutable std::map<int, std::vector<BigComplex>> root_cache_;
  mutable std::vector<std::vector<mpq_class>> autos_;
  mutable int conj_auto_ = -1;
};

FieldPtr rational_field();

// Canonicalizes g and returns a shared field object, so equal polynomials
// give pointer-equal fields. g must be irreducible over Q.
FieldPtr make_field(std::vector<mpz_class> g);

// Element of a number field in the power basis of the distinguished root.
class FieldElem {
public:
  FieldElem();
  explicit FieldElem(FieldPtr K);
  FieldElem(FieldPtr K, std::vector<mpq_class> coords);
  static FieldElem of(const mpq_class& x, FieldPtr K);
  static FieldElem gen(FieldPtr K);

  const FieldPtr& field() const { return K_; }
  const std::vector<mpq_class>& coords() const { return c_; }
  bool is_zero() const;
  bool is_rational() const;
  mpq_class rat() const;  // requires is_rational()
  BigComplex eval(int digits) const;

  FieldElem conj() const;
  FieldElem inverse() const;  // throws domain_error on zero

  FieldElem operator-() const;
  FieldElem& operator+=(const FieldElem& o);
  FieldElem& operator-=(const FieldElem& o);
  FieldElem& operator*=(const FieldElem& o);
  FieldElem& operator/=(const FieldElem& o);
  friend FieldElem operator+(FieldElem a, const FieldElem& b) { return a += b; }
  friend FieldElem operator-(FieldElem a, const FieldElem& b) { return a -= b; }
  friend FieldElem operator*(FieldElem a, const FieldElem& b) { return a *= b; }
  friend FieldElem operator/(FieldElem a, const FieldElem& b) { return a /= b; }
  FieldElem operator*(const mpq_class& x) const;
  bool operator==(const FieldElem& o) const;
  bool operator!=(const FieldElem& o) const { return !(*this == o); }

  std::string str() const;

private:
  FieldPtr K_;
  std::vector<mpq_class> c_;
};

FieldElem apply_automorphism(const FieldElem& x, int k);

// Rewrites x as an element of L, choosing the embedding that preserves the
// numeric value of the distinguished root. Throws domain_error when the
// field of x does not embed into L that way.
FieldElem lift(const FieldElem& x, const FieldPtr& L);

// A common overfield admitting value-preserving lifts from both arguments.
FieldPtr compositum(const FieldPtr& A, const FieldPtr& B);

// Nearest rational with denominator below 2^max_den_bits; false when the
// continued fraction expansion fails to converge at x's working precision.
bool recognize_rational(const BigReal& x, long max_den_bits, mpq_class& out);

// Irreducible integer factors of p over Q, with multiplicity, certified by
// exact division; integer content is dropped.
std::vector<std::vector<mpz_class>> factor_rational_poly(std::vector<mpz_class> p);

} // namespace mdet
