#pragma once
#include <gmpxx.h>
#include <string>
#include <vector>
#include "mdet/bigcomplex.hpp"
#include "mdet/quadform.hpp"

namespace mdet {

// The two curve families.  P is the degree-2 family F_t with Hauptmodul
// t_P on Gamma0(4); Q is the degree-3 family C_t with t_Q on Gamma0(3).
enum class Family { P, Q };

int family_level(Family fam);          // 4 for P, 3 for Q
std::string family_name(Family fam);   // "P" or "Q"

// t-parameter of the family at a point of the upper half plane.
BigComplex family_t(Family fam, const BigComplex& tau);

// An algebraic number as recognized from a numeric embedding: primitive
// integer minimal polynomial (constant term first, positive leading
// coefficient) plus the embedding it was recognized from.
struct AlgebraicNumber {
    std::vector<mpz_class> minpoly;
    BigComplex approx;
    int degree() const { return (int)minpoly.size() - 1; }
};

enum class OrbitKind {
    rational,
    real_quadratic,
    imag_quadratic,
    cubic,
    totally_real_quartic,
    other_quartic,
};

std::string orbit_kind_name(OrbitKind k);

// One classified CM point: the form in the Gamma0 domain and t there.
struct ClassifiedPoint {
    QForm form;
    AlgebraicNumber t;
    mpz_class disc() const { return form.disc(); }
};

// A full conjugate orbit: the points sharing one minimal polynomial,
// ordered by decreasing Re t (ties by decreasing Im t).  This order is
// the t_1..t_deg labeling the identity tables use.
struct Orbit {
    std::vector<mpz_class> minpoly;
    OrbitKind kind = OrbitKind::rational;
    std::vector<ClassifiedPoint> points;
    mpz_class disc() const { return points.empty() ? mpz_class(0) : points[0].disc(); }
};

// A point whose recognition failed even after escalating precision.
struct ClassifyFailure {
    QForm form;
    std::string reason;
};

struct Census {
    long rational = 0;
    long real_quadratic = 0;
    long imag_quadratic = 0;
    long cubic = 0;
    long totally_real_quartic = 0;
    long other_quartic = 0;
    long total() const {
        return rational + real_quadratic + imag_quadratic + cubic +
               totally_real_quartic + other_quartic;
    }
    bool operator==(const Census& o) const = default;
    std::string str() const;
};

struct ClassifyResult {
    Family family = Family::P;
    int max_degree = 0;
    int digits = 0;
    // Orbits sorted by (|D|, minimal polynomial); points inside each orbit
    // by decreasing Re t.
    std::vector<Orbit> orbits;
    std::vector<ClassifyFailure> failures;
    // Points certified to have degree above max_degree (dropped).
    long degree_exceeded = 0;

    Census census() const;
    // Degree-1 values, sorted.
    std::vector<mpq_class> rational_values() const;
};

// Classify the CM values of t with degree <= max_degree (<= 4 under the
// default discriminant bound).  Scans discriminants -3 >= D >= -disc_bound
// with h(D) <= max_degree, walks the Gamma0-domain points of each, evaluates
// t there and recognizes it as an algebraic number.  Recognition runs at
// `digits` working digits and every candidate is re-verified against t
// recomputed at 2*digits; unresolved points are retried once at doubled
// precision before being reported in failures.  Values t in {0,16} (family P)
// or {0,27} (family Q) are degenerate fibers and are dropped.
ClassifyResult classify(Family fam, int max_degree, int digits,
                        long disc_bound = 1555);

// JSON-lines export, one object per point, sorted by (|D|, form):
// {"family":..,"D":..,"cm":[a,b,c],"minpoly":[..],"embedding":"re,im","degree":..}
std::string classify_jsonl(const ClassifyResult& r);

} // namespace mdet
