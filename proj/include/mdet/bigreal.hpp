#pragma once
#include <mpfr.h>
#include <gmpxx.h>
#include <string>
#include <utility>
#include <algorithm>
#include <cmath>
#include "mdet/errors.hpp"

namespace mdet {

// Arbitrary-precision real number backed by MPFR.
//
// Every value carries a working precision in decimal digits (>= 30).
// Binary precision is allocated with a fixed 10-digit guard on top of the
// requested decimal digits.  Arithmetic between two values produces a result
// carrying the minimum of the operand precisions.
class BigReal {
  public:
    static constexpr int min_digits = 30;

    static mpfr_prec_t bits_for(int digits) {
        digits = std::max(digits, min_digits);
        return static_cast<mpfr_prec_t>(std::ceil((digits + 10) * 3.3219280948873626)) + 4;
    }

    BigReal() : BigReal(min_digits) {}

    explicit BigReal(int digits) : digits_(std::max(digits, min_digits)) {
        mpfr_init2(v_, bits_for(digits_));
        mpfr_set_nan(v_);
    }

    BigReal(const BigReal& o) : digits_(o.digits_) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }

    BigReal(BigReal&& o) noexcept : digits_(o.digits_) {
        mpfr_init2(v_, 32);
        mpfr_swap(v_, o.v_);
    }

    BigReal& operator=(const BigReal& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
            digits_ = o.digits_;
        }
        return *this;
    }

    BigReal& operator=(BigReal&& o) noexcept {
        if (this != &o) {
            mpfr_swap(v_, o.v_);
            digits_ = o.digits_;
        }
        return *this;
    }

    ~BigReal() { mpfr_clear(v_); }

    static BigReal of(long n, int digits) {
        BigReal r(digits);
        mpfr_set_si(r.v_, n, MPFR_RNDN);
        return r;
    }

    static BigReal of(double d, int digits) {
        BigReal r(digits);
        mpfr_set_d(r.v_, d, MPFR_RNDN);
        return r;
    }

    static BigReal of(const mpz_class& z, int digits) {
        BigReal r(digits);
        mpfr_set_z(r.v_, z.get_mpz_t(), MPFR_RNDN);
        return r;
    }

    static BigReal of(const mpq_class& q, int digits) {
        BigReal r(digits);
        mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
        return r;
    }

    // Parses a decimal string ("-1.25e-3", "8", "27.5").
    static BigReal parse(const std::string& s, int digits) {
        BigReal r(digits);
        if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
            throw data_error("BigReal: cannot parse '" + s + "'");
        return r;
    }

    static BigReal pi(int digits) {
        BigReal r(digits);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }

    static BigReal euler_gamma(int digits) {
        BigReal r(digits);
        mpfr_const_euler(r.v_, MPFR_RNDN);
        return r;
    }

    static BigReal nan(int digits) { return BigReal(digits); }

    int digits() const { return digits_; }

    // Copy rounded to a (possibly different) working precision.
    BigReal with_digits(int digits) const {
        BigReal r(digits);
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    bool is_inf() const { return mpfr_inf_p(v_) != 0; }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

    // Nearest integer as an exact mpz.
    mpz_class round_z() const {
        mpfr_t t;
        mpfr_init2(t, mpfr_get_prec(v_));
        mpfr_round(t, v_);
        mpz_class z;
        mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDZ);
        mpfr_clear(t);
        return z;
    }

    mpz_class floor_z() const {
        mpfr_t t;
        mpfr_init2(t, mpfr_get_prec(v_));
        mpfr_floor(t, v_);
        mpz_class z;
        mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDZ);
        mpfr_clear(t);
        return z;
    }

    // Decimal string with n significant digits (default: working precision).
    std::string str(int n = -1) const {
        if (n < 0) n = digits_;
        if (is_nan()) return "nan";
        if (is_inf()) return sign() > 0 ? "inf" : "-inf";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%%.%dRe", n - 1);
        int need = mpfr_snprintf(nullptr, 0, buf, v_);
        std::string out(need + 1, '\0');
        mpfr_snprintf(out.data(), need + 1, buf, v_);
        out.resize(need);
        return out;
    }

    friend BigReal operator+(const BigReal& a, const BigReal& b) {
        BigReal r(std::min(a.digits_, b.digits_));
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator-(const BigReal& a, const BigReal& b) {
        BigReal r(std::min(a.digits_, b.digits_));
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator*(const BigReal& a, const BigReal& b) {
        BigReal r(std::min(a.digits_, b.digits_));
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator/(const BigReal& a, const BigReal& b) {
        BigReal r(std::min(a.digits_, b.digits_));
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }

    friend BigReal operator+(const BigReal& a, long b) {
        BigReal r(a.digits_);
        mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend BigReal operator-(const BigReal& a, long b) {
        BigReal r(a.digits_);
        mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend BigReal operator-(long a, const BigReal& b) {
        BigReal r(b.digits_);
        mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator*(const BigReal& a, long b) {
        BigReal r(a.digits_);
        mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend BigReal operator*(long a, const BigReal& b) { return b * a; }
    friend BigReal operator/(const BigReal& a, long b) {
        BigReal r(a.digits_);
        mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend BigReal operator/(long a, const BigReal& b) {
        BigReal r(b.digits_);
        mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator+(long a, const BigReal& b) { return b + a; }

    BigReal operator-() const {
        BigReal r(digits_);
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }

    BigReal& operator+=(const BigReal& o) { return *this = *this + o; }
    BigReal& operator-=(const BigReal& o) { return *this = *this - o; }
    BigReal& operator*=(const BigReal& o) { return *this = *this * o; }
    BigReal& operator/=(const BigReal& o) { return *this = *this / o; }

    friend bool operator<(const BigReal& a, const BigReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const BigReal& a, const BigReal& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const BigReal& a, const BigReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const BigReal& a, const BigReal& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
    friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator!=(const BigReal& a, const BigReal& b) { return !(a == b); }

    friend bool operator<(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) < 0; }
    friend bool operator>(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) > 0; }
    friend bool operator<=(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) <= 0; }
    friend bool operator>=(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) >= 0; }
    friend bool operator==(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }

  private:
    mpfr_t v_;
    int digits_;
};

#define MDET_UNARY(name, fn)                       \
    inline BigReal name(const BigReal& a) {        \
        BigReal r(a.digits());                     \
        fn(r.raw(), a.raw(), MPFR_RNDN);           \
        return r;                                  \
    }

MDET_UNARY(abs, mpfr_abs)
MDET_UNARY(sqrt, mpfr_sqrt)
MDET_UNARY(cbrt, mpfr_cbrt)
MDET_UNARY(exp, mpfr_exp)
MDET_UNARY(expm1, mpfr_expm1)
MDET_UNARY(log, mpfr_log)
MDET_UNARY(log1p, mpfr_log1p)
MDET_UNARY(sin, mpfr_sin)
MDET_UNARY(cos, mpfr_cos)
MDET_UNARY(tan, mpfr_tan)
MDET_UNARY(acos, mpfr_acos)
MDET_UNARY(asin, mpfr_asin)
MDET_UNARY(atan, mpfr_atan)
MDET_UNARY(sinh, mpfr_sinh)
MDET_UNARY(cosh, mpfr_cosh)
MDET_UNARY(tanh, mpfr_tanh)
MDET_UNARY(digamma, mpfr_digamma)
MDET_UNARY(gamma_fn, mpfr_gamma)

#undef MDET_UNARY

inline BigReal atan2(const BigReal& y, const BigReal& x) {
    BigReal r(std::min(y.digits(), x.digits()));
    mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
    return r;
}

inline BigReal hypot(const BigReal& x, const BigReal& y) {
    BigReal r(std::min(y.digits(), x.digits()));
    mpfr_hypot(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
    return r;
}

inline BigReal pow(const BigReal& a, long e) {
    BigReal r(a.digits());
    mpfr_pow_si(r.raw(), a.raw(), e, MPFR_RNDN);
    return r;
}

inline BigReal pow(const BigReal& a, const BigReal& e) {
    BigReal r(std::min(a.digits(), e.digits()));
    mpfr_pow(r.raw(), a.raw(), e.raw(), MPFR_RNDN);
    return r;
}

// Upper incomplete gamma Gamma(s, x), s a (possibly nonpositive) integer or
// half-integer, x > 0.
inline BigReal upper_incomplete_gamma(const BigReal& s, const BigReal& x) {
    if (!(x > 0)) throw domain_error("upper_incomplete_gamma: x must be > 0");
    BigReal r(std::min(s.digits(), x.digits()));
    mpfr_gamma_inc(r.raw(), s.raw(), x.raw(), MPFR_RNDN);
    return r;
}

inline BigReal upper_incomplete_gamma(long s, const BigReal& x) {
    return upper_incomplete_gamma(BigReal::of(s, x.digits()), x);
}

// 10^k at the given working precision.
inline BigReal pow10(long k, int digits) {
    BigReal r = BigReal::of(10L, digits);
    return pow(r, k);
}

} // namespace mdet
