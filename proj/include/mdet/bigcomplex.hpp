#pragma once
#include "mdet/bigreal.hpp"

namespace mdet {

// Complex number as a pair of BigReal with a common working precision.
class BigComplex {
  public:
    BigReal re, im;

    BigComplex() : BigComplex(BigReal::min_digits) {}

    explicit BigComplex(int digits)
        : re(BigReal::of(0L, digits)), im(BigReal::of(0L, digits)) {}

    BigComplex(BigReal r, BigReal i) : re(std::move(r)), im(std::move(i)) {
        int d = std::min(re.digits(), im.digits());
        if (re.digits() != d) re = re.with_digits(d);
        if (im.digits() != d) im = im.with_digits(d);
    }

    explicit BigComplex(const BigReal& r) : re(r), im(BigReal::of(0L, r.digits())) {}

    static BigComplex of(long r, long i, int digits) {
        return {BigReal::of(r, digits), BigReal::of(i, digits)};
    }

    static BigComplex i_unit(int digits) { return of(0, 1, digits); }

    int digits() const { return re.digits(); }

    BigComplex with_digits(int d) const { return {re.with_digits(d), im.with_digits(d)}; }

    bool is_nan() const { return re.is_nan() || im.is_nan(); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    std::string str(int n = -1) const {
        return re.str(n) + (im.sign() < 0 ? " - " : " + ") + mdet::abs(im).str(n) + "i";
    }

    friend BigComplex operator+(const BigComplex& a, const BigComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend BigComplex operator-(const BigComplex& a, const BigComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
        BigReal d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }

    friend BigComplex operator+(const BigComplex& a, const BigReal& b) { return {a.re + b, a.im}; }
    friend BigComplex operator-(const BigComplex& a, const BigReal& b) { return {a.re - b, a.im}; }
    friend BigComplex operator*(const BigComplex& a, const BigReal& b) { return {a.re * b, a.im * b}; }
    friend BigComplex operator/(const BigComplex& a, const BigReal& b) { return {a.re / b, a.im / b}; }
    friend BigComplex operator+(const BigReal& a, const BigComplex& b) { return b + a; }
    friend BigComplex operator-(const BigReal& a, const BigComplex& b) { return {a - b.re, -b.im}; }
    friend BigComplex operator*(const BigReal& a, const BigComplex& b) { return b * a; }
    friend BigComplex operator*(long a, const BigComplex& b) { return {b.re * a, b.im * a}; }
    friend BigComplex operator*(const BigComplex& b, long a) { return {b.re * a, b.im * a}; }
    friend BigComplex operator/(const BigComplex& a, long b) { return {a.re / b, a.im / b}; }
    friend BigComplex operator+(const BigComplex& a, long b) { return {a.re + b, a.im}; }
    friend BigComplex operator-(const BigComplex& a, long b) { return {a.re - b, a.im}; }
    friend BigComplex operator-(long a, const BigComplex& b) { return {a - b.re, -b.im}; }

    BigComplex operator-() const { return {-re, -im}; }

    BigComplex& operator+=(const BigComplex& o) { return *this = *this + o; }
    BigComplex& operator-=(const BigComplex& o) { return *this = *this - o; }
    BigComplex& operator*=(const BigComplex& o) { return *this = *this * o; }
    BigComplex& operator/=(const BigComplex& o) { return *this = *this / o; }
};

inline BigComplex conj(const BigComplex& z) { return {z.re, -z.im}; }

inline BigReal abs(const BigComplex& z) { return hypot(z.re, z.im); }

inline BigReal norm(const BigComplex& z) { return z.re * z.re + z.im * z.im; }

inline BigReal arg(const BigComplex& z) { return atan2(z.im, z.re); }

inline BigComplex exp(const BigComplex& z) {
    BigReal m = exp(z.re);
    return {m * cos(z.im), m * sin(z.im)};
}

inline BigComplex log(const BigComplex& z) { return {log(abs(z)), arg(z)}; }

// Principal square root (branch cut along the negative real axis).
inline BigComplex sqrt(const BigComplex& z) {
    int d = z.digits();
    if (z.is_zero()) return BigComplex(d);
    BigReal m = abs(z);
    BigReal t = sqrt((m + abs(z.re)) / 2L);
    if (z.re.sign() >= 0) return {t, z.im / (t * 2L)};
    BigReal u = abs(z.im) / (t * 2L);
    if (z.im.sign() >= 0) return {u, t};
    return {u, -t};
}

// Principal cube root: argument in (-pi/3, pi/3].
inline BigComplex cbrt(const BigComplex& z) {
    int d = z.digits();
    if (z.is_zero()) return BigComplex(d);
    if (z.im.is_zero() && z.re.sign() > 0) return BigComplex(cbrt(z.re));
    BigReal r = cbrt(abs(z));
    BigReal th = arg(z) / 3L;
    return {r * cos(th), r * sin(th)};
}

inline BigComplex sin(const BigComplex& z) {
    return {sin(z.re) * cosh(z.im), cos(z.re) * sinh(z.im)};
}

inline BigComplex cos(const BigComplex& z) {
    return {cos(z.re) * cosh(z.im), -(sin(z.re) * sinh(z.im))};
}

inline BigComplex pow(const BigComplex& z, long e) {
    int d = z.digits();
    if (e == 0) return BigComplex::of(1, 0, d);
    BigComplex base = e < 0 ? BigComplex::of(1, 0, d) / z : z;
    unsigned long n = e < 0 ? -(unsigned long)e : (unsigned long)e;
    BigComplex acc = BigComplex::of(1, 0, d);
    while (n) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

// exp(2*pi*i*z), the building block of q-expansions.
inline BigComplex exp_2pii(const BigComplex& z, const BigReal& pi) {
    BigReal two_pi = pi * 2L;
    BigReal m = exp(-(two_pi * z.im));
    BigReal ph = two_pi * z.re;
    return {m * cos(ph), m * sin(ph)};
}

} // namespace mdet
