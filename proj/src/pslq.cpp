#include "mdet/pslq.hpp"
#include "mdet/errors.hpp"
#include <algorithm>
#include <cmath>

namespace mdet {

namespace {

mpz_class round_to_mpz(const BigReal& x) {
    return x.round_z();
}

// |sum c_j x_j| small relative to the scale of the terms, at full precision
bool verify_relation(const std::vector<BigReal>& x, const std::vector<mpz_class>& c, int digits) {
    BigReal sum = BigReal::of(0L, digits);
    BigReal scale = BigReal::of(0L, digits);
    for (size_t j = 0; j < x.size(); ++j) {
        BigReal term = BigReal::of(c[j], digits) * x[j];
        sum = sum + term;
        scale = scale + abs(term);
    }
    if (scale.is_zero()) return false;
    return abs(sum) < scale * pow10(-(digits - 12), digits);
}

} // namespace

PSLQResult pslq(const std::vector<BigReal>& x, int digits, int max_coeff_bits) {
    const int n = (int)x.size();
    if (n < 2) throw domain_error("pslq: need at least two inputs");
    for (const BigReal& v : x)
        if (v.is_zero() || v.is_nan()) throw domain_error("pslq: inputs must be nonzero finite");

    const int wd = digits;
    BigReal gamma = sqrt(BigReal::of(4L, wd) / BigReal::of(3L, wd));
    BigReal tol_detect = pow10(-(digits * 4) / 5, wd);
    BigReal tol_noise = pow10(-(digits - 8), wd);
    BigReal coeff_cap = pow(BigReal::of(2L, wd), (long)max_coeff_bits);

    std::vector<BigReal> y(n, BigReal::of(0L, wd));
    std::vector<std::vector<BigReal>> H(n, std::vector<BigReal>(n - 1, BigReal::of(0L, wd)));
    std::vector<std::vector<mpz_class>> A(n, std::vector<mpz_class>(n, 0));
    std::vector<std::vector<mpz_class>> B(n, std::vector<mpz_class>(n, 0));
    for (int i = 0; i < n; ++i) A[i][i] = B[i][i] = 1;

    // partial norms s[k] = sqrt(sum_{j>=k} x_j^2), then y = x / s[0]
    std::vector<BigReal> s(n, BigReal::of(0L, wd));
    {
        BigReal acc = BigReal::of(0L, wd);
        for (int k = n - 1; k >= 0; --k) {
            acc = acc + x[k].with_digits(wd) * x[k].with_digits(wd);
            s[k] = sqrt(acc);
        }
        BigReal s0 = s[0];
        for (int k = 0; k < n; ++k) {
            y[k] = x[k].with_digits(wd) / s0;
            s[k] = s[k] / s0;
        }
    }
    for (int j = 0; j < n - 1; ++j) {
        H[j][j] = s[j + 1] / s[j];
        for (int i = j + 1; i < n; ++i) H[i][j] = -(y[i] * y[j]) / (s[j] * s[j + 1]);
    }

    auto reduce_row = [&](int i, int jmax) {
        for (int j = jmax; j >= 0; --j) {
            BigReal q = H[i][j] / H[j][j];
            mpz_class t = round_to_mpz(q);
            if (t == 0) continue;
            BigReal tb = BigReal::of(t, wd);
            y[j] = y[j] + tb * y[i];
            for (int k = 0; k <= j; ++k) H[i][k] = H[i][k] - tb * H[j][k];
            for (int k = 0; k < n; ++k) {
                A[i][k] -= t * A[j][k];
                B[k][j] += t * B[k][i];
            }
        }
    };

    for (int i = 1; i < n; ++i) reduce_row(i, i - 1);

    PSLQResult res;
    const long max_iter = 200000;
    for (long iter = 1; iter <= max_iter; ++iter) {
        res.iterations = iter;

        // pick the row maximizing gamma^i |H_ii|
        int m = 0;
        {
            BigReal best = BigReal::of(0L, wd), g = BigReal::of(1L, wd);
            for (int i = 0; i < n - 1; ++i) {
                g = g * gamma;
                BigReal v = g * abs(H[i][i]);
                if (v > best) { best = v; m = i; }
            }
        }

        std::swap(y[m], y[m + 1]);
        std::swap(A[m], A[m + 1]);
        std::swap(H[m], H[m + 1]);
        for (int k = 0; k < n; ++k) std::swap(B[k][m], B[k][m + 1]);

        if (m < n - 2) {
            BigReal t0 = hypot(H[m][m], H[m][m + 1]);
            if (t0.is_zero()) return res; // degenerate; undecided
            BigReal c = H[m][m] / t0, d = H[m][m + 1] / t0;
            for (int i = m; i < n; ++i) {
                BigReal u = H[i][m], v = H[i][m + 1];
                H[i][m] = c * u + d * v;
                H[i][m + 1] = c * v - d * u;
            }
        }

        for (int i = m + 1; i < n; ++i) reduce_row(i, std::min(i - 1, m + 1));

        // norm bound 1/max|H_ij| over the whole matrix, with a safety margin
        BigReal maxH = BigReal::of(0L, wd);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n - 1; ++j) {
                BigReal v = abs(H[i][j]);
                if (v > maxH) maxH = v;
            }
        if (!maxH.is_zero()) {
            double bound_bits = -std::log2(std::max(maxH.to_double(), 1e-300)) - 7;
            res.norm_bound_bits = std::max(res.norm_bound_bits, bound_bits);
            if (bound_bits > (double)max_coeff_bits + 1) {
                res.status = PSLQStatus::none_certified;
                return res;
            }
        }

        int imin = 0;
        for (int i = 1; i < n; ++i)
            if (abs(y[i]) < abs(y[imin])) imin = i;

        if (abs(y[imin]) < tol_detect) {
            std::vector<mpz_class> c(n);
            for (int j = 0; j < n; ++j) c[j] = B[j][imin];
            bool fits = true;
            for (const mpz_class& v : c)
                if (abs(BigReal::of(v, wd)) >= coeff_cap) fits = false;
            if (fits && verify_relation(x, c, digits)) {
                // normalize sign: first nonzero coefficient positive
                for (const mpz_class& v : c) {
                    if (v != 0) {
                        if (v < 0)
                            for (mpz_class& w : c) w = -w;
                        break;
                    }
                }
                res.status = PSLQStatus::found;
                res.coeffs = c;
                return res;
            }
            if (abs(y[imin]) < tol_noise) {
                res.status = fits ? PSLQStatus::precision_exhausted : PSLQStatus::none_certified;
                return res;
            }
        }
    }
    return res;
}

} // namespace mdet
