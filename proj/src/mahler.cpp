#include "mdet/mahler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "mdet/errors.hpp"
#include "mdet/modular.hpp"
#include "mdet/quadrature.hpp"

namespace mdet {

namespace {

// Both families reduce on |x| = 1 to a monic quadratic y^2 + A y + B with
// |B| = 1, so the two roots have reciprocal moduli and Jensen gives the
// Mahler measure as a single circle integral of log-moduli of roots.
//
//   slog(theta) = log|y_+(e^{i theta})|  (the plus branch for Q, the
//                 larger root for P, where only |slog| is ever used)
//   disc(theta) = the quantity under the square root; its crossings of
//                 the negative real axis are where the principal branch
//                 swaps roots, leaving |y_+| continuous but kinked.
struct CurveEval {
    std::function<BigReal(const BigReal&)> slog;
    std::function<BigComplex(const BigReal&)> disc;
    // Angles of near-circle double roots of the y-discriminant (where the
    // integrand loses analyticity just off the path); panels split there.
    std::vector<BigReal> pinch;
};

// Durand-Kerner roots of a monic polynomial given by its lower
// coefficients c[0..d-1] (ascending); fine for the pinch cubics here.
std::vector<BigComplex> dk_roots(const std::vector<BigComplex>& c) {
    int d = (int)c.size();
    int wd = c[0].digits();
    std::vector<BigComplex> z(d);
    BigComplex g = BigComplex{BigReal::parse("0.4", wd), BigReal::parse("0.9", wd)};
    z[0] = g;
    for (int i = 1; i < d; ++i) z[i] = z[i - 1] * g;
    auto eval = [&](const BigComplex& x) {
        BigComplex v = BigComplex::of(1, 0, wd);
        for (int i = d - 1; i >= 0; --i) v = v * x + c[i];
        return v;
    };
    for (int it = 0; it < 120; ++it) {
        for (int i = 0; i < d; ++i) {
            BigComplex den = BigComplex::of(1, 0, wd);
            for (int j = 0; j < d; ++j)
                if (j != i) den *= z[i] - z[j];
            if (den.is_zero()) den = BigComplex::of(1, 0, wd);
            z[i] -= eval(z[i]) / den;
        }
    }
    return z;
}

// Fold the arguments of roots lying near the unit circle into [0, 2pi).
std::vector<BigReal> pinch_angles(const std::vector<BigComplex>& roots, int wd) {
    BigReal two_pi = BigReal::pi(wd) * 2L;
    std::vector<BigReal> out;
    for (const BigComplex& r : roots) {
        if (r.is_zero()) continue;
        BigReal d = abs(abs(r) - 1L);
        if (!(d < BigReal::parse("0.35", wd))) continue;
        BigReal th = arg(r);
        if (th.sign() < 0) th += two_pi;
        out.push_back(th);
    }
    return out;
}

CurveEval p_eval(const BigComplex& t) {
    BigComplex rt = sqrt(t);
    auto disc = [rt](const BigReal& th) -> BigComplex {
        BigComplex a = rt + cos(th) * 2L;
        return a * a - 4L;
    };
    auto slog = [rt](const BigReal& th) -> BigReal {
        BigComplex a = rt + cos(th) * 2L;
        BigComplex sd = sqrt(a * a - 4L);
        // add in phase so the large root never cancels
        BigReal dot = a.re * sd.re + a.im * sd.im;
        BigComplex y = dot.sign() >= 0 ? a + sd : a - sd;
        return log(abs(y) / 2L);
    };
    // double roots of y: A = +-2, i.e. x^2 + (sqrt(t) -+ 2)x + 1 = 0
    std::vector<BigComplex> roots;
    for (long sg : {2L, -2L}) {
        BigComplex b = rt - sg;
        BigComplex sq = sqrt(b * b - 4L);
        roots.push_back((sq - b) / 2L);
        roots.push_back((b + sq) / (-2L));
    }
    return {slog, disc, pinch_angles(roots, rt.digits())};
}

CurveEval q_eval(const BigComplex& k) {
    auto disc = [k](const BigReal& th) -> BigComplex {
        BigComplex x = BigComplex{cos(th), sin(th)};
        BigComplex xk = x - k;
        BigComplex w = x * xk * xk;
        int d = w.digits();
        if (w.is_zero()) return BigComplex::of(1, 0, d) / 4L;
        return BigComplex::of(1, 0, d) / 4L - BigComplex::of(1, 0, d) / w;
    };
    auto slog = [k](const BigReal& th) -> BigReal {
        BigComplex x = BigComplex{cos(th), sin(th)};
        BigComplex xk = x - k;
        BigComplex w = x * xk * xk;
        int d = w.digits();
        if (w.is_zero()) return log(abs(k)) / 2L; // y_+ -> -i sqrt(k) x
        BigComplex sd = sqrt(BigComplex::of(1, 0, d) / 4L - BigComplex::of(1, 0, d) / w);
        BigComplex br = sd + BigReal::of(1L, d) / 2L;
        return log(abs(xk) * abs(br)); // |x^2 - kx| = |x - k| on |x| = 1
    };
    // double roots of y: x(x - k)^2 = 4
    int d = k.digits();
    std::vector<BigComplex> cubic = {BigComplex::of(-4, 0, d), k * k, k * (-2L)};
    return {slog, disc, pinch_angles(dk_roots(cubic), d)};
}

// Angles in (lo, hi) where the integrand needs a panel boundary: edges of
// arcs where |y_+| = 1 identically (curve on the torus), sign changes of
// slog, and branch corners (disc crossing the negative real axis).
std::vector<BigReal> arc_splits(const CurveEval& ev, const BigReal& lo,
                                const BigReal& hi, int prec) {
    int wp = prec + 12;
    const int n = 96;
    BigReal eps_flat = pow10(-(prec / 2 + 8), wp);
    BigReal len = hi - lo;

    std::vector<BigReal> th(n + 1), s(n + 1);
    std::vector<BigComplex> d(n + 1);
    std::vector<char> flat(n + 1);
    for (int i = 0; i <= n; ++i) {
        th[i] = lo + len * i / n;
        s[i] = ev.slog(th[i]);
        d[i] = ev.disc(th[i]);
        flat[i] = abs(s[i]) < eps_flat;
    }
    BigReal dmax = BigReal::of(0L, wp);
    for (int i = 0; i <= n; ++i) dmax = std::max(dmax, abs(d[i]));
    BigReal noise = dmax * pow10(-(wp - 8), wp) + pow10(-2 * wp, wp);

    long iters = (long)std::ceil((wp + 6) * 3.3220) + 8;
    std::vector<BigReal> splits;
    for (const BigReal& c : ev.pinch)
        if (c > lo && c < hi) splits.push_back(c);

    auto bisect = [&](const std::function<bool(const BigReal&)>& pred,
                      BigReal a, BigReal b, bool pa) {
        for (long it = 0; it < iters; ++it) {
            BigReal mid = (a + b) / 2L;
            if (pred(mid) == pa) a = mid;
            else b = mid;
        }
        return (a + b) / 2L;
    };

    for (int i = 0; i < n; ++i) {
        if (flat[i] != flat[i + 1]) {
            splits.push_back(bisect(
                [&](const BigReal& x) { return abs(ev.slog(x)) >= eps_flat; },
                th[i], th[i + 1], !flat[i]));
        }
        if (!flat[i] && !flat[i + 1] && s[i].sign() * s[i + 1].sign() < 0) {
            splits.push_back(bisect(
                [&](const BigReal& x) { return ev.slog(x).sign() == s[i].sign(); },
                th[i], th[i + 1], true));
        }
        if (abs(d[i].im) > noise && abs(d[i + 1].im) > noise &&
            d[i].im.sign() * d[i + 1].im.sign() < 0) {
            BigReal c = bisect(
                [&](const BigReal& x) { return ev.disc(x).im.sign() == d[i].im.sign(); },
                th[i], th[i + 1], true);
            if (ev.disc(c).re.sign() < 0) splits.push_back(c);
        }
    }

    std::sort(splits.begin(), splits.end());
    std::vector<BigReal> out;
    BigReal sep = len * pow10(-(wp - 6), wp);
    for (const BigReal& c : splits) {
        if (c - lo < sep || hi - c < sep) continue;
        if (!out.empty() && c - out.back() < sep) continue;
        out.push_back(c);
    }
    return out;
}

// Integral of slog (or |slog|) over [lo, hi], panels split at the angles
// above.  Panels where the curve lies on the torus contribute exactly 0
// and are skipped.
BigReal integrate_arc(const CurveEval& ev, const BigReal& lo, const BigReal& hi,
                      bool absolute, int prec) {
    int wp = prec + 12;
    BigReal eps_flat = pow10(-(prec / 2 + 8), wp);
    std::vector<BigReal> bounds{lo};
    for (BigReal& c : arc_splits(ev, lo, hi, prec)) bounds.push_back(c);
    bounds.push_back(hi);

    auto g = [&](const BigReal& x) {
        BigReal v = ev.slog(x);
        return absolute ? abs(v) : v;
    };

    std::function<BigReal(const BigReal&, const BigReal&, int)> panel =
        [&](const BigReal& a, const BigReal& b, int depth) -> BigReal {
        try {
            return tanh_sinh_integrate(g, a, b, prec + 6);
        } catch (const precision_error&) {
            if (depth >= 6) throw;
            BigReal mid = (a + b) / 2L;
            return panel(a, mid, depth + 1) + panel(mid, b, depth + 1);
        }
    };

    BigReal total = BigReal::of(0L, wp);
    for (size_t i = 0; i + 1 < bounds.size(); ++i) {
        const BigReal& a = bounds[i];
        const BigReal& b = bounds[i + 1];
        bool skip = true;
        for (long j = 1; j <= 3 && skip; ++j)
            skip = abs(ev.slog(a + (b - a) * j / 4L)) < eps_flat;
        if (skip) continue;
        total += panel(a, b, 0);
    }
    return total;
}

} // namespace

bool in_deltoid(const BigComplex& k) {
    BigReal x = k.re, y = k.im;
    BigReal r2 = x * x + y * y;
    BigReal p = r2 * r2 - 8L * (x * x * x) + 24L * (x * y * y) + 18L * r2 - 27L;
    return p.sign() < 0;
}

BigReal mu(const BigComplex& t, int prec) {
    int cp = prec + 40;
    CurveEval ev = p_eval(t.with_digits(cp));
    BigReal pi = BigReal::pi(cp);
    BigReal total = integrate_arc(ev, BigReal::of(0L, cp), pi, true, prec);
    return (total / pi).with_digits(prec);
}

BigReal n_modified(const BigReal& t, int prec) {
    if (!(t > -1 && t < 27) || t.is_zero())
        throw domain_error("n_modified: requires real t in (-1, 27), t != 0");
    int cp = prec + 40;
    BigReal k = cbrt(t.with_digits(cp));
    BigReal c = acos((k - 1L) / 2L);
    CurveEval ev = q_eval(BigComplex(k));
    BigReal pi = BigReal::pi(cp);
    BigReal i_part = integrate_arc(ev, BigReal::of(0L, cp), c, false, prec) / pi;
    BigReal j_part = integrate_arc(ev, c, pi, false, prec) / pi;
    return (i_part - 2L * j_part).with_digits(prec);
}

BigReal n_classical(const BigComplex& t, int prec) {
    int cp = prec + 40;
    BigReal pi = BigReal::pi(cp);
    if (t.im.is_zero()) {
        BigReal k = cbrt(t.re.with_digits(cp));
        if (k > -1 && k < 3)
            throw domain_error("n_classical: cube root of t lies inside the deltoid; "
                               "use the modified branch");
        CurveEval ev = q_eval(BigComplex(k));
        BigReal total = integrate_arc(ev, BigReal::of(0L, cp), pi, true, prec);
        return (total / pi).with_digits(prec);
    }
    BigComplex k = cbrt(t.with_digits(cp));
    if (in_deltoid(k))
        throw domain_error("n_classical: cube root of t lies inside the deltoid");
    CurveEval ev = q_eval(k);
    BigReal two_pi = pi * 2L;
    BigReal total = integrate_arc(ev, BigReal::of(0L, cp), two_pi, true, prec);
    return (total / two_pi).with_digits(prec);
}

BigReal nu(const BigComplex& t, int prec, Branch branch) {
    bool real = t.im.is_zero();
    bool in_band = real && t.re > -1 && t.re < 27;
    switch (branch) {
        case Branch::modified:
            if (!real)
                throw domain_error("nu: modified branch requires real t in (-1, 27)");
            return n_modified(t.re, prec);
        case Branch::classical:
            if (in_band)
                throw domain_error("nu: classical branch undefined for real t in "
                                   "(-1, 27); the curve meets the torus");
            return n_classical(t, prec);
        case Branch::automatic:
        default:
            if (in_band) {
                if (t.re.is_zero()) throw domain_error("nu: t = 0 is degenerate");
                return n_modified(t.re, prec);
            }
            return n_classical(t, prec);
    }
}

BigReal mahler(const MahlerRequest& req, int prec) {
    if (req.family == Family::P) return mu(req.t, prec);
    return nu(req.t, prec, req.branch);
}

BigReal ek_sum(const EKParams& params, int prec) {
    if (!(params.tau0.im > 0))
        throw domain_error("ek_sum: Im tau0 must be positive");
    int wp = prec + 15;
    int f = family_level(params.family);
    BigReal x0 = params.tau0.re.with_digits(wp);
    BigReal y0 = params.tau0.im.with_digits(wp);
    BigReal pi = BigReal::pi(wp);
    BigReal pi2 = pi * pi;

    // m = 0 line: 2 L(chi_{-4}, 3) = pi^3/16, 2 L(chi_{-3}, 3) = 8 pi^3/(81 sqrt 3)
    BigReal total = params.family == Family::P
                        ? pi2 * pi / 16L
                        : 8L * (pi2 * pi) / (81L * sqrt(BigReal::of(3L, wp)));

    // Each m-line, folded over +-m and split by n mod f, is a lattice sum
    //   sum_k (u + k) / ((u + k)^2 + v^2)^2 = -(pi^2/(2v)) Im csc^2(pi(u + i v))
    // at u = m x0 + j/f, v = m y0, so the tail decays like e^{-2 pi m y0}.
    long mmax = (long)std::ceil((prec + 12) * 2.302585092994046 /
                                (2 * 3.141592653589793 * y0.to_double())) + 3;
    long f3 = (long)f * f * f;
    int jneg = f == 4 ? 3 : 2;
    for (long m = 1; m <= mmax; ++m) {
        BigReal v = y0 * m;
        BigReal vterm = BigReal::of(0L, wp);
        for (int j : {1, jneg}) {
            BigReal u = x0 * m + BigReal::of((long)j, wp) / f;
            BigComplex sz = sin(BigComplex{pi * u, pi * v});
            if (sz.is_zero())
                throw domain_error("ek_sum: cosecant pole on a summation line");
            BigComplex csc2 = BigComplex::of(1, 0, wp) / (sz * sz);
            BigReal term = -(pi2 / (v * 2L)) * csc2.im;
            vterm += j == 1 ? term : -term;
        }
        total += vterm * 2L / f3;
    }
    return total.with_digits(prec);
}

BigReal mu_via_ek(const QForm& tau0, int prec) {
    if (!in_gamma0_domain(tau0, 4))
        throw domain_error("mu_via_ek: form is not in the Gamma0(4) domain");
    int wp = prec + 15;
    BigComplex z = embed(tau0, wp);
    BigReal s = ek_sum({Family::P, z}, prec + 10);
    BigReal pi = BigReal::pi(wp);
    return (16L * z.im / (pi * pi) * s).with_digits(prec);
}

BigReal nu_via_ek(const QForm& tau0, int prec) {
    if (!in_gamma0_domain(tau0, 3))
        throw domain_error("nu_via_ek: form is not in the Gamma0(3) domain");
    int wp = prec + 15;
    BigComplex z = embed(tau0, wp);
    BigComplex t = t_Q(z);
    BigReal s = ek_sum({Family::Q, z}, prec + 10);
    BigReal pi = BigReal::pi(wp);
    BigReal num = 27L * sqrt(BigReal::of(3L, wp)) * z.im * s;
    BigReal tol = pow10(-prec, wp) * (abs(t) + 1L);
    bool treal = abs(t.im) < tol;
    if (treal && t.re > -1 && t.re < 27) {
        if (abs(t.re) < tol)
            throw domain_error("nu_via_ek: t_Q(tau0) = 0 is degenerate");
        long den = 1 - 3 * t.re.sign();
        return (num / (den * (pi * pi))).with_digits(prec);
    }
    BigComplex k = treal ? BigComplex(cbrt(t.re)) : cbrt(t);
    if (in_deltoid(k))
        throw domain_error("nu_via_ek: cube root of t_Q(tau0) lies inside the deltoid");
    return (num / (4L * (pi * pi))).with_digits(prec);
}

} // namespace mdet
