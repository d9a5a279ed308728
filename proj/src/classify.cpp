#include "mdet/classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "mdet/algebraic.hpp"
#include "mdet/errors.hpp"
#include "mdet/modular.hpp"
#include "mdet/pslq.hpp"

namespace mdet {

int family_level(Family fam) { return fam == Family::P ? 4 : 3; }

std::string family_name(Family fam) { return fam == Family::P ? "P" : "Q"; }

BigComplex family_t(Family fam, const BigComplex& tau) {
    return fam == Family::P ? t_P(tau) : t_Q(tau);
}

std::string orbit_kind_name(OrbitKind k) {
    switch (k) {
        case OrbitKind::rational: return "rational";
        case OrbitKind::real_quadratic: return "real quadratic";
        case OrbitKind::imag_quadratic: return "imaginary quadratic";
        case OrbitKind::cubic: return "cubic";
        case OrbitKind::totally_real_quartic: return "totally real quartic";
        case OrbitKind::other_quartic: return "non-totally-real quartic";
    }
    return "?";
}

std::string Census::str() const {
    std::ostringstream os;
    os << rational << " rational / " << real_quadratic << " real quadratic / "
       << imag_quadratic << " imaginary quadratic / " << cubic << " cubic / "
       << totally_real_quartic << " totally real quartic / "
       << other_quartic << " non-totally-real quartic";
    return os.str();
}

namespace {

void make_primitive(std::vector<mpz_class>& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    if (p.empty()) return;
    mpz_class g = 0;
    for (const mpz_class& c : p) g = gcd(g, c);
    if (g > 1)
        for (mpz_class& c : p) c /= g;
    if (p.back() < 0)
        for (mpz_class& c : p) c = -c;
}

// Best rational p/q with q <= den_bound matching x to nearly full precision.
bool to_rational(const BigReal& x, const mpz_class& den_bound, mpq_class& out) {
    int d = x.digits();
    BigReal tol = (abs(x) + BigReal::of(1L, d)) * pow10(-(d - 12), d);
    BigReal small = pow10(-(d - 8), d);
    BigReal r = x;
    mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int it = 0; it < 500; ++it) {
        mpz_class a = r.floor_z();
        mpz_class p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > den_bound) return false;
        BigReal approx = BigReal::of(p2, d) / BigReal::of(q2, d);
        if (abs(x - approx) < tol) {
            out = mpq_class(p2, q2);
            out.canonicalize();
            return true;
        }
        BigReal frac = r - BigReal::of(a, d);
        if (frac < small) return false;
        r = BigReal::of(1L, d) / frac;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    }
    return false;
}

mpq_class eval_poly_q(const std::vector<mpz_class>& p, const mpq_class& x) {
    mpq_class acc = 0;
    for (size_t i = p.size(); i-- > 0;) acc = acc * x + mpq_class(p[i]);
    return acc;
}

std::vector<mpq_class> to_q(const std::vector<mpz_class>& p) {
    std::vector<mpq_class> r;
    r.reserve(p.size());
    for (const mpz_class& c : p) r.emplace_back(c);
    return r;
}

void trim_q(std::vector<mpq_class>& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

std::vector<mpz_class> primitive_z(const std::vector<mpq_class>& p) {
    mpz_class l = 1;
    for (const mpq_class& c : p) l = lcm(l, c.get_den());
    std::vector<mpz_class> r;
    r.reserve(p.size());
    for (const mpq_class& c : p) {
        mpq_class s = c * mpq_class(l);
        r.push_back(s.get_num());
    }
    make_primitive(r);
    return r;
}

// Euclidean division by a monic divisor over Q.
void divmod_monic_q(const std::vector<mpq_class>& p, const std::vector<mpq_class>& m,
                    std::vector<mpq_class>& quo, std::vector<mpq_class>& rem) {
    rem = p;
    int dm = (int)m.size() - 1;
    int dp = (int)rem.size() - 1;
    if (dp < dm) { quo.clear(); trim_q(rem); return; }
    quo.assign(dp - dm + 1, mpq_class(0));
    for (int k = dp - dm; k >= 0; --k) {
        mpq_class f = rem[k + dm];
        quo[k] = f;
        for (int j = 0; j <= dm; ++j) rem[k + j] -= f * m[j];
    }
    rem.resize(dm);
    trim_q(rem);
}

std::vector<mpq_class> make_monic_q(std::vector<mpq_class> p) {
    trim_q(p);
    if (p.empty()) return p;
    mpq_class l = p.back();
    for (mpq_class& c : p) c /= l;
    return p;
}

std::vector<mpq_class> poly_gcd_q(std::vector<mpq_class> a, std::vector<mpq_class> b) {
    trim_q(a); trim_q(b);
    while (!b.empty()) {
        std::vector<mpq_class> bm = make_monic_q(b), quo, rem;
        divmod_monic_q(a, bm, quo, rem);
        a = bm;
        b = rem;
    }
    return make_monic_q(a);
}

// Reduce an annihilating polynomial of t to the irreducible factor over Q
// that has t as a root: strip multiple factors, then rational roots, then
// (for quartics) rational quadratic factors.  Empty on breakdown.
std::vector<mpz_class> refine_factor(std::vector<mpz_class> poly, const BigComplex& t) {
    make_primitive(poly);
    if (poly.size() < 2) return {};

    {
        std::vector<mpq_class> g = poly_gcd_q(to_q(poly), to_q(poly_derivative(poly)));
        if (g.size() > 1) {
            std::vector<mpq_class> quo, rem;
            divmod_monic_q(to_q(poly), g, quo, rem);
            if (!rem.empty()) return {};
            poly = primitive_z(quo);
            if (poly.size() < 2) return {};
        }
    }

    int dr = std::min(t.digits(), std::max(140, t.digits() / 2));
    BigReal scale_t = abs(t) + BigReal::of(1L, dr);
    BigReal tol_t = scale_t * pow10(-(dr / 2), dr);

    bool changed = true;
    while (changed) {
        changed = false;
        if (poly.size() == 2) {
            make_primitive(poly);
            return poly;
        }
        std::vector<BigComplex> roots = poly_roots(poly, dr);
        BigReal tol_im = scale_t * pow10(-(dr / 2), dr);

        for (const BigComplex& r : roots) {
            if (!(abs(r.im) < tol_im)) continue;
            mpq_class cand;
            if (!to_rational(r.re, abs(poly.back()), cand)) continue;
            if (eval_poly_q(poly, cand) != 0) continue;
            BigReal num = BigReal::of(cand.get_num(), dr);
            BigReal den = BigReal::of(cand.get_den(), dr);
            BigComplex diff = t.with_digits(dr) - BigComplex(num / den, BigReal::of(0L, dr));
            if (abs(diff) < tol_t) {
                std::vector<mpz_class> lin = {-cand.get_num(), cand.get_den()};
                make_primitive(lin);
                return lin;
            }
            std::vector<mpq_class> m = {mpq_class(-cand), mpq_class(1)};
            std::vector<mpq_class> quo, rem;
            divmod_monic_q(to_q(poly), m, quo, rem);
            if (!rem.empty()) return {};
            poly = primitive_z(quo);
            if (poly.size() < 2) return {};
            changed = true;
            break;
        }
        if (changed) continue;

        if (poly.size() == 5) {
            for (int pick = 1; pick <= 3; ++pick) {
                int i = 0, j = pick;
                BigComplex s = roots[i] + roots[j];
                BigComplex pr = roots[i] * roots[j];
                if (!(abs(s.im) < tol_im) || !(abs(pr.im) < tol_im)) continue;
                mpq_class sq, pq;
                if (!to_rational(s.re, abs(poly.back()), sq)) continue;
                if (!to_rational(pr.re, abs(poly.back()), pq)) continue;
                std::vector<mpq_class> m = {pq, -sq, mpq_class(1)};
                std::vector<mpq_class> quo, rem;
                divmod_monic_q(to_q(poly), m, quo, rem);
                if (!rem.empty()) continue;
                std::vector<mpz_class> f1 = primitive_z(m);
                std::vector<mpz_class> f2 = primitive_z(quo);
                BigReal v1 = abs(eval_poly(f1, t.with_digits(dr)));
                BigReal v2 = abs(eval_poly(f2, t.with_digits(dr)));
                poly = (v1 < v2) ? f1 : f2;
                if (poly.size() < 2) return {};
                changed = true;
                break;
            }
        }
    }
    make_primitive(poly);
    return poly;
}

struct PointOutcome {
    enum class Kind { recognized, degree_exceeded, failed };
    Kind kind = Kind::failed;
    AlgebraicNumber value;
    std::string diag;
};

// Spurious numeric relations on a (d+1)-vector at p digits have height about
// 10^(0.8 p / d); the PSLQ precision keeps the certified coefficient cap
// safely below that floor, whatever the caller's output precision is.
constexpr int kCapBits = 100;

int recog_pslq_digits(int d) {
    return (int)std::ceil((kCapBits + 12) * (d + 1) * 0.37645) + 4;
}

PointOutcome attempt_recognize(Family fam, const QForm& f, int max_degree,
                               int prec, int boost) {
    int p1 = std::max(prec, recog_pslq_digits(max_degree)) + boost;
    int hv = p1 + prec + 20;
    BigComplex tau = embed(f, hv);
    BigComplex t_hi = family_t(fam, tau);
    BigComplex t_lo = t_hi.with_digits(p1);

    PointOutcome out;
    {
        // |t| outside [1/M, M] with M = (d+1) 2^(cap+4) rules out any
        // annihilator of degree <= d and height below the cap: the top
        // (resp. constant) term dominates the rest of the sum
        BigReal at = abs(t_lo);
        BigReal big = pow(BigReal::of(2L, p1), (long)(kCapBits + 4)) *
                      BigReal::of((long)(max_degree + 1), p1);
        if (at > big || at * big < BigReal::of(1L, p1)) {
            out.kind = PointOutcome::Kind::degree_exceeded;
            return out;
        }
    }

    // fixed projection directions; a true relation of t survives any of them
    static const double kAngles[2] = {0.7390784267039842, 2.1971599887362194};

    for (int ang = 0; ang < 2; ++ang) {
        BigReal th = BigReal::of(kAngles[ang], p1);
        BigComplex omega(cos(th), sin(th));
        std::vector<BigReal> v;
        BigComplex pw = BigComplex::of(1L, 0L, p1);
        bool degenerate = false;
        for (int k = 0; k <= max_degree; ++k) {
            BigReal re = (omega * pw).re;
            if (re.is_zero()) { degenerate = true; break; }
            v.push_back(re);
            if (k < max_degree) pw = pw * t_lo;
        }
        if (degenerate) continue;

        PSLQResult r = pslq(v, p1, kCapBits);
        if (r.status == PSLQStatus::none_certified) {
            out.kind = PointOutcome::Kind::degree_exceeded;
            return out;
        }
        if (r.status == PSLQStatus::precision_exhausted) {
            out.diag = "integer relation search undecided at " + std::to_string(p1) + " digits";
            continue;
        }

        std::vector<mpz_class> mp = refine_factor(r.coeffs, t_hi);
        if (mp.size() < 2) {
            out.diag = "candidate factor refinement failed";
            continue;
        }
        BigComplex val = eval_poly(mp, t_hi);
        BigComplex dval = eval_poly(poly_derivative(mp), t_hi);
        BigReal scale_t = abs(t_hi) + BigReal::of(1L, hv);
        if (!(abs(dval) > scale_t * pow10(-(hv / 2), hv))) {
            out.diag = "candidate has a near-critical root";
            continue;
        }
        // Newton distance from t (recomputed at higher precision) to the
        // nearest root of the candidate
        BigReal dist = abs(val) / abs(dval);
        if (dist < scale_t * pow10(-(p1 + 15), hv)) {
            out.kind = PointOutcome::Kind::recognized;
            out.value.minpoly = mp;
            out.value.approx = t_hi.with_digits(2 * prec);
            return out;
        }
        out.diag = "candidate failed the doubled-precision residual";
    }
    out.kind = PointOutcome::Kind::failed;
    return out;
}

PointOutcome recognize_point(Family fam, const QForm& f, int max_degree, int prec) {
    PointOutcome o = attempt_recognize(fam, f, max_degree, prec, 0);
    if (o.kind != PointOutcome::Kind::failed) return o;
    PointOutcome o2 = attempt_recognize(fam, f, max_degree, prec, 80);
    if (o2.kind == PointOutcome::Kind::failed && o2.diag.empty()) o2.diag = o.diag;
    return o2;
}

bool is_degenerate_value(Family fam, const std::vector<mpz_class>& mp) {
    if (mp.size() != 2 || mp[1] != 1) return false;
    if (mp[0] == 0) return true;                       // t = 0
    if (fam == Family::P && mp[0] == -16) return true; // t = 16
    if (fam == Family::Q && mp[0] == -27) return true; // t = 27
    return false;
}

OrbitKind kind_of(const std::vector<mpz_class>& mp) {
    int d = (int)mp.size() - 1;
    if (d == 1) return OrbitKind::rational;
    if (d == 2) {
        mpz_class disc = mp[1] * mp[1] - 4 * mp[2] * mp[0];
        return disc > 0 ? OrbitKind::real_quadratic : OrbitKind::imag_quadratic;
    }
    if (d == 3) return OrbitKind::cubic;
    return count_real_roots(mp) == 4 ? OrbitKind::totally_real_quartic
                                     : OrbitKind::other_quartic;
}

} // namespace

ClassifyResult classify(Family fam, int max_degree, int digits, long disc_bound) {
    if (max_degree < 1) throw domain_error("classify: degree bound must be at least 1");
    long bound = disc_bound;
    if (bound <= 0) throw domain_error("classify: discriminant bound must be positive");
    if (max_degree > 4 && disc_bound == 1555)
        throw domain_error("classify: supply a discriminant bound for degree bound above 4");
    if (digits < 20) throw domain_error("classify: need at least 20 digits");

    int ell = family_level(fam);
    ClassifyResult res;
    res.family = fam;
    res.max_degree = max_degree;
    res.digits = digits;

    std::map<std::vector<mpz_class>, std::vector<ClassifiedPoint>> by_poly;

    for (long dm = 3; dm <= bound; ++dm) {
        long r4 = dm % 4;
        if (r4 != 0 && r4 != 3) continue; // need D = -dm with D ≡ 0,1 mod 4
        mpz_class D = -mpz_class(dm);
        if (class_number(D) > max_degree) continue;
        for (const QForm& f : gamma0_domain_points(D, ell)) {
            PointOutcome o = recognize_point(fam, f, max_degree, digits);
            switch (o.kind) {
                case PointOutcome::Kind::recognized:
                    if (is_degenerate_value(fam, o.value.minpoly)) break;
                    by_poly[o.value.minpoly].push_back(ClassifiedPoint{f, o.value});
                    break;
                case PointOutcome::Kind::degree_exceeded:
                    ++res.degree_exceeded;
                    break;
                case PointOutcome::Kind::failed:
                    res.failures.push_back(ClassifyFailure{f, o.diag});
                    break;
            }
        }
    }

    for (auto& [poly, pts] : by_poly) {
        Orbit orb;
        orb.minpoly = poly;
        orb.kind = kind_of(poly);
        orb.points = std::move(pts);
        std::sort(orb.points.begin(), orb.points.end(),
                  [&](const ClassifiedPoint& x, const ClassifiedPoint& y) {
                      const BigReal &xr = x.t.approx.re, &yr = y.t.approx.re;
                      int dg = xr.digits();
                      BigReal tol = (abs(xr) + abs(yr) + BigReal::of(1L, dg)) *
                                    pow10(-digits, dg);
                      if (xr > yr + tol) return true;
                      if (yr > xr + tol) return false;
                      const BigReal &xi = x.t.approx.im, &yi = y.t.approx.im;
                      if (xi > yi + tol) return true;
                      if (yi > xi + tol) return false;
                      return x.form < y.form;
                  });
        res.orbits.push_back(std::move(orb));
    }
    std::sort(res.orbits.begin(), res.orbits.end(), [](const Orbit& a, const Orbit& b) {
        mpz_class da = -a.disc(), db = -b.disc();
        if (da != db) return da < db;
        return a.minpoly < b.minpoly;
    });
    return res;
}

Census ClassifyResult::census() const {
    Census c;
    for (const Orbit& o : orbits) {
        switch (o.kind) {
            case OrbitKind::rational: ++c.rational; break;
            case OrbitKind::real_quadratic: ++c.real_quadratic; break;
            case OrbitKind::imag_quadratic: ++c.imag_quadratic; break;
            case OrbitKind::cubic: ++c.cubic; break;
            case OrbitKind::totally_real_quartic: ++c.totally_real_quartic; break;
            case OrbitKind::other_quartic: ++c.other_quartic; break;
        }
    }
    return c;
}

std::vector<mpq_class> ClassifyResult::rational_values() const {
    std::vector<mpq_class> v;
    for (const Orbit& o : orbits)
        if (o.kind == OrbitKind::rational) {
            mpq_class t(-o.minpoly[0], o.minpoly[1]);
            t.canonicalize();
            v.push_back(t);
        }
    std::sort(v.begin(), v.end());
    return v;
}

std::string classify_jsonl(const ClassifyResult& r) {
    struct Row {
        const Orbit* orb;
        const ClassifiedPoint* pt;
    };
    std::vector<Row> rows;
    for (const Orbit& o : r.orbits)
        for (const ClassifiedPoint& p : o.points) rows.push_back(Row{&o, &p});
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        mpz_class da = -a.pt->disc(), db = -b.pt->disc();
        if (da != db) return da < db;
        return a.pt->form < b.pt->form;
    });
    std::ostringstream os;
    for (const Row& row : rows) {
        os << "{\"family\":\"" << family_name(r.family) << "\""
           << ",\"D\":" << row.pt->disc()
           << ",\"cm\":[" << row.pt->form.a << "," << row.pt->form.b << ","
           << row.pt->form.c << "]"
           << ",\"minpoly\":[";
        for (size_t i = 0; i < row.orb->minpoly.size(); ++i) {
            if (i) os << ",";
            os << row.orb->minpoly[i];
        }
        os << "]"
           << ",\"embedding\":\"" << row.pt->t.approx.re.str(32) << ","
           << row.pt->t.approx.im.str(32) << "\""
           << ",\"degree\":" << row.orb->minpoly.size() - 1 << "}\n";
    }
    return os.str();
}

} // namespace mdet
