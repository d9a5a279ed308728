#include "mdet/theta.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "mdet/errors.hpp"

namespace mdet {
namespace {

long checked_long(const mpz_class& z, const char* what) {
    if (!z.fits_slong_p()) throw domain_error(std::string(what) + " does not fit a machine word");
    return z.get_si();
}

// Character value mod the level: zero on primes dividing the level,
// Kronecker symbol (D/p) otherwise.
int neben_at(long D, long level, long p) {
    if (level % p == 0) return 0;
    return kronecker_chi(D, p);
}

// Sign-carrying squarefree kernel of D, adjusted to a fundamental
// discriminant, so equal characters compare equal.
long char_kernel(long D) {
    if (D == 0) throw domain_error("zero nebentypus discriminant");
    long s = D < 0 ? -1 : 1, v = s * D;
    for (long p = 2; p * p <= v; ++p)
        while (v % (p * p) == 0) v /= p * p;
    long core = s * v;
    long m = ((core % 4) + 4) % 4;
    return m == 1 ? core : 4 * core;
}

void check_compatible(const QExpansion& a, const QExpansion& b, const char* op) {
    if (a.level != b.level || a.weight != b.weight ||
        char_kernel(a.neben_disc) != char_kernel(b.neben_disc))
        throw domain_error(std::string(op) + ": level/weight/character mismatch (" + a.label +
                           " vs " + b.label + ")");
}

FieldPtr common_field(const std::vector<const QExpansion*>& forms) {
    FieldPtr C = rational_field();
    for (const auto* f : forms) C = compositum(C, f->field);
    return C;
}

bool is_prime(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

}  // namespace

int kronecker_chi(long D, long n) {
    mpz_class d(D);
    return mpz_kronecker_si(d.get_mpz_t(), n);
}

FieldElem QExpansion::a(long n) const {
    if (!exact()) throw data_error("q-expansion " + label + " has numeric coefficients only");
    if (n < 1 || n > truncation)
        throw truncation_error(label + ": exponent " + std::to_string(n) +
                               " outside truncation " + std::to_string(truncation));
    auto it = coeffs.find(n);
    return it == coeffs.end() ? FieldElem(field) : it->second;
}

BigComplex QExpansion::a_num(long n, int digits) const {
    if (n < 1 || n > truncation)
        throw truncation_error(label + ": exponent " + std::to_string(n) +
                               " outside truncation " + std::to_string(truncation));
    if (!exact()) {
        auto it = numeric_coeffs.find(n);
        return it == numeric_coeffs.end() ? BigComplex(digits) : it->second.with_digits(digits);
    }
    auto it = coeffs.find(n);
    return it == coeffs.end() ? BigComplex(digits) : it->second.eval(digits);
}

void QExpansion::set(long n, FieldElem v) {
    if (n < 1) throw domain_error("coefficient exponent must be positive");
    if (v.field() != field) {
        FieldPtr C = compositum(field, v.field());
        if (C != field) {
            for (auto& [m, c] : coeffs) c = lift(c, C);
            field = C;
        }
        v = lift(v, C);
    }
    if (v.is_zero())
        coeffs.erase(n);
    else
        coeffs[n] = std::move(v);
}

long QExpansion::first_nonzero() const {
    if (!exact()) {
        for (const auto& [n, c] : numeric_coeffs)
            if (!c.is_zero()) return n;
        return 0;
    }
    for (const auto& [n, c] : coeffs)
        if (!c.is_zero()) return n;
    return 0;
}

bool QExpansion::zero_through(long bound) const {
    long fn = first_nonzero();
    return fn == 0 || fn > bound;
}

QExpansion QExpansion::conj() const {
    QExpansion g = *this;
    if (exact()) {
        for (auto& [n, c] : g.coeffs) c = c.conj();
    } else {
        for (auto& [n, c] : g.numeric_coeffs) c = mdet::conj(c);
    }
    return g;
}

std::string QExpansion::str(long upto) const {
    std::ostringstream os;
    bool first = true;
    upto = std::min(upto, truncation);
    for (const auto& [n, c] : coeffs) {
        if (n > upto) break;
        os << (first ? "" : " + ") << c.str() << "*q^" << n;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

QExpansion qexp_scale(const QExpansion& f, const FieldElem& c) {
    if (!f.exact()) throw data_error("qexp_scale requires exact coefficients");
    FieldPtr C = compositum(f.field, c.field());
    FieldElem cl = lift(c, C);
    QExpansion g = f;
    g.coeffs.clear();
    g.field = C;
    for (const auto& [n, v] : f.coeffs) {
        FieldElem w = lift(v, C) * cl;
        if (!w.is_zero()) g.coeffs.emplace(n, std::move(w));
    }
    return g;
}

QExpansion qexp_add(const QExpansion& f, const QExpansion& g) {
    if (!f.exact() || !g.exact()) throw data_error("qexp_add requires exact coefficients");
    check_compatible(f, g, "qexp_add");
    QExpansion r = f;
    r.truncation = std::min(f.truncation, g.truncation);
    r.coeffs.erase(r.coeffs.upper_bound(r.truncation), r.coeffs.end());
    for (const auto& [n, v] : g.coeffs) {
        if (n > r.truncation) break;
        auto it = r.coeffs.find(n);
        r.set(n, it == r.coeffs.end() ? v : it->second + v);
    }
    return r;
}

ThetaParams theta_params(const QForm& form, Family family) {
    if (form.a <= 0 || form.disc() >= 0)
        throw domain_error("theta_params requires a positive definite form, got " + form.str());
    mpz_class a = form.a, b = form.b, c = form.c;
    mpz_class l, alpha, beta, gamma, Dnum;
    if (family == Family::P) {
        l = gcd(gcd(a, mpz_class(4 * b)), mpz_class(16 * c));
        alpha = 32 * c / l;
        beta = 16 * b / l;
        gamma = 32 * a / l;
        Dnum = 64 * (4 * a * c - b * b);
    } else {
        l = gcd(gcd(a, mpz_class(3 * b)), mpz_class(9 * c));
        alpha = 18 * c / l;
        beta = 9 * b / l;
        gamma = 18 * a / l;
        Dnum = 27 * (4 * a * c - b * b);
    }
    if (Dnum % (l * l) != 0)
        throw verify_error("nebentypus discriminant is not integral for " + form.str());
    mpz_class det = alpha * gamma - beta * beta;
    mpz_class n1 = det / gcd(det, beta);
    mpz_class n2 = 2 * det / gcd(2 * det, alpha);
    mpz_class n3 = 2 * det / gcd(2 * det, gamma);
    mpz_class N = lcm(n1, lcm(n2, n3));
    ThetaParams tp;
    tp.l = checked_long(l, "theta scale");
    tp.A[0][0] = checked_long(alpha, "theta Gram entry");
    tp.A[0][1] = tp.A[1][0] = checked_long(beta, "theta Gram entry");
    tp.A[1][1] = checked_long(gamma, "theta Gram entry");
    tp.D = checked_long(Dnum / (l * l), "nebentypus discriminant");
    tp.N = checked_long(N, "theta level");
    return tp;
}

QExpansion theta_series(const QForm& form, Family family, long max_exponent) {
    if (max_exponent < 1) throw domain_error("theta truncation must be positive");
    ThetaParams tp = theta_params(form, family);
    long a = checked_long(form.a, "form entry");
    long b = checked_long(form.b, "form entry");
    long c = checked_long(form.c, "form entry");
    const bool P = family == Family::P;
    const long qc = P ? 16 * c : 9 * c;  // coefficient of m^2
    const long qb = P ? 4 * b : 3 * b;   // coefficient of mn
    const long chi_disc = P ? -4 : -3;

    // Box the lattice search with the smallest Gram eigenvalue.
    double tr = double(qc) + double(a);
    double dt = double(qc) * double(a) - 0.25 * double(qb) * double(qb);
    double lam = 0.5 * (tr - std::sqrt(tr * tr - 4.0 * dt));
    long box = static_cast<long>(std::sqrt(double(tp.l) * double(max_exponent) / (0.999 * lam))) + 2;

    std::map<long, mpz_class> acc;
    for (long m = -box; m <= box; ++m) {
        for (long n = -box; n <= box; ++n) {
            int chi = kronecker_chi(chi_disc, n);
            if (chi == 0) continue;
            long num = qc * m * m + qb * m * n + a * n * n;
            if (num > tp.l * max_exponent) continue;
            if (num % tp.l != 0)
                throw verify_error("theta exponent not integral for " + form.str());
            long e = num / tp.l;
            if (e < 1) continue;
            long w = P ? 2 * b * m + a * n : 3 * b * m + 2 * a * n;
            acc[e] += chi * w;
        }
    }
    QExpansion f;
    f.label = (P ? "theta_P" : "theta_Q") + form.str();
    f.level = tp.N;
    f.neben_disc = tp.D;
    f.weight = 2;
    f.truncation = max_exponent;
    for (const auto& [e, v] : acc)
        if (v != 0) f.coeffs.emplace(e, FieldElem::of(mpq_class(v), f.field));
    return f;
}

long sturm_bound(long N, int weight) {
    if (N < 1) throw domain_error("level must be positive");
    mpz_class idx(N);
    long v = N;
    for (long p = 2; p * p <= v; ++p) {
        if (v % p) continue;
        idx = idx / p * (p + 1);
        while (v % p == 0) v /= p;
    }
    if (v > 1) idx = idx / v * (v + 1);
    return checked_long(weight * idx / 12, "Sturm bound");
}

QExpansion embed_oldform(const QExpansion& f, long d) {
    if (d < 1) throw domain_error("oldform scale must be positive");
    QExpansion g;
    g.label = f.label.empty() ? "" : f.label + "(" + std::to_string(d) + "tau)";
    g.level = f.level * d;
    g.neben_disc = f.neben_disc;
    g.weight = f.weight;
    g.truncation = f.truncation * d;
    g.field = f.field;
    for (const auto& [n, c] : f.coeffs) g.coeffs.emplace(n * d, c);
    for (const auto& [n, c] : f.numeric_coeffs) g.numeric_coeffs.emplace(n * d, c);
    return g;
}

QExpansion hecke_Tp(const QExpansion& f, long p) {
    if (!is_prime(p)) throw domain_error("Hecke index must be a prime");
    if (!f.exact()) throw data_error("hecke_Tp requires exact coefficients");
    long trunc = f.truncation / p;
    if (trunc < 1)
        throw truncation_error("truncation " + std::to_string(f.truncation) +
                               " too short for T_" + std::to_string(p));
    int chi = neben_at(f.neben_disc, f.level, p);
    QExpansion g;
    g.label = f.label.empty() ? "" : "T" + std::to_string(p) + "." + f.label;
    g.level = f.level;
    g.neben_disc = f.neben_disc;
    g.weight = f.weight;
    g.truncation = trunc;
    g.field = f.field;
    for (long n = 1; n <= trunc; ++n) {
        auto it = f.coeffs.find(n * p);
        FieldElem v = it == f.coeffs.end() ? FieldElem(f.field) : it->second;
        if (chi != 0 && n % p == 0) {
            auto jt = f.coeffs.find(n / p);
            if (jt != f.coeffs.end()) v += jt->second * mpq_class(chi * p);
        }
        if (!v.is_zero()) g.coeffs.emplace(n, std::move(v));
    }
    return g;
}

Decomposition decompose(const QExpansion& target, const std::vector<QExpansion>& basis) {
    if (basis.empty()) throw domain_error("decompose needs a nonempty basis");
    if (!target.exact()) throw data_error("decompose requires exact coefficients");
    for (const auto& b : basis) {
        if (!b.exact()) throw data_error("decompose requires exact coefficients");
        check_compatible(target, b, "decompose");
    }
    const long B = sturm_bound(target.level, target.weight);
    const long solve_hi = B + 8;
    long avail = target.truncation;
    for (const auto& b : basis) avail = std::min(avail, b.truncation);
    if (avail < solve_hi)
        throw truncation_error("decompose needs exponents through " + std::to_string(solve_hi) +
                               ", have " + std::to_string(avail));

    std::vector<const QExpansion*> all{&target};
    for (const auto& b : basis) all.push_back(&b);
    FieldPtr C = common_field(all);
    const int k = static_cast<int>(basis.size());
    auto coeff_at = [&](const QExpansion& f, long n) {
        auto it = f.coeffs.find(n);
        return it == f.coeffs.end() ? FieldElem(C) : lift(it->second, C);
    };

    // Incremental Gaussian elimination on rows [a_n(b_1) .. a_n(b_k) | a_n(t)].
    std::vector<std::vector<FieldElem>> rows;  // echelon rows, unit pivots
    std::vector<int> pivots;
    Decomposition out;
    for (long n = 1; n <= solve_hi && static_cast<int>(rows.size()) < k; ++n) {
        std::vector<FieldElem> row(k + 1, FieldElem(C));
        bool any = false;
        for (int j = 0; j < k; ++j) {
            row[j] = coeff_at(basis[j], n);
            any = any || !row[j].is_zero();
        }
        row[k] = coeff_at(target, n);
        any = any || !row[k].is_zero();
        if (!any) continue;
        for (size_t r = 0; r < rows.size(); ++r) {
            if (row[pivots[r]].is_zero()) continue;
            FieldElem f = row[pivots[r]];
            for (int j = 0; j <= k; ++j) row[j] -= f * rows[r][j];
        }
        int piv = -1;
        for (int j = 0; j < k; ++j)
            if (!row[j].is_zero()) { piv = j; break; }
        if (piv < 0) {
            if (!row[k].is_zero()) {  // inconsistent row: certified non-membership
                out.ok = false;
                out.witness = n;
                return out;
            }
            continue;
        }
        FieldElem inv = row[piv].inverse();
        for (int j = 0; j <= k; ++j) row[j] = row[j] * inv;
        rows.push_back(std::move(row));
        pivots.push_back(piv);
    }
    if (static_cast<int>(rows.size()) < k)
        throw verify_error("decompose: basis is rank deficient through exponent " +
                           std::to_string(solve_hi));

    // Back substitution into coordinates.
    std::vector<FieldElem> coords(k, FieldElem(C));
    for (int r = static_cast<int>(rows.size()) - 1; r >= 0; --r) {
        FieldElem v = rows[r][k];
        for (int j = pivots[r] + 1; j < k; ++j) v -= rows[r][j] * coords[j];
        coords[pivots[r]] = v;
    }

    // Verify every available exponent.
    std::set<long> support;
    for (const auto& [n, c] : target.coeffs)
        if (n <= avail) support.insert(n);
    for (const auto& b : basis)
        for (const auto& [n, c] : b.coeffs)
            if (n <= avail) support.insert(n);
    for (long n : support) {
        FieldElem s(C);
        for (int j = 0; j < k; ++j) s += coords[j] * coeff_at(basis[j], n);
        if (s != coeff_at(target, n)) {
            out.ok = false;
            out.witness = n;
            return out;
        }
    }
    out.ok = true;
    out.coords = std::move(coords);
    out.verified_through = avail;
    return out;
}

namespace {

using QVec = std::vector<mpq_class>;
using QMat = std::vector<QVec>;

struct RationalEchelon {
    std::vector<QVec> rows;
    std::vector<size_t> pivots;

    bool insert(QVec v) {
        for (size_t r = 0; r < rows.size(); ++r) {
            if (v[pivots[r]] == 0) continue;
            mpq_class f = v[pivots[r]];
            for (size_t j = 0; j < v.size(); ++j) v[j] -= f * rows[r][j];
        }
        size_t piv = v.size();
        for (size_t j = 0; j < v.size(); ++j)
            if (v[j] != 0) { piv = j; break; }
        if (piv == v.size()) return false;
        mpq_class inv = 1 / v[piv];
        for (auto& x : v) x *= inv;
        rows.push_back(std::move(v));
        pivots.push_back(piv);
        return true;
    }
};

QMat qmat_mul(const QMat& A, const QMat& B) {
    size_t n = A.size(), m = B[0].size(), l = B.size();
    QMat C(n, QVec(m, mpq_class(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < l; ++t) {
            if (A[i][t] == 0) continue;
            for (size_t j = 0; j < m; ++j) C[i][j] += A[i][t] * B[t][j];
        }
    return C;
}

QMat qmat_axpy(const QMat& A, const mpq_class& c, const QMat& B) {
    QMat C = A;
    for (size_t i = 0; i < C.size(); ++i)
        for (size_t j = 0; j < C[i].size(); ++j) C[i][j] += c * B[i][j];
    return C;
}

// Characteristic polynomial, constant term first, by Faddeev-LeVerrier.
QVec charpoly(const QMat& A) {
    size_t n = A.size();
    QVec c(n + 1, mpq_class(0));
    c[n] = 1;
    QMat Nk(n, QVec(n, mpq_class(0)));
    for (size_t i = 0; i < n; ++i) Nk[i][i] = 1;
    for (size_t k = 1; k <= n; ++k) {
        Nk = qmat_mul(A, Nk);
        mpq_class tr(0);
        for (size_t i = 0; i < n; ++i) tr += Nk[i][i];
        mpq_class ck = -tr / mpq_class(static_cast<long>(k));
        c[n - k] = ck;
        for (size_t i = 0; i < n; ++i) Nk[i][i] += ck;
    }
    return c;
}

std::vector<mpz_class> integer_poly(const QVec& cp) {
    mpz_class den(1);
    for (const auto& x : cp) den = lcm(den, x.get_den());
    std::vector<mpz_class> out;
    out.reserve(cp.size());
    for (const auto& x : cp) out.push_back(mpz_class(x * den));
    return out;
}

// h(M) for an integer polynomial h, constant term first.
QMat poly_of_matrix(const std::vector<mpz_class>& h, const QMat& M) {
    size_t n = M.size();
    QMat acc(n, QVec(n, mpq_class(0)));
    for (int i = static_cast<int>(h.size()) - 1; i >= 0; --i) {
        acc = qmat_mul(acc, M);
        for (size_t d = 0; d < n; ++d) acc[d][d] += mpq_class(h[i]);
    }
    return acc;
}

// Rows alpha with alpha * M = 0.
QMat left_kernel(const QMat& M) {
    size_t n = M.size();
    QMat E(n, QVec(n, mpq_class(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) E[j][i] = M[i][j];
    std::vector<long> pivot_of_col(n, -1);
    size_t rank = 0;
    for (size_t col = 0; col < n && rank < n; ++col) {
        size_t sel = rank;
        while (sel < n && E[sel][col] == 0) ++sel;
        if (sel == n) continue;
        std::swap(E[sel], E[rank]);
        mpq_class inv = 1 / E[rank][col];
        for (auto& x : E[rank]) x *= inv;
        for (size_t r = 0; r < n; ++r) {
            if (r == rank || E[r][col] == 0) continue;
            mpq_class f = E[r][col];
            for (size_t j = 0; j < n; ++j) E[r][j] -= f * E[rank][j];
        }
        pivot_of_col[col] = static_cast<long>(rank);
        ++rank;
    }
    QMat out;
    for (size_t free = 0; free < n; ++free) {
        if (pivot_of_col[free] >= 0) continue;
        QVec alpha(n, mpq_class(0));
        alpha[free] = 1;
        for (size_t col = 0; col < n; ++col)
            if (pivot_of_col[col] >= 0) alpha[col] = -E[pivot_of_col[col]][free];
        out.push_back(std::move(alpha));
    }
    return out;
}

// R with (row w_i) * A = sum_j R[i][j] (row w_j) on the basis W.
QMat restrict_op(const QMat& W, const QMat& A) {
    size_t d = W.size(), k = W[0].size();
    QMat img(d, QVec(k, mpq_class(0)));
    for (size_t i = 0; i < d; ++i)
        for (size_t t = 0; t < k; ++t) {
            if (W[i][t] == 0) continue;
            for (size_t j = 0; j < k; ++j) img[i][j] += W[i][t] * A[t][j];
        }
    QMat We = W;
    QMat trans(d, QVec(d, mpq_class(0)));
    for (size_t i = 0; i < d; ++i) trans[i][i] = 1;
    std::vector<size_t> piv(d);
    for (size_t r = 0; r < d; ++r) {
        size_t pc = 0;
        while (pc < k) {
            size_t sel = r;
            while (sel < d && We[sel][pc] == 0) ++sel;
            if (sel < d) {
                std::swap(We[sel], We[r]);
                std::swap(trans[sel], trans[r]);
                break;
            }
            ++pc;
        }
        if (pc == k) throw verify_error("degenerate subspace basis");
        piv[r] = pc;
        mpq_class inv = 1 / We[r][pc];
        for (auto& x : We[r]) x *= inv;
        for (auto& x : trans[r]) x *= inv;
        for (size_t rr = 0; rr < d; ++rr) {
            if (rr == r || We[rr][pc] == 0) continue;
            mpq_class f = We[rr][pc];
            for (size_t j = 0; j < k; ++j) We[rr][j] -= f * We[r][j];
            for (size_t j = 0; j < d; ++j) trans[rr][j] -= f * trans[r][j];
        }
    }
    QMat R(d, QVec(d, mpq_class(0)));
    for (size_t i = 0; i < d; ++i) {
        QVec resid = img[i];
        for (size_t r = 0; r < d; ++r) {
            mpq_class f = resid[piv[r]];
            if (f == 0) continue;
            for (size_t j = 0; j < k; ++j) resid[j] -= f * We[r][j];
            for (size_t j = 0; j < d; ++j) R[i][j] += f * trans[r][j];
        }
        for (const auto& x : resid)
            if (x != 0) throw verify_error("subspace is not invariant under a probe operator");
    }
    return R;
}

// Distinct irreducible factors with multiplicities.
std::map<std::vector<mpz_class>, int> charpoly_factors(const QMat& R) {
    auto factors = factor_rational_poly(integer_poly(charpoly(R)));
    std::map<std::vector<mpz_class>, int> mult;
    for (auto& h : factors) ++mult[h];
    return mult;
}

}  // namespace

std::vector<QExpansion> eigenform_split(const std::vector<QExpansion>& span,
                                        std::vector<long> probes) {
    if (span.empty()) throw domain_error("eigenform_split needs a nonempty span");
    const long level = span[0].level;
    for (const auto& f : span) {
        if (!f.exact() || f.field != rational_field())
            throw domain_error("eigenform_split requires exact rational spans");
        check_compatible(span[0], f, "eigenform_split");
    }
    const long B = sturm_bound(level, span[0].weight);
    const int k = static_cast<int>(span.size());
    long avail = span[0].truncation;
    for (const auto& f : span) avail = std::min(avail, f.truncation);
    for (const auto& f : span)
        if (f.zero_through(B))
            throw data_error("span form " + f.label + " vanishes through the Sturm bound");

    auto rational_at = [](const QExpansion& f, long n) {
        auto it = f.coeffs.find(n);
        return it == f.coeffs.end() ? mpq_class(0) : it->second.rat();
    };

    // Independence through the Sturm bound.
    {
        RationalEchelon ech;
        int rank = 0;
        for (const auto& f : span) {
            QVec row(B);
            for (long n = 1; n <= B; ++n) row[n - 1] = rational_at(f, n);
            if (ech.insert(std::move(row))) ++rank;
        }
        if (rank < k)
            throw verify_error("eigenform_split: span is linearly dependent through exponent " +
                               std::to_string(B));
    }

    auto normalize_sorted = [&](std::vector<QExpansion> out) {
        for (auto& f : out) {
            long fn = f.first_nonzero();
            if (fn == 0) throw verify_error("eigenform is identically zero");
            FieldElem inv = f.coeffs.at(fn).inverse();
            std::map<long, FieldElem> scaled;
            for (auto& [n, c] : f.coeffs) {
                FieldElem v = c * inv;
                if (!v.is_zero()) scaled.emplace(n, std::move(v));
            }
            f.coeffs = std::move(scaled);
            f.label.clear();
        }
        const int cmp_digits = 40;
        BigReal eps = pow10(-20, cmp_digits);
        auto num_less = [&](const QExpansion& f, const QExpansion& g) {
            long hi = std::min(f.truncation, g.truncation);
            for (long n = 1; n <= hi; ++n) {
                if (!f.coeffs.count(n) && !g.coeffs.count(n)) continue;
                BigComplex af = f.a_num(n, cmp_digits), ag = g.a_num(n, cmp_digits);
                if (abs(af.re - ag.re) > eps) return af.re < ag.re;
                if (abs(af.im - ag.im) > eps) return af.im < ag.im;
            }
            return false;
        };
        std::sort(out.begin(), out.end(), num_less);
        return out;
    };

    if (k == 1) return normalize_sorted({span[0]});

    const bool adaptive = probes.empty();
    auto usable = [&](long p) { return avail >= p * (B + 8); };

    std::set<long> attempted;
    std::vector<long> used;
    std::vector<QMat> singles;
    auto add_prime = [&](long p) -> bool {
        attempted.insert(p);
        if (!usable(p)) {
            if (!adaptive)
                throw truncation_error("eigenform_split needs truncation " +
                                       std::to_string(p * (B + 8)) + " for T_" +
                                       std::to_string(p) + ", have " + std::to_string(avail));
            return false;
        }
        QMat A(k, QVec(k, mpq_class(0)));
        for (int i = 0; i < k; ++i) {
            QExpansion tf = hecke_Tp(span[i], p);
            Decomposition dec = decompose(tf, span);
            if (!dec.ok) {
                // T_p for p dividing the level can leave a mixed span; skip it
                // on the adaptive path, fail loudly otherwise.
                if (adaptive && level % p == 0) return false;
                throw verify_error("span is not stable under T_" + std::to_string(p) +
                                   " (first failing exponent " + std::to_string(dec.witness) +
                                   ")");
            }
            for (int j = 0; j < k; ++j) A[i][j] = dec.coords[j].rat();
        }
        used.push_back(p);
        singles.push_back(std::move(A));
        return true;
    };

    if (adaptive) {
        int got = 0;
        for (long p = 2; got < 6 && usable(p); ++p)
            if (is_prime(p) && level % p != 0 && add_prime(p)) ++got;
        if (singles.empty())
            throw truncation_error("eigenform_split: no probe prime fits truncation " +
                                   std::to_string(avail));
    } else {
        std::sort(probes.begin(), probes.end());
        probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
        for (long p : probes) {
            if (!is_prime(p)) throw domain_error("probe " + std::to_string(p) + " is not prime");
            add_prime(p);
        }
    }

    // Probe operators plus pairwise combinations; the latter separate orbits
    // whose single-prime eigenvalues stay degenerate.
    std::vector<QMat> ops = singles;
    size_t combo_base = 1;  // combos cover pairs among the first combo_base singles
    auto extend_combos = [&]() {
        static const long mults[] = {1, -1, 2, -2, 3};
        ops = singles;
        for (size_t i = 0; i + 1 < singles.size(); ++i)
            for (size_t j = i + 1; j < singles.size(); ++j)
                for (long c : mults) ops.push_back(qmat_axpy(singles[i], mpq_class(c), singles[j]));
        combo_base = singles.size();
    };

    std::vector<QMat> subspaces;
    {
        QMat full;
        for (int i = 0; i < k; ++i) {
            QVec e(k, mpq_class(0));
            e[i] = 1;
            full.push_back(std::move(e));
        }
        subspaces.push_back(std::move(full));
    }

    auto refine_fixpoint = [&]() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& op : ops) {
                std::vector<QMat> next;
                for (const auto& W : subspaces) {
                    if (W.size() == 1) {
                        next.push_back(W);
                        continue;
                    }
                    QMat R = restrict_op(W, op);
                    auto mult = charpoly_factors(R);
                    if (mult.size() == 1) {
                        next.push_back(W);
                        continue;
                    }
                    changed = true;
                    for (const auto& [h, m] : mult) {
                        QMat P = poly_of_matrix(h, R);
                        QMat Pm = P;
                        for (int t = 1; t < m; ++t) Pm = qmat_mul(Pm, P);
                        QMat Wh;
                        for (const auto& alpha : left_kernel(Pm)) {
                            QVec row(W[0].size(), mpq_class(0));
                            for (size_t i = 0; i < W.size(); ++i) {
                                if (alpha[i] == 0) continue;
                                for (size_t j = 0; j < row.size(); ++j)
                                    row[j] += alpha[i] * W[i][j];
                            }
                            Wh.push_back(std::move(row));
                        }
                        if (Wh.size() != static_cast<size_t>(m) * (h.size() - 1))
                            throw verify_error("generalized eigenspace dimension mismatch");
                        next.push_back(std::move(Wh));
                    }
                }
                subspaces = std::move(next);
            }
        }
    };

    // An irreducible characteristic polynomial of full degree on W lets the
    // eigenvector be written over a single number field.
    auto extractable = [&](const QMat& W, QMat* R_out, std::vector<mpz_class>* h_out) {
        for (const auto& op : ops) {
            QMat R = restrict_op(W, op);
            auto factors = factor_rational_poly(integer_poly(charpoly(R)));
            if (factors.size() == 1 && factors[0].size() == W.size() + 1) {
                if (R_out) *R_out = std::move(R);
                if (h_out) *h_out = std::move(factors[0]);
                return true;
            }
        }
        return false;
    };

    for (;;) {
        refine_fixpoint();
        bool stuck = false;
        for (const auto& W : subspaces)
            if (W.size() > 1 && !extractable(W, nullptr, nullptr)) { stuck = true; break; }
        if (!stuck) break;
        if (combo_base < singles.size() && singles.size() > 1) {
            extend_combos();
            continue;
        }
        bool added = false;
        if (adaptive) {
            for (long p = 2; !added && usable(p); ++p)
                if (is_prime(p) && !attempted.count(p)) added = add_prime(p);
        }
        if (!added) {
            std::string ps;
            for (long p : used) ps += (ps.empty() ? "" : ",") + std::to_string(p);
            throw verify_error("probe primes {" + ps +
                               "} do not diagonalize a subspace of dimension >= 2");
        }
        ops.push_back(singles.back());
        combo_base = 1;  // regenerate combos on the next stuck pass
    }

    auto build_form = [&](const std::vector<FieldElem>& u, const FieldPtr& K) {
        QExpansion f;
        f.level = level;
        f.neben_disc = span[0].neben_disc;
        f.weight = span[0].weight;
        f.truncation = avail;
        f.field = K;
        std::map<long, FieldElem> acc;
        for (int j = 0; j < k; ++j) {
            if (u[j].is_zero()) continue;
            for (const auto& [n, c] : span[j].coeffs) {
                if (n > avail) break;
                FieldElem term = u[j] * c.rat();
                auto it = acc.find(n);
                if (it == acc.end())
                    acc.emplace(n, std::move(term));
                else
                    it->second += term;
            }
        }
        for (auto& [n, c] : acc)
            if (!c.is_zero()) f.coeffs.emplace(n, std::move(c));
        return f;
    };

    std::vector<QExpansion> out;
    for (const auto& W : subspaces) {
        size_t d = W.size();
        if (d == 1) {
            std::vector<FieldElem> u(k);
            for (int j = 0; j < k; ++j) u[j] = FieldElem::of(W[0][j], rational_field());
            out.push_back(build_form(u, rational_field()));
            continue;
        }
        QMat R;
        std::vector<mpz_class> h;
        if (!extractable(W, &R, &h))
            throw verify_error("lost extractability of a refined subspace");
        FieldPtr K = make_field(h);
        FieldElem xbar = FieldElem::gen(K);
        // Left kernel of (R - xbar I) over K, via column echelon.
        std::vector<std::vector<FieldElem>> T(d, std::vector<FieldElem>(d, FieldElem(K)));
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < d; ++j) {
                T[j][i] = FieldElem::of(R[i][j], K);
                if (i == j) T[j][i] -= xbar;
            }
        std::vector<long> pivcol(d, -1);
        size_t rank = 0;
        for (size_t col = 0; col < d && rank < d; ++col) {
            size_t sel = rank;
            while (sel < d && T[sel][col].is_zero()) ++sel;
            if (sel == d) continue;
            std::swap(T[sel], T[rank]);
            FieldElem inv = T[rank][col].inverse();
            for (auto& x : T[rank]) x *= inv;
            for (size_t r = 0; r < d; ++r) {
                if (r == rank || T[r][col].is_zero()) continue;
                FieldElem f = T[r][col];
                for (size_t j = 0; j < d; ++j) T[r][j] -= f * T[rank][j];
            }
            pivcol[col] = static_cast<long>(rank);
            ++rank;
        }
        if (rank != d - 1)
            throw verify_error("eigenvector extraction found unexpected kernel rank");
        std::vector<FieldElem> alpha(d, FieldElem(K));
        size_t free = 0;
        while (pivcol[free] >= 0) ++free;
        alpha[free] = FieldElem::of(1, K);
        for (size_t col = 0; col < d; ++col)
            if (pivcol[col] >= 0) alpha[col] = -T[pivcol[col]][free];
        std::vector<FieldElem> u(k, FieldElem(K));
        for (size_t i = 0; i < d; ++i)
            for (int j = 0; j < k; ++j) u[j] += alpha[i] * W[i][j];
        QExpansion base = build_form(u, K);
        for (int s = 0; s < K->degree(); ++s) {
            QExpansion g = base;
            for (auto& [n, c] : g.coeffs) c = apply_automorphism(c, s);
            out.push_back(std::move(g));
        }
    }
    if (static_cast<int>(out.size()) != k)
        throw verify_error("eigenform count does not match the span dimension");
    return normalize_sorted(std::move(out));
}

ResolvedNewform resolve_newform(const QExpansion& eigenform) {
    if (!eigenform.exact()) throw data_error("resolve_newform requires exact coefficients");
    if (eigenform.first_nonzero() == 0) throw domain_error("resolve_newform on the zero form");

    QExpansion E = eigenform;
    // Strip the gcd of the support.
    long d0 = 0;
    for (const auto& [n, c] : E.coeffs) d0 = d0 == 0 ? n : std::gcd(d0, n);
    if (d0 > 1) {
        std::map<long, FieldElem> shifted;
        for (auto& [n, c] : E.coeffs) shifted.emplace(n / d0, std::move(c));
        E.coeffs = std::move(shifted);
        E.truncation /= d0;
    }
    FieldElem a1 = E.coeffs.count(1) ? E.coeffs.at(1) : FieldElem(E.field);
    if (a1.is_zero()) throw verify_error("support gcd did not normalize the leading exponent");
    FieldElem inv = a1.inverse();
    for (auto& [n, c] : E.coeffs) c *= inv;

    // Candidate scale primes: the prime factor of d0, else both 2 and 3.
    std::vector<long> cands;
    if (d0 > 1) {
        long v = d0, p = 2;
        while (p * p <= v && v % p) ++p;
        if (v % p) p = v;
        long q = v;
        while (q % p == 0) q /= p;
        if (q != 1)
            throw verify_error("support gcd " + std::to_string(d0) + " is not a prime power");
        cands.push_back(p);
    } else {
        cands = {2, 3};
    }

    // Fit a_{p^{j+1}} = x a_{p^j} for j >= K; the discrepancies below K are
    // the oldform weights.
    long best_p = 1;
    int best_K = 0;
    std::vector<FieldElem> best_w{FieldElem::of(1, E.field)};
    for (long p : cands) {
        // The two-term tail law needs chi(p) = 0; with chi(p) != 0 the
        // three-term Hecke recurrence would masquerade as oldform weights,
        // and no mixing can occur there anyway.
        if (neben_at(E.neben_disc, eigenform.level, p) != 0) continue;
        int J = 0;
        long pj = 1;
        while (pj <= E.truncation / p) { pj *= p; ++J; }
        if (J < 1) continue;
        std::vector<FieldElem> e;
        pj = 1;
        for (int j = 0; j <= J; ++j) {
            e.push_back(E.coeffs.count(pj) ? E.coeffs.at(pj) : FieldElem(E.field));
            pj *= p;
        }
        int jlast = 0;
        for (int j = J; j >= 1; --j)
            if (!e[j].is_zero()) { jlast = j; break; }
        FieldElem x(E.field);
        if (jlast == J) {
            if (e[J - 1].is_zero())
                throw verify_error("oldform recurrence cannot be fitted (truncation too short)");
            x = e[J] / e[J - 1];
        }
        int K = 0;
        for (int j = J - 1; j >= 0; --j)
            if (e[j + 1] != x * e[j]) { K = j + 1; break; }
        if (K == 0) continue;
        if (K + 1 > J)
            throw truncation_error("oldform recurrence needs exponents through p^" +
                                   std::to_string(K + 1));
        if (best_K > 0) throw verify_error("ambiguous oldform scale prime");
        best_p = p;
        best_K = K;
        best_w.assign(1, FieldElem::of(1, E.field));
        for (int kk = 1; kk <= K; ++kk) best_w.push_back(e[kk] - x * e[kk - 1]);
    }
    if (best_p == 1 && d0 > 1) best_p = cands[0];

    ResolvedNewform rn;
    rn.scale_prime = best_p;
    rn.scale = d0;
    rn.weights = best_w;

    // Triangular recovery of the newform coefficients.
    QExpansion F = E;
    if (best_K > 0) {
        F.coeffs.clear();
        std::set<long> work;
        for (const auto& [n, c] : E.coeffs) work.insert(n);
        while (!work.empty()) {
            long n = *work.begin();
            work.erase(work.begin());
            FieldElem v = E.coeffs.count(n) ? E.coeffs.at(n) : FieldElem(E.field);
            long pk = best_p;
            for (int kk = 1; kk <= best_K; ++kk, pk *= best_p) {
                if (n % pk) continue;
                auto it = F.coeffs.find(n / pk);
                if (it != F.coeffs.end()) v -= best_w[kk] * it->second;
            }
            if (!v.is_zero()) {
                F.coeffs.emplace(n, v);
                long pk2 = best_p;
                for (int kk = 1; kk <= best_K; ++kk, pk2 *= best_p)
                    if (n <= E.truncation / pk2) work.insert(n * pk2);
            }
        }
    }
    long total = d0;
    for (int kk = 0; kk < best_K; ++kk) total *= best_p;
    if (eigenform.level % total != 0)
        throw verify_error("oldform scale does not divide the span level");
    F.level = eigenform.level / total;
    F.label.clear();
    rn.form = std::move(F);
    return rn;
}

std::string qexp_to_text(const QExpansion& f, long upto, int digits) {
    upto = std::min(upto, f.truncation);
    std::ostringstream os;
    os << (f.label.empty() ? "f" : f.label) << " " << f.level << " " << f.weight << " "
       << f.neben_disc << "\n";
    for (long n = 1; n <= upto; ++n) {
        os << n << " ";
        if (!f.exact()) {
            BigComplex v = f.a_num(n, digits);
            os << v.re.str(digits) << "," << v.im.str(digits);
        } else {
            auto it = f.coeffs.find(n);
            if (it == f.coeffs.end()) {
                os << "0";
            } else if (it->second.is_rational()) {
                os << it->second.rat().get_str();
            } else {
                BigComplex v = it->second.eval(digits);
                os << v.re.str(digits) << "," << v.im.str(digits);
            }
        }
        os << "\n";
    }
    return os.str();
}

QExpansion qexp_from_text(const std::string& text) {
    std::istringstream is(text);
    std::string header;
    while (std::getline(is, header)) {
        auto pos = header.find_first_not_of(" \t\r");
        if (pos != std::string::npos && header[pos] != '#') break;
        header.clear();
    }
    if (header.empty()) throw data_error("empty q-expansion file");
    QExpansion f;
    {
        std::istringstream hs(header);
        if (!(hs >> f.label >> f.level >> f.weight >> f.neben_disc))
            throw data_error("malformed q-expansion header: " + header);
    }
    std::vector<std::pair<long, std::string>> entries;
    bool any_numeric = false;
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        long n;
        std::string tok;
        if (!(ls >> n >> tok)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw data_error("malformed q-expansion line: " + line);
        }
        if (n < 1) throw data_error("nonpositive exponent in q-expansion");
        if (tok.find(',') != std::string::npos) any_numeric = true;
        entries.emplace_back(n, tok);
        f.truncation = std::max(f.truncation, n);
    }
    for (const auto& [n, tok] : entries) {
        if (any_numeric) {
            auto comma = tok.find(',');
            std::string res = comma == std::string::npos ? tok : tok.substr(0, comma);
            std::string ims = comma == std::string::npos ? "0" : tok.substr(comma + 1);
            int digits = std::max<int>(30, static_cast<int>(std::max(res.size(), ims.size())));
            BigComplex v(BigReal::parse(res, digits), BigReal::parse(ims, digits));
            if (!v.is_zero()) f.numeric_coeffs.emplace(n, v);
        } else {
            mpq_class v(tok);
            v.canonicalize();
            if (v != 0) f.coeffs.emplace(n, FieldElem::of(v, f.field));
        }
    }
    long fn = f.first_nonzero();
    if (fn == 0) throw data_error("q-expansion " + f.label + " is identically zero");
    long B = sturm_bound(f.level, f.weight);
    if (fn > B)
        throw data_error("q-expansion " + f.label + " vanishes through the Sturm bound " +
                         std::to_string(B));
    return f;
}

}  // namespace mdet
