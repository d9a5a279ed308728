#include "mdet/field.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "mdet/algebraic.hpp"
#include "mdet/errors.hpp"

namespace mdet {
namespace {

using Poly = std::vector<mpq_class>;

int pdeg(const Poly& p) {
    int d = static_cast<int>(p.size()) - 1;
    while (d >= 0 && p[d] == 0) --d;
    return d;
}

void ptrim(Poly& p) { p.resize(pdeg(p) + 1); }

Poly padd(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), mpq_class(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    ptrim(r);
    return r;
}

Poly psub(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), mpq_class(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    ptrim(r);
    return r;
}

Poly pmul(const Poly& a, const Poly& b) {
    if (pdeg(a) < 0 || pdeg(b) < 0) return {};
    Poly r(a.size() + b.size() - 1, mpq_class(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    ptrim(r);
    return r;
}

// a = q*b + r with deg r < deg b.
void pdivmod(Poly a, const Poly& b, Poly& q, Poly& r) {
    int db = pdeg(b);
    if (db < 0) throw domain_error("polynomial division by zero");
    q.assign(std::max(pdeg(a) - db + 1, 0), mpq_class(0));
    while (pdeg(a) >= db) {
        int da = pdeg(a);
        mpq_class f = a[da] / b[db];
        q[da - db] = f;
        for (int i = 0; i <= db; ++i) a[da - db + i] -= f * b[i];
        a[da] = 0;
        ptrim(a);
    }
    r = a;
}

Poly pmod(const Poly& a, const Poly& b) {
    Poly q, r;
    pdivmod(a, b, q, r);
    return r;
}

// m(s) mod g by Horner over Q[x]/(g).
Poly compose_mod(const Poly& s, const Poly& m, const Poly& g) {
    Poly acc;
    for (int i = pdeg(m); i >= 0; --i) {
        acc = pmul(acc, s);
        if (m[i] != 0) {
            if (acc.empty()) acc.assign(1, mpq_class(0));
            acc[0] += m[i];
        }
        acc = pmod(acc, g);
    }
    return acc;
}

Poly to_qpoly(const std::vector<mpz_class>& p) {
    Poly r(p.size());
    for (size_t i = 0; i < p.size(); ++i) r[i] = mpq_class(p[i]);
    return r;
}

std::vector<mpz_class> clear_denominators(const Poly& p) {
    mpz_class l(1);
    for (const auto& c : p) l = lcm(l, c.get_den());
    std::vector<mpz_class> r(p.size());
    for (size_t i = 0; i < p.size(); ++i) {
        mpq_class v = p[i] * l;
        r[i] = v.get_num();
    }
    return r;
}

std::vector<mpz_class> primitive_part(std::vector<mpz_class> p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    if (p.empty()) return p;
    mpz_class g(0);
    for (const auto& c : p) g = gcd(g, c);
    if (p.back() < 0) g = -g;
    for (auto& c : p) c /= g;
    return p;
}

BigReal q_to_real(const mpq_class& x, int digits) { return BigReal::of(x, digits); }

BigComplex eval_qpoly(const Poly& p, const BigComplex& x) {
    BigComplex acc(x.digits());
    for (int i = pdeg(p); i >= 0; --i) {
        acc = acc * x;
        acc.re = acc.re + q_to_real(p[i], x.digits());
    }
    return acc;
}

// Solve the square complex system M s = y by Gaussian elimination.
std::vector<BigComplex> solve_complex(std::vector<std::vector<BigComplex>> M,
                                      std::vector<BigComplex> y) {
    int n = static_cast<int>(y.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        BigReal best = norm(M[col][col]);
        for (int r = col + 1; r < n; ++r) {
            BigReal v = norm(M[r][col]);
            if (v > best) { best = v; piv = r; }
        }
        if (best.is_zero()) throw precision_error("singular system");
        std::swap(M[col], M[piv]);
        std::swap(y[col], y[piv]);
        for (int r = col + 1; r < n; ++r) {
            BigComplex f = M[r][col] / M[col][col];
            for (int k = col; k < n; ++k) M[r][k] = M[r][k] - f * M[col][k];
            y[r] = y[r] - f * y[col];
        }
    }
    std::vector<BigComplex> s(n, BigComplex(y[0].digits()));
    for (int row = n - 1; row >= 0; --row) {
        BigComplex acc = y[row];
        for (int k = row + 1; k < n; ++k) acc = acc - M[row][k] * s[k];
        s[row] = acc / M[row][row];
    }
    return s;
}

constexpr int kAutoDigits = 120;

bool fuzzy_less(const BigComplex& a, const BigComplex& b, const BigReal& eps) {
    BigReal dr = a.re - b.re;
    if (abs(dr) > eps) return dr > BigReal::of(0L, a.digits());
    return a.im > b.im;
}

}  // namespace

FieldPtr rational_field() {
    static FieldPtr K = make_field({mpz_class(0), mpz_class(1)});
    return K;
}

FieldPtr make_field(std::vector<mpz_class> g) {
    g = primitive_part(std::move(g));
    if (g.size() < 2) throw domain_error("field polynomial must be nonconstant");
    static std::map<std::vector<mpz_class>, FieldPtr> registry;
    auto it = registry.find(g);
    if (it != registry.end()) return it->second;
    FieldPtr K(new NumberField(g));
    registry.emplace(std::move(g), K);
    return K;
}

const std::vector<BigComplex>& NumberField::roots(int digits) const {
    digits = std::max(digits, BigReal::min_digits);
    auto it = root_cache_.find(digits);
    if (it != root_cache_.end()) return it->second;
    std::vector<BigComplex> rs;
    if (degree() == 1) {
        mpq_class r0(-g_[0], g_[1]);
        r0.canonicalize();
        rs.push_back(BigComplex(q_to_real(r0, digits)));
    } else {
        rs = poly_roots(g_, digits);
        BigReal eps = pow10(-digits / 2, digits);
        std::sort(rs.begin(), rs.end(),
                  [&](const BigComplex& a, const BigComplex& b) { return fuzzy_less(a, b, eps); });
    }
    return root_cache_.emplace(digits, std::move(rs)).first->second;
}

const std::vector<std::vector<mpq_class>>& NumberField::automorphisms() const {
    if (!autos_.empty()) return autos_;
    const int d = degree();
    Poly ident{mpq_class(0), mpq_class(1)};
    if (d == 1) {
        autos_.push_back(ident);
        return autos_;
    }
    if (d == 2) {
        // The conjugate root is -g1/g2 - x.
        mpq_class s(-g_[1], g_[2]);
        s.canonicalize();
        autos_.push_back(ident);
        autos_.push_back(Poly{s, mpq_class(-1)});
        return autos_;
    }
    Poly g = to_qpoly(g_);
    for (int digits = kAutoDigits; digits <= 4 * kAutoDigits; digits *= 2) {
        std::vector<std::vector<mpq_class>> found{ident};
        const auto& R = roots(digits);
        BigReal eps = pow10(-digits / 2, digits);
        // Conjugate partner of each root.
        std::vector<int> cpart(d, -1);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (abs(R[i].re - R[j].re) < eps && abs(R[i].im + R[j].im) < eps) cpart[i] = j;
        std::vector<std::vector<BigComplex>> V(d, std::vector<BigComplex>(d, BigComplex(digits)));
        for (int i = 0; i < d; ++i) {
            V[i][0] = BigComplex(BigReal::of(1L, digits));
            for (int k = 1; k < d; ++k) V[i][k] = V[i][k - 1] * R[i];
        }
        for (int j = 1; j < d; ++j) {
            std::vector<int> pi(d, -1);
            pi[0] = j;
            std::vector<bool> used(d, false);
            used[j] = true;
            bool done = false;
            // Assign images to the remaining roots, respecting conjugation.
            auto consistent = [&](int i) {
                int ic = cpart[i];
                if (ic < 0 || pi[ic] < 0) return true;
                return pi[ic] == cpart[pi[i]];
            };
            std::function<void(int)> rec = [&](int i) {
                if (done) return;
                if (i == d) {
                    std::vector<BigComplex> y;
                    for (int r = 0; r < d; ++r) y.push_back(R[pi[r]]);
                    std::vector<BigComplex> s;
                    try {
                        s = solve_complex(V, y);
                    } catch (const precision_error&) {
                        return;
                    }
                    Poly sq(d);
                    for (int k = 0; k < d; ++k) {
                        if (abs(s[k].im) > eps) return;
                        mpq_class c;
                        if (!recognize_rational(s[k].re, 96, c)) return;
                        sq[k] = c;
                    }
                    ptrim(sq);
                    if (pdeg(compose_mod(sq, g, g)) >= 0) return;
                    found.push_back(sq);
                    done = true;
                    return;
                }
                if (pi[i] >= 0) { rec(i + 1); return; }
                for (int v = 0; v < d; ++v) {
                    if (used[v]) continue;
                    pi[i] = v;
                    used[v] = true;
                    if (consistent(i)) rec(i + 1);
                    used[v] = false;
                    pi[i] = -1;
                }
            };
            rec(1);
        }
        if (static_cast<int>(found.size()) == d) {
            autos_ = std::move(found);
            return autos_;
        }
    }
    throw verify_error("automorphism group of " + str() + " not recognized (field must be Galois over Q)");
}

int NumberField::conj_automorphism() const {
    if (conj_auto_ >= 0) return conj_auto_;
    const auto& A = automorphisms();
    const auto& R = roots(kAutoDigits);
    BigReal eps = pow10(-kAutoDigits / 2, kAutoDigits);
    if (degree() == 1 || abs(R[0].im) < eps) {
        conj_auto_ = 0;
        return 0;
    }
    BigComplex target = mdet::conj(R[0]);
    for (size_t k = 0; k < A.size(); ++k) {
        BigComplex im = eval_qpoly(A[k], R[0]);
        if (abs(im.re - target.re) < eps && abs(im.im - target.im) < eps) {
            conj_auto_ = static_cast<int>(k);
            return conj_auto_;
        }
    }
    throw verify_error("complex conjugation not found among automorphisms of " + str());
}

std::string NumberField::str() const { return "Q[x]/(" + poly_str(g_) + ")"; }

FieldElem::FieldElem() : FieldElem(rational_field()) {}

FieldElem::FieldElem(FieldPtr K) : K_(std::move(K)), c_(K_->degree(), mpq_class(0)) {}

FieldElem::FieldElem(FieldPtr K, std::vector<mpq_class> coords) : K_(std::move(K)), c_(std::move(coords)) {
    if (static_cast<int>(c_.size()) != K_->degree())
        throw domain_error("coordinate vector does not match field degree");
}

FieldElem FieldElem::of(const mpq_class& x, FieldPtr K) {
    FieldElem e(std::move(K));
    e.c_[0] = x;
    return e;
}

FieldElem FieldElem::gen(FieldPtr K) {
    if (K->degree() == 1) {
        mpq_class r0(-K->minpoly()[0], K->minpoly()[1]);
        r0.canonicalize();
        return of(r0, K);
    }
    FieldElem e(std::move(K));
    e.c_[1] = 1;
    return e;
}

bool FieldElem::is_zero() const {
    for (const auto& c : c_)
        if (c != 0) return false;
    return true;
}

bool FieldElem::is_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

mpq_class FieldElem::rat() const {
    if (!is_rational()) throw domain_error("field element is not rational: " + str());
    return c_[0];
}

BigComplex FieldElem::eval(int digits) const {
    if (K_->degree() == 1) return BigComplex(q_to_real(c_[0], digits));
    return eval_qpoly(Poly(c_.begin(), c_.end()), K_->roots(digits)[0]);
}

FieldElem FieldElem::conj() const {
    if (K_->degree() == 1) return *this;
    return apply_automorphism(*this, K_->conj_automorphism());
}

FieldElem FieldElem::inverse() const {
    if (is_zero()) throw domain_error("inverse of zero field element");
    if (K_->degree() == 1) return of(mpq_class(1) / c_[0], K_);
    Poly g = to_qpoly(K_->minpoly());
    Poly r0 = g, r1(c_.begin(), c_.end());
    ptrim(r1);
    Poly s0, s1{mpq_class(1)};
    while (pdeg(r1) > 0) {
        Poly q, r;
        pdivmod(r0, r1, q, r);
        Poly s2 = psub(s0, pmul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (pdeg(r1) != 0) throw domain_error("element not invertible");
    Poly u = s1;
    for (auto& c : u) c /= r1[0];
    u = pmod(u, g);
    u.resize(K_->degree(), mpq_class(0));
    return FieldElem(K_, std::move(u));
}

FieldElem FieldElem::operator-() const {
    FieldElem r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

FieldElem& FieldElem::operator+=(const FieldElem& o) {
    if (K_ != o.K_) throw domain_error("field mismatch in arithmetic");
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

FieldElem& FieldElem::operator-=(const FieldElem& o) {
    if (K_ != o.K_) throw domain_error("field mismatch in arithmetic");
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

FieldElem& FieldElem::operator*=(const FieldElem& o) {
    if (K_ != o.K_) throw domain_error("field mismatch in arithmetic");
    if (K_->degree() == 1) {
        c_[0] *= o.c_[0];
        return *this;
    }
    Poly p = pmul(Poly(c_.begin(), c_.end()), Poly(o.c_.begin(), o.c_.end()));
    p = pmod(p, to_qpoly(K_->minpoly()));
    p.resize(K_->degree(), mpq_class(0));
    c_.assign(p.begin(), p.end());
    return *this;
}

FieldElem& FieldElem::operator/=(const FieldElem& o) { return *this *= o.inverse(); }

FieldElem FieldElem::operator*(const mpq_class& x) const {
    FieldElem r = *this;
    for (auto& c : r.c_) c *= x;
    return r;
}

bool FieldElem::operator==(const FieldElem& o) const { return K_ == o.K_ && c_ == o.c_; }

std::string FieldElem::str() const {
    if (is_rational()) return c_[0].get_str();
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < c_.size(); ++i) {
        if (i) os << ", ";
        os << c_[i].get_str();
    }
    os << ")";
    return os.str();
}

FieldElem apply_automorphism(const FieldElem& x, int k) {
    const auto& A = x.field()->automorphisms();
    if (k < 0 || k >= static_cast<int>(A.size())) throw domain_error("automorphism index out of range");
    if (k == 0) return x;
    Poly img = compose_mod(A[k], Poly(x.coords().begin(), x.coords().end()),
                           to_qpoly(x.field()->minpoly()));
    img.resize(x.field()->degree(), mpq_class(0));
    return FieldElem(x.field(), std::vector<mpq_class>(img.begin(), img.end()));
}

namespace {

// Embedding of K into L as a polynomial e with g_K(e) = 0 mod g_L and
// e(root_L) = root_K numerically.
const Poly& embedding_map(const FieldPtr& K, const FieldPtr& L) {
    static std::map<std::pair<const NumberField*, const NumberField*>, Poly> cache;
    auto key = std::make_pair(K.get(), L.get());
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    const int dK = K->degree(), dL = L->degree();
    if (dK > dL || dL % dK != 0)
        throw domain_error("no embedding of " + K->str() + " into " + L->str());
    Poly gK = to_qpoly(K->minpoly()), gL = to_qpoly(L->minpoly());
    const int mult = dL / dK;

    for (int digits = kAutoDigits; digits <= 4 * kAutoDigits; digits *= 2) {
        const auto& RK = K->roots(digits);
        const auto& RL = L->roots(digits);
        BigReal eps = pow10(-digits / 2, digits);
        std::vector<int> cpartL(dL, -1), cpartK(dK, -1);
        for (int i = 0; i < dL; ++i)
            for (int j = 0; j < dL; ++j)
                if (abs(RL[i].re - RL[j].re) < eps && abs(RL[i].im + RL[j].im) < eps) cpartL[i] = j;
        for (int i = 0; i < dK; ++i)
            for (int j = 0; j < dK; ++j)
                if (abs(RK[i].re - RK[j].re) < eps && abs(RK[i].im + RK[j].im) < eps) cpartK[i] = j;

        std::vector<std::vector<BigComplex>> V(dL, std::vector<BigComplex>(dL, BigComplex(digits)));
        for (int i = 0; i < dL; ++i) {
            V[i][0] = BigComplex(BigReal::of(1L, digits));
            for (int k = 1; k < dL; ++k) V[i][k] = V[i][k - 1] * RL[i];
        }

        std::vector<int> t(dL, -1), count(dK, 0);
        t[0] = 0;
        count[0] = 1;
        Poly result;
        auto consistent = [&](int i) {
            int ic = cpartL[i];
            if (ic < 0 || t[ic] < 0) return true;
            return t[ic] == cpartK[t[i]];
        };
        std::function<void(int)> rec = [&](int i) {
            if (!result.empty()) return;
            if (i == dL) {
                std::vector<BigComplex> y;
                for (int r = 0; r < dL; ++r) y.push_back(RK[t[r]]);
                std::vector<BigComplex> s;
                try {
                    s = solve_complex(V, y);
                } catch (const precision_error&) {
                    return;
                }
                Poly e(dL);
                for (int k = 0; k < dL; ++k) {
                    if (abs(s[k].im) > eps) return;
                    mpq_class c;
                    if (!recognize_rational(s[k].re, 96, c)) return;
                    e[k] = c;
                }
                ptrim(e);
                if (pdeg(compose_mod(e, gK, gL)) >= 0) return;
                result = e;
                return;
            }
            if (t[i] >= 0) { rec(i + 1); return; }
            for (int v = 0; v < dK; ++v) {
                if (count[v] == mult) continue;
                t[i] = v;
                ++count[v];
                if (consistent(i)) rec(i + 1);
                --count[v];
                t[i] = -1;
            }
        };
        rec(1);
        if (!result.empty()) return cache.emplace(key, std::move(result)).first->second;
    }
    throw domain_error("no value-preserving embedding of " + K->str() + " into " + L->str());
}

}  // namespace

FieldElem lift(const FieldElem& x, const FieldPtr& L) {
    if (x.field() == L) return x;
    if (x.field()->degree() == 1) return FieldElem::of(x.coords()[0], L);
    const Poly& e = embedding_map(x.field(), L);
    Poly img = compose_mod(e, Poly(x.coords().begin(), x.coords().end()), to_qpoly(L->minpoly()));
    img.resize(L->degree(), mpq_class(0));
    return FieldElem(L, std::vector<mpq_class>(img.begin(), img.end()));
}

namespace {

// Exact resultant Res_y(g_A(x - lambda*y), g_B(y)) by evaluation and
// Lagrange interpolation in x.
std::vector<mpz_class> compositum_resultant(const std::vector<mpz_class>& gA,
                                            const std::vector<mpz_class>& gB, long lambda) {
    const int dA = static_cast<int>(gA.size()) - 1, dB = static_cast<int>(gB.size()) - 1;
    const int D = dA * dB;
    auto sylvester_det = [&](const mpq_class& x0) {
        // g_A(x0 - lambda*y) as a polynomial in y.
        Poly p(dA + 1, mpq_class(0));
        Poly base{x0}, lin{x0, mpq_class(-lambda)};
        Poly pw{mpq_class(1)};
        for (int m = 0; m <= dA; ++m) {
            for (int k = 0; k <= pdeg(pw); ++k) p[k] += mpq_class(gA[m]) * pw[k];
            pw = pmul(pw, lin);
        }
        int n = dA + dB;
        std::vector<std::vector<mpq_class>> M(n, std::vector<mpq_class>(n, mpq_class(0)));
        for (int r = 0; r < dB; ++r)
            for (int k = 0; k <= dA; ++k) M[r][r + dA - k] = p.size() > size_t(k) ? p[k] : mpq_class(0);
        for (int r = 0; r < dA; ++r)
            for (int k = 0; k <= dB; ++k) M[dB + r][r + dB - k] = mpq_class(gB[k]);
        mpq_class det(1);
        for (int col = 0; col < n; ++col) {
            int piv = -1;
            for (int r = col; r < n; ++r)
                if (M[r][col] != 0) { piv = r; break; }
            if (piv < 0) return mpq_class(0);
            if (piv != col) { std::swap(M[piv], M[col]); det = -det; }
            det *= M[col][col];
            for (int r = col + 1; r < n; ++r) {
                mpq_class f = M[r][col] / M[col][col];
                for (int k = col; k < n; ++k) M[r][k] -= f * M[col][k];
            }
        }
        return det;
    };
    // Lagrange interpolation through x = 0..D.
    std::vector<mpq_class> vals(D + 1);
    for (int i = 0; i <= D; ++i) vals[i] = sylvester_det(mpq_class(i));
    Poly acc;
    for (int i = 0; i <= D; ++i) {
        Poly term{mpq_class(1)};
        mpq_class denom(1);
        for (int j = 0; j <= D; ++j) {
            if (j == i) continue;
            term = pmul(term, Poly{mpq_class(-j), mpq_class(1)});
            denom *= mpq_class(i - j);
        }
        for (auto& c : term) c *= vals[i] / denom;
        acc = padd(acc, term);
    }
    return clear_denominators(acc);
}

}  // namespace

FieldPtr compositum(const FieldPtr& A, const FieldPtr& B) {
    if (A == B || B->degree() == 1) return A;
    if (A->degree() == 1) return B;
    try {
        lift(FieldElem::gen(A), B);
        return B;
    } catch (const domain_error&) {}
    try {
        lift(FieldElem::gen(B), A);
        return A;
    } catch (const domain_error&) {}
    for (long lambda = 1; lambda <= 8; ++lambda) {
        std::vector<mpz_class> res = compositum_resultant(A->minpoly(), B->minpoly(), lambda);
        const int digits = 150;
        BigComplex theta = A->roots(digits)[0] + B->roots(digits)[0] * BigReal::of(lambda, digits);
        std::vector<std::vector<mpz_class>> factors = factor_rational_poly(res);
        BigReal eps = pow10(-digits / 3, digits);
        for (const auto& h : factors) {
            if (static_cast<int>(h.size()) - 1 < std::max(A->degree(), B->degree())) continue;
            BigComplex v = eval_poly(h, theta);
            BigReal scale = BigReal::of(1L, digits);
            for (const auto& c : h) scale = scale + abs(BigReal::of(c, digits));
            if (abs(v) / scale > eps) continue;
            try {
                FieldPtr C = make_field(h);
                lift(FieldElem::gen(A), C);
                lift(FieldElem::gen(B), C);
                return C;
            } catch (const domain_error&) {}
        }
    }
    throw domain_error("no common overfield found for " + A->str() + " and " + B->str());
}

bool recognize_rational(const BigReal& x, long max_den_bits, mpq_class& out) {
    if (x.is_nan() || x.is_inf()) return false;
    mpf_class f(0, mpfr_get_prec(x.raw()));
    mpfr_get_f(f.get_mpf_t(), x.raw(), MPFR_RNDN);
    mpq_class t(f);
    mpz_class tolden;
    mpz_ui_pow_ui(tolden.get_mpz_t(), 10, std::max(x.digits() - 8, 6));
    mpq_class tol(1, tolden);
    mpq_class bound = abs(t) > 1 ? tol * abs(t) : tol;

    mpz_class p0(1), q0(0), p1, q1(1);
    mpz_class a0;
    mpz_fdiv_q(a0.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
    p1 = a0;
    mpq_class rem = t - mpq_class(a0);
    for (int iter = 0; iter < 400; ++iter) {
        mpq_class approx(p1, q1);
        approx.canonicalize();
        if (abs(t - approx) <= bound) {
            if (mpz_sizeinbase(approx.get_den().get_mpz_t(), 2) > static_cast<size_t>(max_den_bits))
                return false;
            out = approx;
            return true;
        }
        if (rem == 0) return false;
        rem = 1 / rem;
        mpz_class a;
        mpz_fdiv_q(a.get_mpz_t(), rem.get_num_mpz_t(), rem.get_den_mpz_t());
        rem -= mpq_class(a);
        mpz_class p2 = a * p1 + p0, q2 = a * q1 + q0;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        if (mpz_sizeinbase(q1.get_mpz_t(), 2) > static_cast<size_t>(max_den_bits) + 16) return false;
    }
    return false;
}

std::vector<std::vector<mpz_class>> factor_rational_poly(std::vector<mpz_class> p) {
    std::vector<std::vector<mpz_class>> out;
    p = primitive_part(std::move(p));
    if (static_cast<int>(p.size()) - 1 < 1) return out;

    // Squarefree part via gcd with the derivative over Q.
    Poly a = to_qpoly(p), b = to_qpoly(poly_derivative(p));
    while (pdeg(b) >= 0) {
        Poly r = pmod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    Poly sf;
    {
        Poly q, r;
        pdivmod(to_qpoly(p), a, q, r);
        sf = q;
    }
    std::vector<mpz_class> s = primitive_part(clear_denominators(sf));

    int degs = static_cast<int>(s.size()) - 1;
    std::vector<std::vector<mpz_class>> irred;
    if (degs == 1) {
        irred.push_back(s);
    } else if (degs > 1) {
        long cb = 0;
        for (const auto& c : s) cb = std::max<long>(cb, mpz_sizeinbase(c.get_mpz_t(), 2));
        int digits = std::max<int>(80, static_cast<int>(1.2 * cb) + 40);
        std::vector<BigComplex> roots = poly_roots(s, digits);
        BigReal eps = pow10(-digits / 2, digits);
        std::vector<int> cpart(degs, -1);
        for (int i = 0; i < degs; ++i)
            for (int j = 0; j < degs; ++j)
                if (abs(roots[i].re - roots[j].re) < eps && abs(roots[i].im + roots[j].im) < eps)
                    cpart[i] = j;
        std::vector<bool> taken(degs, false);
        Poly srem = to_qpoly(s);
        while (pdeg(srem) > 0) {
            bool progressed = false;
            for (int size = 1; size <= pdeg(srem) && !progressed; ++size) {
                // Subsets of the unused roots, smallest first, conjugation-closed.
                std::vector<int> avail;
                for (int i = 0; i < degs; ++i)
                    if (!taken[i]) avail.push_back(i);
                int n = static_cast<int>(avail.size());
                for (unsigned long mask = 1; mask < (1ul << n) && !progressed; ++mask) {
                    if (__builtin_popcountl(mask) != size) continue;
                    bool closed = true;
                    for (int bi = 0; bi < n && closed; ++bi) {
                        if (!(mask >> bi & 1)) continue;
                        int cp = cpart[avail[bi]];
                        if (cp < 0) continue;
                        bool found = false;
                        for (int bj = 0; bj < n; ++bj)
                            if ((mask >> bj & 1) && avail[bj] == cp) found = true;
                        if (!found) closed = false;
                    }
                    if (!closed) continue;
                    std::vector<BigComplex> prod{BigComplex(BigReal::of(1L, digits))};
                    for (int bi = 0; bi < n; ++bi) {
                        if (!(mask >> bi & 1)) continue;
                        const BigComplex& r = roots[avail[bi]];
                        std::vector<BigComplex> next(prod.size() + 1, BigComplex(digits));
                        for (size_t k = 0; k < prod.size(); ++k) {
                            next[k + 1] = next[k + 1] + prod[k];
                            next[k] = next[k] - prod[k] * r;
                        }
                        prod = std::move(next);
                    }
                    Poly qc(prod.size());
                    bool ok = true;
                    for (size_t k = 0; k < prod.size() && ok; ++k) {
                        if (abs(prod[k].im) > eps) { ok = false; break; }
                        mpq_class c;
                        if (!recognize_rational(prod[k].re, 2 * cb + 32, c)) { ok = false; break; }
                        qc[k] = c;
                    }
                    if (!ok) continue;
                    std::vector<mpz_class> qz = primitive_part(clear_denominators(qc));
                    Poly quot, rem;
                    pdivmod(srem, to_qpoly(qz), quot, rem);
                    if (pdeg(rem) >= 0) continue;
                    irred.push_back(qz);
                    srem = quot;
                    for (int bi = 0; bi < n; ++bi)
                        if (mask >> bi & 1) taken[avail[bi]] = true;
                    progressed = true;
                }
            }
            if (!progressed)
                throw verify_error("polynomial factorization failed for " + poly_str(p));
        }
    }

    // Multiplicities against the original polynomial.
    Poly remp = to_qpoly(p);
    for (const auto& q : irred) {
        Poly qq = to_qpoly(q);
        while (true) {
            Poly quot, rem;
            pdivmod(remp, qq, quot, rem);
            if (pdeg(rem) >= 0) break;
            out.push_back(q);
            remp = quot;
        }
    }
    return out;
}

}  // namespace mdet
