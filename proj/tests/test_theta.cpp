#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include <cstdlib>
#include "mdet/errors.hpp"
#include "mdet/theta.hpp"

using namespace mdet;

namespace {

FieldElem rat(long n) { return FieldElem::of(mpq_class(n), rational_field()); }

QExpansion sparse_form(const char* label, long level, long trunc,
                       std::initializer_list<std::pair<long, long>> entries) {
    QExpansion f;
    f.label = label;
    f.level = level;
    f.truncation = trunc;
    for (auto& [n, c] : entries) f.set(n, rat(c));
    return f;
}

// q - 2q^5 - 3q^9 + 6q^13 + 2q^17 - q^25 - 10q^29 + ...
QExpansion f32aa1(long trunc = 40) {
    return sparse_form("f32aa1", 32, trunc,
                       {{1, 1}, {5, -2}, {9, -3}, {13, 6}, {17, 2}, {25, -1}, {29, -10}, {37, -2}});
}

// q + 2q^5 - 3q^9 - 6q^13 + 2q^17 - q^25 + 10q^29 + ...
QExpansion f64aa1(long trunc = 80) {
    return sparse_form("f64aa1", 64, trunc,
                       {{1, 1},  {5, 2},    {9, -3},  {13, -6},  {17, 2},  {25, -1}, {29, 10},
                        {37, 2}, {41, 10},  {45, -6}, {49, -7},  {53, -14}, {61, 10}, {65, -12},
                        {73, -6}});
}

}  // namespace

TEST_CASE("kronecker characters") {
    int chi4[] = {0, 1, 0, -1, 0, 1, 0, -1};
    for (long n = 0; n < 8; ++n) CHECK(kronecker_chi(-4, n) == chi4[n]);
    int chi3[] = {0, 1, -1, 0, 1, -1, 0};
    for (long n = 0; n < 7; ++n) CHECK(kronecker_chi(-3, n) == chi3[n]);
    CHECK(kronecker_chi(-4, -1) == -1);
    CHECK(kronecker_chi(-3, -2) == 1);
}

TEST_CASE("theta parameters") {
    ThetaParams t = theta_params(QForm{16, 0, 1}, Family::P);
    CHECK(t.l == 16);
    CHECK(t.A[0][0] == 2);
    CHECK(t.A[0][1] == 0);
    CHECK(t.A[1][1] == 32);
    CHECK(t.D == 16);
    CHECK(t.N == 64);

    t = theta_params(QForm{16, 16, 5}, Family::P);
    CHECK(t.l == 16);
    CHECK(t.A[0][0] == 10);
    CHECK(t.A[0][1] == 16);
    CHECK(t.A[1][1] == 32);
    CHECK(t.D == 16);
    CHECK(t.N == 64);

    t = theta_params(QForm{16, 4, 1}, Family::P);
    CHECK(t.l == 16);
    CHECK(t.D == 12);
    CHECK(t.N == 48);

    t = theta_params(QForm{12, 4, 1}, Family::P);
    CHECK(t.l == 4);
    CHECK(t.D == 128);
    CHECK(t.N == 128);

    t = theta_params(QForm{1, -1, 2}, Family::P);
    CHECK(t.l == 1);
    CHECK(t.D == 448);
    CHECK(t.N == 112);

    t = theta_params(QForm{1, 0, 1}, Family::Q);
    CHECK(t.l == 1);
    CHECK(t.A[0][0] == 18);
    CHECK(t.A[1][1] == 18);
    CHECK(t.D == 108);
    CHECK(t.N == 36);

    t = theta_params(QForm{3, 0, 2}, Family::Q);
    CHECK(t.l == 3);
    CHECK(t.D == 72);
    CHECK(t.N == 72);

    t = theta_params(QForm{3, -3, 2}, Family::Q);
    CHECK(t.l == 3);
    CHECK(t.D == 45);
    CHECK(t.N == 45);

    t = theta_params(QForm{3, -3, 13}, Family::Q);
    CHECK(t.l == 3);
    CHECK(t.D == 441);
    CHECK(t.N == 441);

    t = theta_params(QForm{12, -12, 7}, Family::Q);
    CHECK(t.D == 576);
    CHECK(t.N == 576);

    CHECK_THROWS_AS(theta_params(QForm{-1, 0, 1}, Family::P), domain_error);
    CHECK_THROWS_AS(theta_params(QForm{1, 4, 1}, Family::P), domain_error);
}

TEST_CASE("theta series at level 64") {
    QExpansion t1 = theta_series(QForm{16, 0, 1}, Family::P, 16);
    CHECK(t1.level == 64);
    CHECK(t1.neben_disc == 16);
    CHECK(t1.truncation == 16);
    long want1[][2] = {{1, 32}, {2, 64}, {5, 64}, {9, -96}, {10, -128}, {13, -192}};
    CHECK(t1.coeffs.size() == 6);
    for (auto& [n, c] : want1) CHECK(t1.a(n).rat() == c);

    QExpansion t2 = theta_series(QForm{16, 16, 5}, Family::P, 16);
    long want2[][2] = {{1, 32}, {2, -64}, {5, 64}, {9, -96}, {10, 128}, {13, -192}};
    CHECK(t2.coeffs.size() == 6);
    for (auto& [n, c] : want2) CHECK(t2.a(n).rat() == c);
}

TEST_CASE("theta series leading weight, family Q") {
    QExpansion t = theta_series(QForm{1, 0, 1}, Family::Q, 12);
    CHECK(t.level == 36);
    CHECK(t.a(1).rat() == 4);
}

TEST_CASE("theta coefficients grow at most linearly") {
    QForm forms[] = {{16, 0, 1}, {1, -1, 2}, {12, 4, 1}};
    for (const auto& f : forms) {
        QExpansion t = theta_series(f, Family::P, 300);
        mpq_class cap = 48 * (f.a + abs(f.b) + f.c);
        for (const auto& [n, c] : t.coeffs) CHECK(abs(c.rat()) <= cap * n);
    }
    QForm qforms[] = {{1, 0, 1}, {3, -3, 13}};
    for (const auto& f : qforms) {
        QExpansion t = theta_series(f, Family::Q, 300);
        mpq_class cap = 48 * (f.a + abs(f.b) + f.c);
        for (const auto& [n, c] : t.coeffs) CHECK(abs(c.rat()) <= cap * n);
    }
}

TEST_CASE("sturm bounds") {
    CHECK(sturm_bound(36) == 12);
    CHECK(sturm_bound(48) == 16);
    CHECK(sturm_bound(64) == 16);
    CHECK(sturm_bound(112) == 32);
    CHECK(sturm_bound(192) == 64);
    CHECK(sturm_bound(441) == 112);
    CHECK(sturm_bound(576) == 192);
    CHECK(sturm_bound(1665) == 456);
    CHECK(sturm_bound(3712) == 960);
}

TEST_CASE("oldform embedding and Hecke action") {
    QExpansion f = f64aa1();
    QExpansion v2 = embed_oldform(f, 2);
    CHECK(v2.level == 128);
    CHECK(v2.truncation == 160);
    CHECK(v2.a(2).rat() == 1);
    CHECK(v2.a(10).rat() == 2);
    CHECK(v2.a(1).is_zero());

    // f is an eigenform: T_5 f = 2 f.
    QExpansion t5 = hecke_Tp(f, 5);
    CHECK(t5.truncation == 16);
    for (long n = 1; n <= 16; ++n) CHECK(t5.a(n) == f.a(n) * mpq_class(2));

    // a_3 = 0, so T_3 kills f: a_3(T_3 f) = a_9 + 3 chi(3) a_1 = -3 + 3 = 0.
    QExpansion t3 = hecke_Tp(f, 3);
    for (const auto& [n, c] : t3.coeffs) CHECK(c.is_zero());

    // chi(p) = 0 branch: U_2 on the level-64 theta just reindexes.
    QExpansion theta = theta_series(QForm{16, 0, 1}, Family::P, 16);
    QExpansion u2 = hecke_Tp(theta, 2);
    CHECK(u2.a(1).rat() == 64);
    CHECK(u2.a(5).rat() == -128);

    CHECK_THROWS_AS(hecke_Tp(f64aa1(10), 11), truncation_error);
    CHECK_THROWS_AS(hecke_Tp(f, 4), domain_error);
}

TEST_CASE("decompose recovers the level-64 theta over its eigenbasis") {
    QExpansion target = theta_series(QForm{16, 0, 1}, Family::P, 24);
    QExpansion v2 = embed_oldform(f32aa1(), 2);
    v2.neben_disc = 16;
    QExpansion f64 = f64aa1();
    f64.neben_disc = 16;
    Decomposition d = decompose(target, {v2, f64});
    REQUIRE(d.ok);
    CHECK(d.verified_through == 24);
    REQUIRE(d.coords.size() == 2);
    CHECK(d.coords[0].rat() == 64);
    CHECK(d.coords[1].rat() == 32);
}

TEST_CASE("decompose certifies failure with a witness") {
    QExpansion target = theta_series(QForm{16, 0, 1}, Family::P, 24);
    target.set(19, rat(1));
    QExpansion v2 = embed_oldform(f32aa1(), 2);
    v2.neben_disc = 16;
    QExpansion f64 = f64aa1();
    f64.neben_disc = 16;
    Decomposition d = decompose(target, {v2, f64});
    CHECK(!d.ok);
    CHECK(d.witness == 19);

    CHECK_THROWS_AS(decompose(theta_series(QForm{16, 0, 1}, Family::P, 10), {v2, f64}),
                    truncation_error);
    CHECK_THROWS_AS(decompose(target, {f32aa1(), f64}), domain_error);
}

TEST_CASE("random members of the span decompose with spot checks past the solve range") {
    long X = 400;
    QExpansion t1 = theta_series(QForm{16, 0, 1}, Family::P, X);
    QExpansion t2 = theta_series(QForm{16, 16, 5}, Family::P, X);
    std::srand(916);
    long B = sturm_bound(64);
    for (int trial = 0; trial < 5; ++trial) {
        mpq_class c1(std::rand() % 19 - 9, 1 + std::rand() % 4);
        mpq_class c2(std::rand() % 19 - 9, 1 + std::rand() % 4);
        c1.canonicalize();
        c2.canonicalize();
        QExpansion mix = qexp_add(qexp_scale(t1, FieldElem::of(c1, rational_field())),
                                  qexp_scale(t2, FieldElem::of(c2, rational_field())));
        Decomposition d = decompose(mix, {t1, t2});
        REQUIRE(d.ok);
        CHECK(d.coords[0].rat() == c1);
        CHECK(d.coords[1].rat() == c2);
        CHECK(d.verified_through == X);
        for (int s = 0; s < 20; ++s) {
            long n = B + 1 + std::rand() % (3 * B);
            FieldElem lhs = mix.coeffs.count(n) ? mix.coeffs.at(n) : FieldElem(mix.field);
            FieldElem rhs = t1.a(n) * c1 + t2.a(n) * c2;
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("level-64 span splits into the known eigenforms") {
    long X = 400;
    std::vector<QExpansion> span{theta_series(QForm{16, 0, 1}, Family::P, X),
                                 theta_series(QForm{16, 16, 5}, Family::P, X)};
    auto eig = eigenform_split(span);
    REQUIRE(eig.size() == 2);
    for (auto& e : eig) CHECK(e.field->degree() == 1);

    // One direction is f32aa1(2 tau), the other f64aa1.
    ResolvedNewform oldf = resolve_newform(eig[0].first_nonzero() == 2 ? eig[0] : eig[1]);
    ResolvedNewform newf = resolve_newform(eig[0].first_nonzero() == 2 ? eig[1] : eig[0]);

    CHECK(oldf.scale == 2);
    CHECK(oldf.scale_prime == 2);
    CHECK(oldf.form.level == 32);
    REQUIRE(oldf.weights.size() == 1);
    CHECK(oldf.weights[0].rat() == 1);
    QExpansion ref32 = f32aa1();
    for (long n = 1; n <= 37; ++n) CHECK(oldf.form.a(n) == ref32.a(n));

    CHECK(newf.scale == 1);
    CHECK(newf.form.level == 64);
    QExpansion ref64 = f64aa1();
    for (long n = 1; n <= 73; ++n) CHECK(newf.form.a(n) == ref64.a(n));
}

TEST_CASE("explicit probe dividing the level fails loudly on a mixed span") {
    long X = 400;
    std::vector<QExpansion> span{theta_series(QForm{16, 0, 1}, Family::P, X),
                                 theta_series(QForm{16, 16, 5}, Family::P, X)};
    CHECK_THROWS_AS(eigenform_split(span, {2}), verify_error);
    CHECK_THROWS_AS(eigenform_split(span, {5, 193}), truncation_error);
}

TEST_CASE("level-36 span: conjugate eigenforms over an imaginary quadratic field") {
    long X = 19 * (12 + 8) + 40;
    QExpansion t1 = theta_series(QForm{1, 0, 1}, Family::Q, X);
    QExpansion t2 = theta_series(QForm{2, 2, 1}, Family::Q, X);
    CHECK(t1.level == 36);
    CHECK(t2.level == 36);
    auto eig = eigenform_split({t1, t2});
    REQUIRE(eig.size() == 2);
    CHECK(eig[0].field->degree() == 2);
    CHECK(eig[1].field->degree() == 2);

    // theta[1,0,1] = 2(f1 + f2), theta[2,2,1] = 2 i sqrt2 (f1 - f2).
    Decomposition d1 = decompose(t1, eig);
    REQUIRE(d1.ok);
    CHECK(d1.coords[0].is_rational());
    CHECK(d1.coords[0].rat() == 2);
    CHECK(d1.coords[1].rat() == 2);

    Decomposition d2 = decompose(t2, eig);
    REQUIRE(d2.ok);
    CHECK(d2.coords[0] == -d2.coords[1]);
    FieldElem sq = d2.coords[0] * d2.coords[0];
    CHECK(sq.is_rational());
    CHECK(sq.rat() == -8);

    // Both are genuinely new at level 36.
    for (auto& e : eig) {
        ResolvedNewform rn = resolve_newform(e);
        CHECK(rn.scale == 1);
        CHECK(rn.weights.size() == 1);
        CHECK(rn.form.level == 36);
    }
}

TEST_CASE("level-441 span: two rational newform directions") {
    long B = sturm_bound(441);
    long X = 19 * (B + 8);
    QExpansion ta = theta_series(QForm{3, -3, 13}, Family::Q, X);
    QExpansion tb = theta_series(QForm{39, 3, 1}, Family::Q, X);
    CHECK(ta.level == 441);
    CHECK(tb.level == 441);
    auto eig = eigenform_split({ta, tb});
    REQUIRE(eig.size() == 2);
    CHECK(eig[0].field->degree() == 1);
    CHECK(eig[1].field->degree() == 1);

    // theta[3,-3,13] = 6(f + g), theta[39,3,1] = 21(-f + g).
    Decomposition da = decompose(ta, eig);
    Decomposition db = decompose(tb, eig);
    REQUIRE(da.ok);
    REQUIRE(db.ok);
    for (int i = 0; i < 2; ++i) {
        CHECK(da.coords[i].rat() == 6);
        CHECK(abs(db.coords[i].rat()) == 21);
    }
    CHECK(db.coords[0].rat() + db.coords[1].rat() == 0);
}

TEST_CASE("level-112 span: non-semisimple oldform tower falls back to ingestion") {
    long B = sturm_bound(112);
    long X = 11 * 19 * (B + 8);
    QExpansion ta = theta_series(QForm{32, 4, 1}, Family::P, X);
    QExpansion tb = theta_series(QForm{1, -1, 2}, Family::P, X);
    CHECK(ta.level == 112);
    CHECK(tb.level == 112);

    // The two-theta span is not Hecke-stable: its eigencomponents mix V_1,
    // V_2 and V_4 embeddings of a level-28 conjugate pair.
    CHECK_THROWS_AS(eigenform_split({ta, tb}), verify_error);
    // Closing under T_11 does not help: U_2 acts on the tower by a nilpotent
    // Jordan block, so no probe has a squarefree characteristic polynomial.
    std::vector<QExpansion> closure{ta, tb, hecke_Tp(ta, 11), hecke_Tp(tb, 11)};
    CHECK_THROWS_AS(eigenform_split(closure), verify_error);

    // Ingested level-28 pair, a_2 = (-1 - i sqrt7)/2 =: w.
    FieldPtr K = make_field({2, 1, 1});
    FieldElem w = FieldElem::gen(K);
    long fix[][3] = {{1, 1, 0},   {2, 0, 1},   {4, -2, -1}, {7, -1, -2}, {8, 2, -1},
                     {9, -3, 0},  {11, 2, 4},  {14, 4, 1},  {16, 2, 3},  {18, 0, -3},
                     {22, -8, -2}, {23, -2, -4}, {25, 5, 0}, {28, -2, 3}, {29, -2, 0},
                     {32, -6, -1}, {36, 6, 3},  {37, 6, 0},  {43, 2, 4},  {44, 4, -6},
                     {46, 8, 2}};
    QExpansion f1;
    f1.label = "f28da1";
    f1.level = 28;
    f1.neben_disc = 28;
    f1.truncation = 48;
    for (auto& [n, x, y] : fix) f1.set(n, FieldElem::of(mpq_class(x), K) + w * mpq_class(y));
    QExpansion f2 = f1.conj();
    f2.label = "f28da2";

    FieldElem a7sq = f1.a(7) * f1.a(7);
    CHECK(a7sq.rat() == -7);
    FieldElem a11 = f1.a(11);
    CHECK((a11 * a11).rat() == -28);
    CHECK(f1.a(25).rat() == 5);
    QExpansion t11 = hecke_Tp(f1, 11);
    for (long n = 1; n <= 4; ++n) CHECK(t11.a(n) == f1.a(n) * a11);

    std::vector<QExpansion> emb;
    for (long d : {1L, 2L, 4L}) {
        for (const QExpansion* f : {&f1, &f2}) {
            QExpansion e = embed_oldform(*f, d);
            e.level = 112;
            emb.push_back(std::move(e));
        }
    }

    Decomposition db = decompose(tb, emb);
    REQUIRE(db.ok);
    CHECK(db.verified_through == 48);
    CHECK(db.coords[0].rat() == 1);
    CHECK(db.coords[1].rat() == 1);
    // (1 + i sqrt7)/2 = -w on V_2 f1, conjugate on V_2 f2.
    CHECK(db.coords[2] == -w);
    CHECK(db.coords[3] == -w.conj());
    CHECK(db.coords[4].is_zero());
    CHECK(db.coords[5].is_zero());

    Decomposition da = decompose(ta, emb);
    REQUIRE(da.ok);
    CHECK(da.coords[0].is_zero());
    CHECK(da.coords[1].is_zero());
    FieldElem c1 = FieldElem::of(mpq_class(64), K) + w * mpq_class(16);
    FieldElem d1 = FieldElem::of(mpq_class(64), K) + w * mpq_class(-96);
    CHECK(da.coords[2] == c1);
    CHECK(da.coords[3] == c1.conj());
    CHECK(da.coords[4] == d1);
    CHECK(da.coords[5] == d1.conj());
}

TEST_CASE("level-576 span: mixed oldform weights across two scales") {
    long B = sturm_bound(576);
    long X = 19 * (B + 8);
    std::vector<QExpansion> span{
        theta_series(QForm{12, -12, 7}, Family::Q, X), theta_series(QForm{21, 12, 4}, Family::Q, X),
        theta_series(QForm{48, 0, 1}, Family::Q, X), theta_series(QForm{3, 0, 16}, Family::Q, X)};
    auto eig = eigenform_split(span);
    REQUIRE(eig.size() == 4);

    int seen36 = 0, seen144 = 0, seen576 = 0;
    for (auto& e : eig) {
        CHECK(e.field->degree() == 1);
        ResolvedNewform rn = resolve_newform(e);
        if (rn.form.level == 36) {
            ++seen36;
            REQUIRE(rn.weights.size() == 5);
            long w[] = {1, 0, -4, 0, 16};
            for (int k = 0; k <= 4; ++k) CHECK(rn.weights[k].rat() == w[k]);
            CHECK(rn.form.a(7).rat() == -4);
            CHECK(rn.form.a(13).rat() == 2);
        } else if (rn.form.level == 144) {
            ++seen144;
            REQUIRE(rn.weights.size() == 3);
            CHECK(rn.weights[1].is_zero());
            CHECK(rn.weights[2].rat() == -4);
            CHECK(rn.form.a(7).rat() == 4);
            CHECK(rn.form.a(13).rat() == 2);
        } else {
            ++seen576;
            CHECK(rn.form.level == 576);
            CHECK(rn.weights.size() == 1);
            CHECK(abs(rn.form.a(7).rat()) == 4);
            CHECK(rn.form.a(13).rat() == -2);
        }
    }
    CHECK(seen36 == 1);
    CHECK(seen144 == 1);
    CHECK(seen576 == 2);
}

TEST_CASE("level-192 span: quadratic eigenforms at two levels") {
    long B = sturm_bound(192);
    long X = 19 * (B + 8);
    std::vector<QExpansion> span{
        theta_series(QForm{16, 16, 7}, Family::P, X), theta_series(QForm{48, 48, 13}, Family::P, X),
        theta_series(QForm{48, 0, 1}, Family::P, X), theta_series(QForm{16, 0, 3}, Family::P, X)};
    for (auto& t : span) CHECK(t.level == 192);
    auto eig = eigenform_split(span);
    REQUIRE(eig.size() == 4);

    int seen48 = 0, seen192 = 0;
    for (auto& e : eig) {
        CHECK(e.field->degree() == 2);
        ResolvedNewform rn = resolve_newform(e);
        CHECK(rn.weights.size() == 1);
        if (rn.form.level == 48) {
            ++seen48;
            CHECK(rn.scale == 4);
        } else {
            ++seen192;
            CHECK(rn.form.level == 192);
            CHECK(rn.scale == 1);
        }
    }
    CHECK(seen48 == 2);
    CHECK(seen192 == 2);
}

TEST_CASE("span sanity errors") {
    QExpansion t1 = theta_series(QForm{16, 0, 1}, Family::P, 400);
    CHECK_THROWS_AS(eigenform_split({t1, t1}), verify_error);
    CHECK_THROWS_AS(eigenform_split({}), domain_error);
    QExpansion zero;
    zero.level = 64;
    zero.neben_disc = 16;
    zero.truncation = 400;
    zero.set(100, rat(1));
    CHECK_THROWS_AS(eigenform_split({t1, zero}), data_error);
}

TEST_CASE("qexp text round trip") {
    QExpansion f = f64aa1();
    f.neben_disc = 1;
    std::string text = qexp_to_text(f, 40);
    QExpansion g = qexp_from_text(text);
    CHECK(g.label == "f64aa1");
    CHECK(g.level == 64);
    CHECK(g.weight == 2);
    CHECK(g.truncation == 40);
    for (long n = 1; n <= 40; ++n) CHECK(g.a(n) == f.a(n));

    // Non-rational coefficients go through the numeric channel.
    long X = 19 * 20 + 40;
    QExpansion t1 = theta_series(QForm{1, 0, 1}, Family::Q, X);
    QExpansion t2 = theta_series(QForm{2, 2, 1}, Family::Q, X);
    auto eig = eigenform_split({t1, t2});
    std::string etext = qexp_to_text(eig[0], 12, 40);
    QExpansion h = qexp_from_text(etext);
    CHECK(!h.exact());
    BigComplex a2 = h.a_num(2, 30);
    BigComplex want = eig[0].a_num(2, 30);
    CHECK(abs(a2.re - want.re) < pow10(-20, 30));
    CHECK(abs(a2.im - want.im) < pow10(-20, 30));

    CHECK_THROWS_AS(qexp_from_text(""), data_error);
    CHECK_THROWS_AS(qexp_from_text("f 36 2 1\n"), data_error);
    CHECK_THROWS_AS(qexp_from_text("f 36 2 1\n14 1\n"), data_error);
}

TEST_CASE("qexp field upgrades on set") {
    FieldPtr K = make_field({-2, 0, 1});
    QExpansion f;
    f.truncation = 10;
    f.set(1, rat(3));
    f.set(2, FieldElem::gen(K));
    CHECK(f.field == K);
    CHECK(f.a(1).rat() == 3);
    CHECK(f.a(2) == FieldElem::gen(K));
    QExpansion c = f.conj();
    CHECK(c.a(2) == FieldElem::gen(K));  // sqrt2 is real
}
