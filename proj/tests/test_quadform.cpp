#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hilbert_oracle.hpp"
#include "orthinv/quadform.hpp"

using namespace orthinv;

static Mat random_invertible(const Tower& t, int level, int n, uint64_t& st) {
    for (;;) {
        Mat g(&t, level, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g.at(i, j) = t.random_elt(level, st, -1, 1);
        if (!det(g).is_zero()) return g;
    }
}

static Mat random_integral_unimodular_sym(const Tower& t, int level, int n, uint64_t& st) {
    for (;;) {
        Mat s(&t, level, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                auto v = t.random_elt(level, st, 0, 2);
                s.at(i, j) = v;
                s.at(j, i) = v;
            }
        auto d = det(s);
        if (!d.is_zero() && t.pival(d) == 0) return s;
    }
}

TEST_CASE("Hilbert symbol against the brute-force oracle, full class tables") {
    for (int64_t p : {3, 5, 7, 11, 13}) {
        Tower t(TowerSpec{p, {}, 32});
        int64_t u = oracle::least_nonresidue(p);
        int64_t reps[4] = {1, u, p, u * p};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                int expect = oracle::hilbert_brute(p, reps[i], reps[j]);
                auto a = t.from_int(0, reps[i]);
                auto b = t.from_int(0, reps[j]);
                CHECK(hilbert_symbol(a, b) == expect);
                // class invariance: canonical reps give the same table
                CHECK(hilbert_symbol(t.square_class_rep(0, i), t.square_class_rep(0, j)) == expect);
            }
    }
}

TEST_CASE("Hilbert symbol: frozen values and basic identities") {
    Tower t3(TowerSpec{3, {}, 32});
    Tower t5(TowerSpec{5, {}, 32});
    CHECK(hilbert_symbol(t3.from_int(0, 3), t3.from_int(0, 3)) == -1);
    CHECK(hilbert_symbol(t5.from_int(0, 5), t5.from_int(0, 5)) == 1);
    CHECK(oracle::hilbert_brute(3, 3, 3) == -1);
    CHECK(oracle::hilbert_brute(5, 5, 5) == 1);
    uint64_t st = 17;
    for (int64_t p : {3, 5, 7}) {
        Tower t(TowerSpec{p, {}, 32});
        for (int k = 0; k < 25; ++k) {
            auto a = t.random_elt(0, st);
            auto b = t.random_elt(0, st);
            auto c = t.random_elt(0, st);
            CHECK(hilbert_symbol(t.one(0), b) == 1);
            CHECK(hilbert_symbol(a, b) == hilbert_symbol(b, a));
            CHECK(hilbert_symbol(a * b, c) == hilbert_symbol(a, c) * hilbert_symbol(b, c));
            CHECK(hilbert_symbol(a, -a) == 1);
        }
        // Hilbert(a, b) = 1 for all b implies a is a square
        for (int cls = 0; cls < 4; ++cls) {
            auto a = t.square_class_rep(0, cls);
            bool all1 = true;
            for (int j = 0; j < 4; ++j)
                all1 = all1 && hilbert_symbol(a, t.square_class_rep(0, j)) == 1;
            CHECK(all1 == (cls == 0));
        }
    }
    CHECK_THROWS_AS((void)hilbert_symbol(t3.zero(0), t3.one(0)), ZeroInput);
}

TEST_CASE("Hilbert symbol works over extension fields") {
    Tower t(TowerSpec{5, {UnramStep{2}, RamStep{2, 0}}, 32});
    int top = t.top();
    uint64_t st = 31;
    for (int k = 0; k < 20; ++k) {
        auto a = t.random_elt(top, st);
        auto b = t.random_elt(top, st);
        CHECK(hilbert_symbol(a, b) == hilbert_symbol(b, a));
        CHECK(hilbert_symbol(a, -a) == 1);
        CHECK(hilbert_symbol(a * a, b) == 1);
    }
}

TEST_CASE("diagonalize") {
    Tower t(TowerSpec{5, {}, 32});
    // diagonal input is a fixed point with identity transform
    std::vector<FieldElt> dd = {t.from_int(0, 2), t.from_int(0, 15)};
    auto D = Mat::diag(&t, 0, dd);
    auto r = diagonalize(D);
    CHECK(mat_equal(r.g, Mat::identity(&t, 0, 2)));
    CHECK(r.diag[0] == dd[0]);
    CHECK(r.diag[1] == dd[1]);
    // J_2 over Q_5: congruent to (1, -1) up to squares
    auto J2 = Mat::antidiag(&t, 0, 2);
    auto rj = diagonalize(J2);
    auto prodcheck = transpose(rj.g) * J2 * rj.g;
    CHECK(mat_equal(prodcheck, Mat::diag(&t, 0, rj.diag)));
    CHECK(t.square_class(rj.diag[0] * rj.diag[1]) == t.square_class(t.from_int(0, -1)));
    // property run over random integral matrices
    uint64_t st = 23;
    for (int64_t p : {3, 7}) {
        Tower tw(TowerSpec{p, {UnramStep{2}}, 32});
        int top = tw.top();
        for (int k = 0; k < 50; ++k) {
            Mat S(&tw, top, 3, 3);
            for (int i = 0; i < 3; ++i)
                for (int j = i; j < 3; ++j) {
                    auto v = tw.random_elt(top, st, 0, 2);
                    S.at(i, j) = v;
                    S.at(j, i) = v;
                }
            if (det(S).is_zero()) continue;
            auto dz = diagonalize(S);
            CHECK(mat_equal(transpose(dz.g) * S * dz.g, Mat::diag(&tw, top, dz.diag)));
            FieldElt dp = tw.one(top);
            for (auto& x : dz.diag) dp = dp * x;
            CHECK(tw.square_class(dp) == tw.square_class(det(S)));
        }
    }
}

TEST_CASE("form invariants") {
    Tower t(TowerSpec{5, {}, 32});
    for (int n : {2, 3, 4}) {
        auto I = Mat::identity(&t, 0, n);
        auto inv = form_invariants(I);
        CHECK(inv.disc_class == 0);
        CHECK(inv.hasse == 1);
        auto J = Mat::antidiag(&t, 0, n);
        CHECK(form_invariants(J).disc0_class == 0);
    }
    // integral symmetric matrices with unit determinant have trivial Hasse
    uint64_t st = 41;
    for (int64_t p : {3, 5}) {
        Tower tw(TowerSpec{p, {}, 32});
        for (int k = 0; k < 50; ++k) {
            auto S = random_integral_unimodular_sym(tw, 0, 3, st);
            auto inv = form_invariants(S);
            CHECK(inv.hasse == 1);
            CHECK(inv.hasse0 == 1);
        }
    }
}

TEST_CASE("form invariants are congruence invariants") {
    uint64_t st = 57;
    for (int64_t p : {3, 5}) {
        Tower t(TowerSpec{p, {}, 32});
        for (int n : {2, 3}) {
            for (int k = 0; k < 100; ++k) {
                Mat S(&t, 0, n, n);
                for (int i = 0; i < n; ++i)
                    for (int j = i; j < n; ++j) {
                        auto v = t.random_elt(0, st, -1, 2);
                        S.at(i, j) = v;
                        S.at(j, i) = v;
                    }
                if (det(S).is_zero()) continue;
                auto inv0 = form_invariants(S);
                auto g = random_invertible(t, 0, n, st);
                auto inv1 = form_invariants(transpose(g) * S * g);
                CHECK(inv0.disc_class == inv1.disc_class);
                CHECK(inv0.hasse == inv1.hasse);
                CHECK(inv0.hasse0 == inv1.hasse0);
            }
        }
    }
}

TEST_CASE("similarity") {
    Tower t(TowerSpec{5, {}, 32});
    uint64_t st = 3;
    auto S = random_integral_unimodular_sym(t, 0, 3, st);
    auto g = random_invertible(t, 0, 3, st);
    CHECK(is_similar(S, transpose(g) * S * g));
    auto D1 = Mat::diag(&t, 0, {t.one(0), t.one(0)});
    auto D2 = Mat::diag(&t, 0, {t.one(0), t.nonresidue_unit(0)});
    CHECK_FALSE(is_similar(D1, D2));
    // n = 2: same discriminant as the antidiagonal form forces similarity
    auto J2 = Mat::antidiag(&t, 0, 2);
    int discJ = form_invariants(J2).disc_class;
    auto cen = similarity_class_census(t, 0, 2);
    for (auto& e : cen)
        if (e.inv.disc_class == discJ) CHECK(is_similar(e.rep, J2));
}

TEST_CASE("similarity class census counts") {
    Tower t5(TowerSpec{5, {}, 32});
    CHECK(similarity_class_census(t5, 0, 3).size() == 8);
    CHECK(similarity_class_census(t5, 0, 4).size() == 8);
    CHECK(similarity_class_census(t5, 0, 2).size() == 7);
    Tower t3(TowerSpec{3, {}, 32});
    CHECK(similarity_class_census(t3, 0, 3).size() == 8);
    CHECK(similarity_class_census(t3, 0, 2).size() == 7);
    // representatives are pairwise non-similar and recompute to their keys
    auto cen = similarity_class_census(t5, 0, 3);
    for (size_t i = 0; i < cen.size(); ++i) {
        auto inv = form_invariants(cen[i].rep);
        CHECK(inv.disc_class == cen[i].inv.disc_class);
        CHECK(inv.hasse == cen[i].inv.hasse);
        for (size_t j = i + 1; j < cen.size(); ++j) CHECK_FALSE(is_similar(cen[i].rep, cen[j].rep));
    }
}

TEST_CASE("congruence transform") {
    Tower t(TowerSpec{5, {}, 32});
    // S = T gives the identity
    auto J2 = Mat::antidiag(&t, 0, 2);
    CHECK(mat_equal(congruence_transform(J2, J2), Mat::identity(&t, 0, 2)));
    // diag(4,1) -> diag(1,1)
    auto S = Mat::diag(&t, 0, {t.from_int(0, 4), t.one(0)});
    auto T = Mat::identity(&t, 0, 2);
    auto g = congruence_transform(S, T);
    CHECK(mat_equal(transpose(g) * S * g, T));
    // J_2 -> diag(1,-1)
    auto T2 = Mat::diag(&t, 0, {t.one(0), t.from_int(0, -1)});
    auto g2 = congruence_transform(J2, T2);
    CHECK(mat_equal(transpose(g2) * J2 * g2, T2));
    // mismatch raises NotSimilar
    auto D2 = Mat::diag(&t, 0, {t.one(0), t.nonresidue_unit(0)});
    CHECK_THROWS_AS((void)congruence_transform(T, D2), NotSimilar);
}

TEST_CASE("congruence transform on random similar pairs") {
    uint64_t st = 77;
    for (int64_t p : {3, 5, 7}) {
        Tower t(TowerSpec{p, {}, 32});
        for (int n : {2, 3}) {
            for (int k = 0; k < 10; ++k) {
                auto S = random_integral_unimodular_sym(t, 0, n, st);
                auto h = random_invertible(t, 0, n, st);
                auto T = transpose(h) * S * h;
                auto g = congruence_transform(S, T, k);
                CHECK(mat_equal(transpose(g) * S * g, T));
            }
        }
    }
}

TEST_CASE("integral congruence path stays integral") {
    uint64_t st = 91;
    Tower t(TowerSpec{5, {UnramStep{2}}, 32});
    int top = t.top();
    for (int k = 0; k < 8; ++k) {
        auto S = random_integral_unimodular_sym(t, top, 3, st);
        // integral unimodular change of basis keeps both sides integral
        Mat h = Mat::identity(&t, top, 3);
        h.at(0, 1) = t.random_elt(top, st, 0, 1);
        h.at(1, 2) = t.random_elt(top, st, 0, 1);
        auto T = transpose(h) * S * h;
        auto g = congruence_transform(S, T);
        CHECK(mat_is_integral(g));
        CHECK(mat_equal(transpose(g) * S * g, T));
    }
}

TEST_CASE("census over a tower field") {
    Tower t(TowerSpec{3, {UnramStep{2}}, 32});
    CHECK(similarity_class_census(t, 1, 3).size() == 8);
    CHECK(similarity_class_census(t, 1, 2).size() == 7);
}
