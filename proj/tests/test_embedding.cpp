#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "orthinv/embedding.hpp"

using namespace orthinv;

TEST_CASE("companion embedding for a quadratic radical") {
    // E = F[sqrt(tau)]: sqrt(tau) maps to [[0, tau], [1, 0]]
    Tower t(TowerSpec{5, {RamStep{2, 0}}, 32});
    auto emb = companion_embedding(t, 1, 0, t.pi(1), t.from_int(0, 5));
    auto M = emb.matrix_of(t.pi(1));
    CHECK(M.at(0, 0).is_zero());
    CHECK(M.at(0, 1) == t.from_int(0, 5));
    CHECK(M.at(1, 0) == t.one(0));
    CHECK(M.at(1, 1).is_zero());
    CHECK(verify_j_symmetry(emb, 20, 1));
    CHECK(verify_multiplicative(emb, 20, 2));
    CHECK(verify_det_is_norm(emb, 20, 3));
    CHECK(verify_integral_on_units(emb, 10, 4));
}

TEST_CASE("companion embedding for a higher radical keeps powers J-symmetric") {
    Tower t(TowerSpec{5, {RamStep{3, 0}}, 32});
    auto emb = companion_embedding(t, 1, 0, t.pi(1), t.from_int(0, 5));
    // omega^2 is a product of commuting J-symmetric matrices
    auto M2 = emb.matrix_of(t.pow(t.pi(1), 2));
    Mat J = Mat::antidiag(&t, 0, 3);
    CHECK(mat_equal(J * transpose(M2) * J, M2));
    CHECK(verify_j_symmetry(emb, 20, 5));
}

TEST_CASE("companion embedding rejects reducible binomials") {
    Tower t(TowerSpec{5, {RamStep{2, 0}}, 32});
    // x^2 - 4 is reducible
    CHECK_THROWS_AS((void)companion_embedding(t, 1, 0, t.pi(1), t.from_int(0, 4)), Reducible);
}

TEST_CASE("unramified trace-form embedding") {
    Tower t(TowerSpec{5, {UnramStep{2}}, 32});
    auto emb = unramified_jsym_embedding(t, 1, 0);
    CHECK(verify_j_symmetry(emb, 20, 7));
    CHECK(verify_multiplicative(emb, 20, 8));
    CHECK(verify_det_is_norm(emb, 20, 9));
    CHECK(verify_integral_on_units(emb, 10, 10));
    // the image of the Teichmueller generator is anti-diagonal symmetric
    auto Z = emb.matrix_of(t.zeta(1));
    Mat J = Mat::antidiag(&t, 0, 2);
    CHECK(mat_equal(J * transpose(Z) * J, Z));
    // and satisfies the residue polynomial of the extension: here the
    // multiplicative order of the generator
    auto q = t.residue_field(1).q();
    CHECK(mat_equal(emb.matrix_of(t.pow(t.zeta(1), q - 1)), Mat::identity(&t, 0, 2)));
    // degree-1 case degenerates to the identity embedding
    auto triv = unramified_jsym_embedding(t, 0, 0);
    CHECK(triv.n == 1);
    CHECK(triv.basis[0] == t.one(0));
}

TEST_CASE("unramified cubic over Q_7") {
    Tower t(TowerSpec{7, {UnramStep{3}}, 32});
    auto emb = unramified_jsym_embedding(t, 1, 0);
    CHECK(verify_j_symmetry(emb, 15, 11));
    CHECK(verify_multiplicative(emb, 15, 12));
    CHECK(verify_integral_on_units(emb, 10, 13));
}

TEST_CASE("composite embedding") {
    Tower t(TowerSpec{5, {UnramStep{2}, RamStep{2, 0}}, 32});
    auto inner = unramified_jsym_embedding(t, 1, 0);
    auto tau = t.mul(t.zeta_pow(1, t.step_ram_twist(2)), t.pi(1));
    auto outer = companion_embedding(t, 2, 1, t.pi(2), tau);
    auto emb = composite_embedding(outer, inner);
    CHECK(emb.n == 4);
    CHECK(emb.j_symmetric);
    CHECK(verify_j_symmetry(emb, 20, 14));
    CHECK(verify_multiplicative(emb, 20, 15));
    CHECK(verify_integral_on_units(emb, 10, 16));
    CHECK(verify_det_is_norm(emb, 20, 17));
    // trivial inner factor leaves the outer unchanged
    auto triv = make_embedding(t, 0, 0, {t.one(0)}, true);
    auto same = composite_embedding(inner, triv);
    CHECK(same.n == inner.n);
    for (int i = 0; i < same.n; ++i) CHECK(same.basis[i] == inner.basis[i]);
}

TEST_CASE("integral J-symmetric embedding for catalog towers") {
    std::vector<TowerSpec> specs = {
        {5, {RamStep{2, 0}}, 32},
        {5, {UnramStep{2}, RamStep{2, 0}}, 32},
        {7, {UnramStep{2}, RamStep{3, 0}}, 32},
        {3, {RamStep{2, 0}, UnramStep{2}}, 32},
        {3, {RamStep{4, 1}}, 32},
    };
    int seed = 20;
    for (const auto& s : specs) {
        Tower t(s);
        auto emb = integral_jsym_embedding(t, t.top(), 0);
        CHECK(emb.n == t.degree(t.top()));
        CHECK(verify_j_symmetry(emb, 10, seed));
        CHECK(verify_multiplicative(emb, 10, seed + 1));
        CHECK(verify_integral_on_units(emb, 6, seed + 2));
        CHECK(verify_det_is_norm(emb, 10, seed + 3));
        seed += 4;
    }
}

TEST_CASE("standard block embedding") {
    Tower t(TowerSpec{5, {UnramStep{2}, RamStep{3, 0}}, 32});
    auto emb = standard_block_embedding(t, t.top(), 0);
    CHECK(emb.n == 6);
    CHECK(verify_j_symmetry(emb, 10, 40));
    CHECK(verify_integral_on_units(emb, 6, 41));
    CHECK(verify_det_is_norm(emb, 10, 42));
}

TEST_CASE("nu-symmetry detection") {
    Tower t(TowerSpec{5, {UnramStep{2}, RamStep{2, 0}}, 32});
    auto emb = integral_jsym_embedding(t, t.top(), 0);
    int n = emb.n;
    Mat J = Mat::antidiag(&t, 0, n);
    // nu = J: witness 1
    auto r = nu_symmetric_test(emb, J);
    CHECK(r.symmetric);
    CHECK(r.witness == t.one(t.top()));
    // nu = J * matrix_of(x) for random x
    uint64_t st = 55;
    for (int i = 0; i < 10; ++i) {
        auto x = t.random_elt(t.top(), st);
        Mat nu = J * emb.matrix_of(x);
        auto rr = nu_symmetric_test(emb, nu);
        CHECK(rr.symmetric);
        CHECK(rr.witness == x);
        // determinant identity for the witness
        int64_t sgn = ((int64_t)n * (n - 1) / 2) % 2;
        auto dn = det(nu);
        auto rhs = t.norm(x, 0);
        if (sgn) rhs = -rhs;
        CHECK(dn == rhs);
    }
    // symmetric matrices outside J * image fail, with no witness
    int rejected = 0;
    for (int i = 0; i < 20; ++i) {
        Mat nu(&t, 0, n, n);
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                auto v = t.random_elt(0, st, 0, 1);
                nu.at(a, b) = v;
                nu.at(b, a) = v;
            }
        if (det(nu).is_zero()) continue;
        auto rr = nu_symmetric_test(emb, nu);
        if (!rr.symmetric) {
            ++rejected;
            CHECK(rr.witness.is_zero());
        } else {
            // if accepted, the witness must reproduce nu
            CHECK(mat_equal(J * emb.matrix_of(rr.witness), nu));
        }
    }
    CHECK(rejected > 0);
}

TEST_CASE("nu with unreachable invariants is rejected") {
    // y = 4: all norms are squares, so J*image forms share the discriminant
    // of J; a census representative with a different discriminant cannot be
    // nu-symmetric for this embedding
    Tower t(TowerSpec{5, {UnramStep{2}, RamStep{2, 0}}, 32});
    auto emb = integral_jsym_embedding(t, t.top(), 0);
    std::vector<FieldElt> d = {t.one(0), t.one(0), t.one(0), t.nonresidue_unit(0)};
    Mat nu = Mat::diag(&t, 0, d);
    auto r = nu_symmetric_test(emb, nu);
    CHECK_FALSE(r.symmetric);
}
