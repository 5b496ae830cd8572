#include "examples.hpp"

#include <doctest.h>

using namespace dmflag;
using namespace dmflag::testing;

namespace {

/// id + d a + a d with a preserving levels: a flag automorphism whose anchor part is the identity.
Matrix unipotent(const FreeFlag& F, std::mt19937_64& rng) {
    Matrix a = random_map(F.dm, F.dm, 1, rng);
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c)
            if (F.level[c] - F.level[r] < 0) a.at(r, c) = Poly(F.ring());
    return Matrix::identity(F.ring(), F.rank()) + F.dm.diff * a + a * F.dm.diff;
}

}  // namespace

TEST_CASE("flag <-> dm round trip and strata") {
    auto R = Qxy();
    FreeFlag F = be_resolution(R);
    CHECK(flag_to_dm(F).diff == F.dm.diff);
    CHECK(F.max_stratum() == 1);
    CHECK(strata_identities_hold(F));
    ChainComplex K = koszul_complex(R, {P(R, "x"), P(R, "y")});
    ChainComplex A = anchor(F);
    REQUIRE(A.hi() == 2);
    CHECK(A.d(1) == K.d(1));
    CHECK(A.d(2) == K.d(2));
    Matrix one(R, 4, 4);
    one.at(0, 3) = Poly::constant(R, 1);
    CHECK(F.stratum(1) == one);
    CHECK(F.stratum(0) + F.stratum(1) == F.dm.diff);

    FreeFlag C = flag_from_complex(K, 1);
    CHECK(C.max_stratum() == 0);
    CHECK(anchor(C).d(1) == K.d(1));
    CHECK(anchor(C).d(2) == K.d(2));

    FreeFlag Z = dm_to_flag(DiffModule(2, {}, Matrix(R, 0, 0)), {});
    CHECK(Z.rank() == 0);
    CHECK(Z.max_stratum() == -1);

    CHECK_THROWS_AS(dm_to_flag(be_example(R), {0, 0}), FlagError);
    CHECK_THROWS_WITH_AS(dm_to_flag(F.dm, {0, 1, 1, 1}), "entry (1, 3) does not lower the flag degree", FlagError);
    // strata given explicitly assemble to the same flag
    FreeFlag G = flag_from_strata(1, {0, 1, 1, 2}, {0, 0, 0, 0}, {F.stratum(0), F.stratum(1)});
    CHECK(G.dm.diff == F.dm.diff);
    CHECK(G.dm.degree == F.dm.degree);
    CHECK_THROWS_AS(flag_from_strata(1, {0, 1, 1, 2}, {0, 0, 0, 0}, {F.stratum(1)}), FlagError);
}

TEST_CASE("anchors") {
    auto R = Q123();
    FreeFlag K = kdelta_flag(R);
    CHECK(K.max_stratum() == 2);
    CHECK(strata_identities_hold(K));
    ChainComplex Kc = koszul_complex(R, {Poly::var(R, 0), Poly::var(R, 1), Poly::var(R, 2)});
    ChainComplex A = anchor(K);
    for (int i = 1; i <= 3; ++i) CHECK(A.d(i) == Kc.d(i));
    auto cols = anchor_columns(K);
    REQUIRE(cols.size() == 1);
    CHECK(cols[0].column == 0);
    CHECK(is_anchored_resolution(K));
    CHECK(is_anchored_resolution(be_resolution(Qxy())));

    // delta_0 = 0 with a module in level 1
    auto Rq = Qxy();
    FreeFlag bad = dm_to_flag(DiffModule(1, {0, 0}, Matrix(Rq, 2, 2)), {0, 1});
    CHECK_FALSE(is_anchored_resolution(bad));

    // two anchor columns in Z/2: a complex in column 0 and one shifted into column 1
    ChainComplex kx = koszul_complex(Rq, {P(Rq, "x")});
    FreeFlag f0 = flag_from_complex(kx, 2);
    std::vector<int> deg = f0.dm.degree, lvl = f0.level;
    for (int k = 0; k < 2; ++k) {
        deg.push_back(f0.dm.degree[k] + 1);
        lvl.push_back(f0.level[k]);
    }
    Matrix d = Matrix::blockdiag(f0.dm.diff, f0.dm.diff);
    FreeFlag two = dm_to_flag(DiffModule(2, deg, d), lvl);
    auto c2 = anchor_columns(two);
    REQUIRE(c2.size() == 2);
    CHECK(c2[1].column == 1);
    CHECK(c2[1].complex.d(1) == kx.d(1));
    CHECK(is_anchored_resolution(two));
}

TEST_CASE("triangular inversion") {
    auto R = Q123();
    std::mt19937_64 rng(21);
    FreeFlag K = kdelta_flag(R);
    const Matrix I = Matrix::identity(R, K.rank());
    FlagMorphism id{K, K, I};
    CHECK(triangular_invert(id).map == I);

    for (int it = 0; it < 6; ++it) {
        Matrix u = unipotent(K, rng);
        FlagMorphism f{K, K, u.scale(it + 1)};
        REQUIRE(is_valid(f));
        CHECK(f.stratum(0) == I.scale(it + 1));
        FlagMorphism g = triangular_invert(f);
        CHECK(is_valid(g));
        CHECK(g.map * f.map == I);
        CHECK(f.map * g.map == I);
    }
    // id + N with N nilpotent of order 2: inverse is id - N
    auto Rq = Qxy();
    FreeFlag B = be_resolution(Rq);
    Matrix N(Rq, 4, 4);
    N.at(0, 3) = P(Rq, "x");  // level 2 -> 0; d N = N d = 0
    FlagMorphism f{B, B, Matrix::identity(Rq, 4) + N};
    REQUIRE(is_valid(f));
    CHECK(triangular_invert(f).map == Matrix::identity(Rq, 4) - N);

    FlagMorphism zero{B, B, Matrix(Rq, 4, 4)};
    CHECK_THROWS_AS(triangular_invert(zero), FlagError);
}

TEST_CASE("twist functor") {
    auto R = Qxy();
    FreeFlag C = flag_from_complex(koszul_complex(R, {P(R, "x"), P(R, "y")}), 1);
    TauFlag tc = twist_phi(C);
    CHECK(tau_relations_hold(tc));
    CHECK(tc.stratum(0) != C.stratum(0));
    CHECK(twist_phi_inverse(tc).dm.diff == C.dm.diff);

    FreeFlag B = be_resolution(R);
    TauFlag tb = twist_phi(B);
    CHECK(tau_relations_hold(tb));
    FreeFlag back = twist_phi_inverse(tb);
    CHECK(back.dm.diff == B.dm.diff);
    CHECK(dm_check(back.dm).ok);

    FreeFlag Z = dm_to_flag(DiffModule(1, {}, Matrix(R, 0, 0)), {});
    CHECK(twist_phi(Z).carrier.rank() == 0);

    auto R3 = Q123();
    std::mt19937_64 rng(4);
    FreeFlag K = kdelta_flag(R3);
    TauFlag tk = twist_phi(K);
    CHECK(tau_relations_hold(tk));
    for (int it = 0; it < 4; ++it) {
        Matrix u = unipotent(K, rng);
        Matrix psi = twist_phi_map(K.level, K.level, u);
        CHECK(is_tau_morphism(tk, tk, psi));
        CHECK(twist_phi_map(K.level, K.level, psi) == u);
        // composition is preserved
        Matrix v = unipotent(K, rng);
        CHECK(twist_phi_map(K.level, K.level, v * u) ==
              twist_phi_map(K.level, K.level, v) * psi);
    }
    // the untwisted map fails the twisted relation when it has odd strata
    Matrix u = unipotent(K, rng);
    if (twist_phi_map(K.level, K.level, u) != u) CHECK_FALSE(is_tau_morphism(tk, tk, u));
}

TEST_CASE("flag homology through the anchor") {
    auto R = Qxy();
    FreeFlag B = be_resolution(R);
    AnchorHomology h = flag_homology_via_anchor(B);
    CHECK(h.total() == 1);
    CHECK(h.total() == homology(B.dm).total());

    Resolution res = free_resolution(Matrix::parse(R, {{"x", "y^2"}}));
    for (int d : {0, 1, 2}) {
        FreeFlag F = flag_from_complex(res.F, d);
        AnchorHomology a = flag_homology_via_anchor(F);
        CHECK(a.total() == quotient_length(Matrix::parse(R, {{"x", "y^2"}})).length);
        CHECK(a.total() == homology(F.dm).total());
    }

    auto R3 = Q123();
    FreeFlag K = kdelta_flag(R3);
    CHECK(flag_homology_via_anchor(K).total() == 1);
    CHECK(homology(K.dm).total() == 1);

    FreeFlag bad = dm_to_flag(DiffModule(1, {0, 0}, Matrix(R, 2, 2)), {0, 1});
    CHECK_THROWS_AS(flag_homology_via_anchor(bad), FlagError);
}
