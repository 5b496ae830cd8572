#include "dmflag/ktheory.hpp"
#include "examples.hpp"

#include <doctest.h>

using namespace dmflag;
using namespace dmflag::testing;

namespace {

RingPtr Qx() { return make_ring(Field::rationals(), 1, MonoOrder::grevlex, {"x"}); }

DiffModule koszul_fold(const RingPtr& R, int n) {
    std::vector<Poly> xs;
    for (int i = 0; i < n; ++i) xs.push_back(Poly::var(R, i));
    return fold(koszul_complex(R, xs), 2);
}

DiffModule free_in(const RingPtr& R, std::vector<int> degrees) {
    const int n = static_cast<int>(degrees.size());
    return DiffModule(2, std::move(degrees), Matrix(R, n, n));
}

DiffModule direct_sum(const DiffModule& A, const DiffModule& B) {
    std::vector<int> degree = A.degree, weight = A.weight;
    degree.insert(degree.end(), B.degree.begin(), B.degree.end());
    weight.insert(weight.end(), B.weight.begin(), B.weight.end());
    DiffModule out(A.modulus, degree, Matrix::blockdiag(A.diff, B.diff), weight, A.shift);
    out.graded = false;
    return out;
}

/// Signed-swap eigenspace ranks: pairs i < j give one vector each way, e_i (x) e_i is
/// symmetric for even and antisymmetric for odd e_i.
std::pair<int, int> swap_ranks(const DiffModule& P) {
    int even = 0, odd = 0;
    for (int g = 0; g < P.rank(); ++g) (P.degree[g] % 2 == 0 ? even : odd)++;
    const int n = P.rank(), pairs = n * (n - 1) / 2;
    return {pairs + even, pairs + odd};
}

/// Finite-length d = 2 flags: folded Koszul or K_delta plus contractible pairs, scrambled.
FreeFlag random_finite_flag(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, 2);
    FreeFlag F;
    switch (pick(rng)) {
    case 0: F = flag_from_complex(koszul_complex(Qxy(), {Poly::var(Qxy(), 0), Poly::var(Qxy(), 1)}), 2); break;
    case 1: F = kdelta_flag(Q123()); break;
    default: {
        auto R = Q123();
        F = flag_from_complex(koszul_complex(R, {Poly::var(R, 0), Poly::var(R, 1), Poly::var(R, 2)}), 2);
    }
    }
    std::uniform_int_distribution<int> lv(0, std::max(F.max_level() - 1, 0)), col(0, 1), npairs(0, 2);
    for (int k = npairs(rng); k > 0; --k) F = with_pair(F, lv(rng), col(rng));
    return scramble(F, rng);
}

}  // namespace

TEST_CASE("tensor_power_cyclic") {
    auto R = Qx();
    CyclicPower a = tensor_power_cyclic(free_in(R, {0}), 2);
    CHECK(a.power.rank() == 1);
    CHECK(a.sigma == Matrix::identity(R, 1));
    CyclicPower b = tensor_power_cyclic(free_in(R, {1}), 2);
    CHECK(b.sigma == -Matrix::identity(R, 1));

    DiffModule K = koszul_fold(R, 1);
    CyclicPower c = tensor_power_cyclic(K, 2);
    CHECK(c.sigma * c.power.diff == c.power.diff * c.sigma);
    CHECK(c.sigma * c.sigma == Matrix::identity(R, 4));

    auto R2 = Qxy();
    CyclicPower k2 = tensor_power_cyclic(koszul_fold(R2, 2), 2);
    CHECK(k2.sigma * k2.power.diff == k2.power.diff * k2.sigma);

    auto F7 = make_ring(Field::prime(7), 2, MonoOrder::grevlex, {"x", "y"});
    CyclicPower t3 = tensor_power_cyclic(koszul_fold(F7, 2), 3);
    CHECK(t3.power.rank() == 64);
    CHECK(t3.sigma * t3.power.diff == t3.power.diff * t3.sigma);
    CHECK(t3.sigma * t3.sigma * t3.sigma == Matrix::identity(F7, 64));
    CHECK(root_of_unity(F7, 3).has_value());

    CHECK_THROWS_AS(tensor_power_cyclic(K, 3), RingError);
    CHECK_THROWS_AS(tensor_power_cyclic(K, 4), RingError);
    auto F3 = make_ring(Field::prime(3), 1, MonoOrder::grevlex, {"x"});
    CHECK_THROWS_AS(tensor_power_cyclic(koszul_fold(F3, 1), 3), RingError);
}

TEST_CASE("eigen_split") {
    auto R = Qx();
    DiffModule K = koszul_fold(R, 1);
    EigenSplit same = eigen_split(K, Matrix::identity(R, 2), 2, mpq_class(-1));
    CHECK(same.pieces.at(0).dm.rank() == 2);
    CHECK(same.pieces.at(1).dm.rank() == 0);

    DiffModule P = free_in(R, {0, 1});
    CyclicPower T = tensor_power_cyclic(P, 2);
    EigenSplit s = eigen_split(T.power, T.sigma, 2, mpq_class(-1));
    CHECK(s.pieces.at(0).dm.rank() == 2);
    CHECK(s.pieces.at(1).dm.rank() == 2);

    auto R3 = Q123();
    DiffModule Kd = kdelta(R3);
    CyclicPower Td = tensor_power_cyclic(Kd, 2);
    EigenSplit sd = eigen_split(Td.power, Td.sigma, 2, mpq_class(-1));
    auto [plus, minus] = swap_ranks(Kd);
    REQUIRE(plus + minus == 64);
    CHECK(sd.pieces.at(0).dm.rank() == plus);
    CHECK(sd.pieces.at(1).dm.rank() == minus);
    CHECK(plus == 32);
    for (const auto& [i, piece] : sd.pieces) {
        CHECK(Td.power.diff * piece.basis == piece.basis * piece.dm.diff);
        CHECK(dm_check(piece.dm).ok);
    }

    auto F7 = make_ring(Field::prime(7), 1, MonoOrder::grevlex, {"x"});
    DiffModule K7 = koszul_fold(F7, 1);
    CyclicPower T7 = tensor_power_cyclic(K7, 3);
    EigenSplit s7 = eigen_split(T7.power, T7.sigma, 3, *root_of_unity(F7, 3));
    int total = 0;
    for (const auto& [i, piece] : s7.pieces) {
        total += piece.dm.rank();
        CHECK(T7.power.diff * piece.basis == piece.basis * piece.dm.diff);
    }
    CHECK(total == 8);
    // orbits: two fixed points (all factors equal) and two free orbits of size three
    CHECK(s7.pieces.at(0).dm.rank() == 4);
    CHECK(s7.pieces.at(1).dm.rank() == 2);
    CHECK(s7.pieces.at(2).dm.rank() == 2);
}

TEST_CASE("cyclic Adams operations and Euler characteristic") {
    auto R0 = make_ring(Field::rationals(), 0);
    CyclicAdams unit = cyclic_adams(free_in(R0, {0}), 2);
    CHECK(chi_psi(unit) == 1);
    CHECK(unit.minus().rank() == 0);

    auto R1 = Qx();
    DiffModule K1 = koszul_fold(R1, 1);
    CHECK(chi_psi(cyclic_adams(K1, 2)) == 2 * euler_and_profile(K1).chi);

    auto R2 = Qxy();
    DiffModule K2 = koszul_fold(R2, 2);
    REQUIRE(euler_and_profile(K2).chi == 1);
    CyclicAdams a2 = cyclic_adams(K2, 2);
    CHECK(chi_psi(a2) == 4);
    CHECK(a2.minus_classes().size() == 1);

    // finite length colength three, resolved non-minimally
    ResolutionOptions o;
    o.minimize = false;
    DiffModule M = fold(free_resolution(Matrix::parse(R2, {{"x^2", "x*y", "y^2"}}), o).F, 2);
    REQUIRE(euler_and_profile(M).chi == 3);
    CHECK(chi_psi(cyclic_adams(M, 2)) == 12);

    CHECK_THROWS_AS(cyclic_adams(be_example(R2), 2), RingError);
}

TEST_CASE("euler_and_profile") {
    auto R2 = Qxy();
    DiffModule contractible(2, {0, 1}, Matrix::parse(R2, {{"0", "1"}, {"0", "0"}}));
    RankProfile c = euler_and_profile(contractible);
    CHECK(c.chi == 0);
    CHECK(c.total == 0);

    auto R3 = Q123();
    RankProfile k = euler_and_profile(koszul_fold(R3, 3));
    CHECK(k.rank == 8);
    CHECK(k.total == 1);
    CHECK(std::abs(k.chi) == 1);
    CHECK(k.codim == 3);

    RankProfile be = euler_and_profile(be_example(R2));
    CHECK(be.rank == 2);
    CHECK(be.total == 1);

    DiffModule R_alone = free_in(R2, {0});
    CHECK_THROWS_AS(euler_and_profile(R_alone), RingError);
    RankProfile withc = euler_and_profile(R_alone, 0);
    CHECK(withc.codim == 0);
    CHECK(withc.h[0] == -1);

    DiffModule K2 = koszul_fold(R2, 2);
    RankProfile a = euler_and_profile(K2), b = euler_and_profile(direct_sum(K2, K2));
    CHECK(b.chi == 2 * a.chi);
    CHECK(b.total == 2 * a.total);
    CHECK(euler_and_profile(dm_cone(identity_morphism(K2))).chi == 0);
    CHECK(euler_and_profile(dm_cone(identity_morphism(kdelta(R3)))).total == 0);
}

TEST_CASE("total rank check") {
    auto R2 = Qxy();
    TrcResult k = trc_check(koszul_fold(R2, 2));
    CHECK(k.verdict == Verdict::holds);
    CHECK(k.margin == mpq_class(0));
    TrcResult kd = trc_check(kdelta(Q123()));
    CHECK(kd.verdict == Verdict::holds);
    CHECK(kd.margin == mpq_class(0));

    RankProfile bad;
    bad.rank = 2;
    bad.h = {1, 0};
    bad.total = 1;
    bad.chi = 1;
    bad.dim = 2;
    bad.codim = 2;
    TrcResult f = trc_verdict(bad);
    CHECK(f.verdict == Verdict::fails);
    CHECK(f.margin == mpq_class(-2));
    CHECK(!f.codim_bound);

    RankProfile zero;
    zero.rank = 2;
    zero.h = {0, 0};
    zero.dim = 2;
    CHECK(trc_verdict(zero).verdict == Verdict::inapplicable);

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 8; ++trial) {
        FreeFlag F = random_finite_flag(rng);
        TrcResult r = trc_check(F.dm);
        CHECK(r.verdict == Verdict::holds);
        CHECK(r.margin >= mpq_class(0));
    }
}

TEST_CASE("tensor length bound") {
    auto R2 = Qxy();
    DiffModule K2 = koszul_fold(R2, 2);
    TensorLength one = tensor_length_test(K2, free_in(R2, {0}), true);
    CHECK(one.h_tensor == 1);
    CHECK(one.bound == 1);

    auto R3 = Q123();
    DiffModule Kd = kdelta(R3);
    TensorLength kk = tensor_length_test(Kd, Kd, true);
    CHECK(kk.h_tensor == 8);
    CHECK(kk.bound == 8);
    CHECK(kk.within);

    DiffModule D = kdelta_retract(R3);
    TensorLength dd = tensor_length_test(D, D, false);
    CHECK(dd.h_tensor == 8);
    CHECK(dd.bound == 6);
    CHECK(!dd.within);
    CHECK(!dd.applicable);

    CHECK_THROWS_AS(tensor_length_test(be_example(R2), be_example(R2), true), RingError);
}

TEST_CASE("frobenius and Dutta sequences") {
    auto F3 = make_ring(Field::prime(3), 1, MonoOrder::grevlex, {"x"});
    DiffModule K = koszul_fold(F3, 1);
    CHECK(frobenius_dm(K, 0).diff == K.diff);
    DiffModule K2 = frobenius_dm(K, 2);
    CHECK(K2.diff.at(0, 1) == Poly::var(F3, 0, 9));
    CHECK(frobenius_dm(frobenius_dm(K, 1), 1).diff == K2.diff);
    CHECK(euler_and_profile(K2).total == 9);
    DuttaSequence s = dutta_sequence(K, 3);
    REQUIRE(s.values.size() == 4);
    for (const auto& v : s.values) CHECK(v == mpq_class(static_cast<long>(euler_and_profile(K).chi)));
    CHECK(s.stabilized);

    auto F3xy = make_ring(Field::prime(3), 2, MonoOrder::grevlex, {"x", "y"});
    DiffModule Kxy = koszul_fold(F3xy, 2);
    DuttaSequence t = dutta_sequence(Kxy, 2);
    for (const auto& v : t.values) CHECK(v == t.values[0]);
    CHECK(frobenius_dm(frobenius_dm(Kxy, 1), 2).diff == frobenius_dm(Kxy, 3).diff);
    CHECK_THROWS_AS(frobenius_dm(koszul_fold(Qx(), 1), 1), RingError);
}
