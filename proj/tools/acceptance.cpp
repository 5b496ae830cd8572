// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any line fails.
#include "dmflag/ktheory.hpp"
#include "examples.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>

using namespace dmflag;
using namespace dmflag::testing;

namespace {

struct Line {
    bool pass = true;
    std::ostringstream detail;
    void need(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

RingPtr F101(int n) {
    static const std::vector<std::string> names{"x", "y", "z"};
    return make_ring(Field::prime(101), n, MonoOrder::grevlex, {names.begin(), names.begin() + n});
}

bool acyclic(const DiffModule& D) {
    for (const auto& piece : homology(D).pieces)
        if (!piece.length.finite || piece.length.length != 0) return false;
    return true;
}

std::vector<int> level_ranks(const FreeFlag& F) {
    std::vector<int> out(F.max_level() + 1, 0);
    for (int l : F.level) ++out[l];
    return out;
}

bool has_unit(const Matrix& m) {
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            if (m.at(r, c).is_unit()) return true;
    return false;
}

DiffModule koszul_fold(const RingPtr& R, std::vector<Poly> xs, int d = 2) { return fold(koszul_complex(R, xs), d); }

std::vector<Poly> variables(const RingPtr& R) {
    std::vector<Poly> xs;
    for (int i = 0; i < R->nvars(); ++i) xs.push_back(Poly::var(R, i));
    return xs;
}

/// Block sum of two flags.
FreeFlag flag_sum(const FreeFlag& A, const FreeFlag& B) {
    std::vector<int> degree = A.dm.degree, weight = A.dm.weight, level = A.level;
    degree.insert(degree.end(), B.dm.degree.begin(), B.dm.degree.end());
    weight.insert(weight.end(), B.dm.weight.begin(), B.dm.weight.end());
    level.insert(level.end(), B.level.begin(), B.level.end());
    DiffModule D(A.modulus(), degree, Matrix::blockdiag(A.dm.diff, B.dm.diff), weight);
    D.graded = false;
    return dm_to_flag(D, level);
}

/// Shift of a Z/2 flag by one: degrees flip parity, differential negated.
FreeFlag shifted(const FreeFlag& F) {
    FreeFlag out = F;
    for (int& g : out.dm.degree) g = out.dm.wrap(g + 1);
    out.dm.diff = -out.dm.diff;
    return out;
}

/// Folded resolution of a random finite-colength monomial ideal in x, y.
FreeFlag random_piece(const RingPtr& R, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> e(1, 3), kind(0, 1);
    Poly x = Poly::var(R, 0), y = Poly::var(R, 1);
    auto pw = [](const Poly& p, int k) {
        Poly out = Poly::constant(p.ring(), 1);
        for (int t = 0; t < k; ++t) out = out * p;
        return out;
    };
    if (kind(rng) == 0) return flag_from_complex(koszul_complex(R, {pw(x, e(rng)), pw(y, e(rng))}), 2);
    Matrix gens(R, 1, 3);
    gens.at(0, 0) = pw(x, e(rng) + 1);
    gens.at(0, 1) = x * y;
    gens.at(0, 2) = pw(y, e(rng) + 1);
    return flag_from_complex(free_resolution(gens).F, 2);
}

/// Finite-length d = 2 flag over F_101[x, y]: one or two folded resolutions (one possibly
/// shifted), contractible pairs, then a random flag automorphism, so higher strata appear.
FreeFlag random_genuine_flag(const RingPtr& R, std::mt19937_64& rng, int max_pieces = 2) {
    std::uniform_int_distribution<int> pieces(1, max_pieces), coin(0, 1), npairs(0, 2);
    FreeFlag F = random_piece(R, rng);
    if (pieces(rng) == 2) {
        FreeFlag G = random_piece(R, rng);
        F = flag_sum(F, coin(rng) ? shifted(G) : G);
    }
    std::uniform_int_distribution<int> lv(0, std::max(F.max_level() - 1, 0));
    for (int k = npairs(rng); k > 0; --k) F = with_pair(F, lv(rng), coin(rng));
    return scramble(F, rng);
}

/// F_101 analogue of random_flag: kdelta or the rank-four flag with pairs, scrambled.
FreeFlag random_flag_f101(std::mt19937_64& rng) {
    std::bernoulli_distribution coin(0.5);
    FreeFlag F = coin(rng) ? kdelta_flag(F101(3)) : be_resolution(F101(2));
    std::uniform_int_distribution<int> lv(0, std::max(F.max_level() - 1, 0)), col(0, F.modulus() - 1), npairs(1, 3);
    for (int k = npairs(rng); k > 0; --k) F = with_pair(F, lv(rng), col(rng));
    return scramble(F, rng);
}

// 1
void rank_four_example(Line& L) {
    for (const RingPtr& R : {F101(2), Qxy()}) {
        const std::string f = R->field().is_rationals() ? "Q" : "F_101";
        DiffModule D = be_example(R);
        AnchoredResolution Q = quasiminimal(D);
        const FreeFlag& F = Q.flag;
        L.need(F.rank() == 4, f + ": rank 4");
        L.need(dm_check(F.dm).ok, f + ": d^2 = 0");
        L.need(is_anchored_resolution(F), f + ": anchored");
        L.need(level_ranks(F) == std::vector<int>{1, 2, 1} && !has_unit(F.stratum(0)), f + ": minimal Koszul anchor");
        ChainComplex A = anchor(F);
        L.need(homology(A.to_dm()).total() == 1 && A.rank(1) == 2, f + ": anchor resolves k");
        L.need(homology(F.dm).total() == 1 && homology(D).total() == 1, f + ": h(F) = h(D) = 1");
        L.need(is_morphism(Q.augmentation) && acyclic(dm_cone(Q.augmentation)), f + ": quasi-isomorphism");

        // flag-preserving sign changes u with u d u^{-1} equal to the displayed matrix
        const Matrix shown = be_resolution(R).dm.diff;
        auto match = [&](const FreeFlag& G) {
            for (int mask = 0; mask < 16; ++mask) {
                Matrix u = Matrix::identity(R, 4);
                for (int k = 0; k < 4; ++k)
                    if (mask >> k & 1) u.at(k, k) = Poly::constant(R, -1);
                FlagMorphism fu{G, be_resolution(R), u};
                FlagMorphism inv = triangular_invert(fu);
                if (u * G.dm.diff * inv.map == shown) return true;
            }
            return false;
        };
        DiffModule negD = D;
        negD.diff = -D.diff;
        const bool neg = match(quasiminimal(negD).flag);
        const bool lit = match(F);
        L.need(neg, f + ": displayed matrix for -D");
        L.detail << " " << f << ": rank " << F.rank() << ", levels 1/2/1, h = 1, -D matches " << (neg ? "yes" : "no")
                 << ", D matches " << (lit ? "yes" : "no") << ";";
        L.need(lit, f + ": displayed matrix for D itself (it resolves -D; no flag isomorphism exists in char != 2)");
    }
}

// 2
void perturbation_suite(Line& L) {
    std::mt19937_64 rng(2024);
    int ok = 0, total = 0;
    for (int trial = 0; trial < 200; ++trial) {
        FreeFlag G = random_flag_f101(rng);
        Minimized m = minimize(anchor_dm(G), &G.level);
        ++total;
        if (!check_sdr(m.sdr).strong()) continue;
        PerturbedSdr r = perturb_sdr(m.sdr, G.dm.diff - G.stratum(0));
        std::vector<int> lv;
        for (int k : m.kept) lv.push_back(G.level[k]);
        bool good = check_sdr(r.sdr).strong() && r.sdr.big.diff == G.dm.diff && dm_check(r.sdr.small).ok &&
                    r.sdr.small.diff == m.sdr.small.diff + r.delta_small;
        if (good) {
            FreeFlag small = dm_to_flag(r.sdr.small, lv);
            good = drops_level(small, small, r.delta_small, 2) && is_flag_morphism(G, small, r.sdr.p) &&
                   is_flag_morphism(small, G, r.sdr.i);
        }
        ok += good;
    }
    L.detail << " " << ok << "/" << total << " perturbed retractions strong and exact;";
    L.need(ok == total && total >= 200, "every trial");
}

// 3
void anchored_retract(Line& L) {
    for (const auto& [name, F] : {std::pair{std::string("rank-four flag"), be_resolution(Qxy())},
                                  std::pair{std::string("K_delta"), kdelta_flag(Q123())}}) {
        AnchoredRetract r = anchored_as_retract(F);
        L.need(r.identity, name + ": augmentation o i_inf = id");
        L.need(r.sdr.small.diff == F.dm.diff && check_sdr(r.sdr).strong(), name + ": retract onto F");
        L.need(is_morphism(r.ce.augmentation) && acyclic(dm_cone(r.ce.augmentation)), name + ": CE quasi-isomorphism");
    }
}

// 4
void uniqueness(Line& L) {
    std::mt19937_64 rng(4);
    std::vector<std::pair<std::string, DiffModule>> cases{{"rank-two example", be_example(Qxy())},
                                                          {"K_delta", kdelta(Q123())},
                                                          {"K_delta retract", kdelta_retract(Q123())}};
    for (const auto& [name, D] : cases) {
        std::vector<int> order(D.rank());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        DiffModule E = D.permuted(order);
        const RingPtr& R = D.ring();
        Matrix P(R, D.rank(), D.rank());
        for (int k = 0; k < D.rank(); ++k) P.at(k, order[k]) = Poly::constant(R, 1);
        DmMorphism phi{D, E, P}, back{E, D, P.transpose()};
        L.need(is_morphism(phi), name + ": permutation is a morphism");

        CeResolution G1 = ce_resolution(D), G2 = ce_resolution(E);
        FlagMorphism f12 = ce_lift(phi, G1, G2), f21 = ce_lift(back, G2, G1);
        L.need(is_valid(f12) && is_valid(f21), name + ": CE lifts flag-preserving");
        for (auto [G, f] : {std::pair{&G1, Matrix(f21.map * f12.map)}, std::pair{&G2, Matrix(f12.map * f21.map)}}) {
            const Matrix I = Matrix::identity(R, G->flag.rank());
            Matrix s = nullhomotopy(*G, *G, f - I);
            L.need(is_flag_homotopy(G->flag, G->flag, f, I, s), name + ": CE composite flag-homotopic to id");
        }

        AnchoredResolution Q1 = quasiminimal(D), Q2 = quasiminimal(E);
        FlagMorphism Phi = ce_lift(phi, Q1.ce, Q2.ce);
        FlagMorphism u{Q1.flag, Q2.flag, Q2.sdr.p * Phi.map * Q1.sdr.i};
        L.need(is_valid(u) && is_morphism(Q1.flag.dm, Q2.flag.dm, u.map), name + ": quasiminimal map flag-preserving");
        try {
            FlagMorphism v = triangular_invert(u);
            const Matrix I = Matrix::identity(R, Q1.flag.rank());
            L.need(v.map * u.map == I && u.map * v.map == I && is_valid(v), name + ": quasiminimal isomorphism");
        } catch (const std::exception& e) {
            L.need(false, name + ": triangular_invert (" + e.what() + ")");
        }
    }
}

// 5
void adams(Line& L) {
    for (int n = 1; n <= 2; ++n) {
        RingPtr R = n == 1 ? make_ring(Field::rationals(), 1, MonoOrder::grevlex, {"x"}) : Qxy();
        DiffModule K = koszul_fold(R, variables(R));
        long long chi = euler_and_profile(K).chi, cp = chi_psi(cyclic_adams(K, 2));
        L.detail << " n=" << n << ": chi=" << chi << " chi_psi=" << cp << ";";
        L.need(chi == 1 && cp == (1LL << n), "chi(psi^2) = 2^n for n = " + std::to_string(n));
    }
}

// 6
void tensor_length(Line& L) {
    auto R3 = Q123();
    DiffModule K = kdelta(R3);
    DiffModule KK = dm_tensor(K, K);
    TensorLength kk = tensor_length_test(K, K, true);
    L.need(KK.rank() == 64 && kk.h_tensor == 8, "h(K_delta (x) K_delta) = 8, rank 64");
    DiffModule D = kdelta_retract(R3);
    TensorLength dd = tensor_length_test(D, D, false);
    L.detail << " h(D(x)D)=" << dd.h_tensor << " vs h(D)rank(D)=" << dd.bound << ";";
    L.need(dd.h_tensor == 8 && dd.bound == 6 && !dd.within, "retract exceeds the bound");

    std::mt19937_64 rng(6);
    auto R = F101(2);
    int held = 0, strata = 0;
    for (int trial = 0; trial < 100; ++trial) {
        FreeFlag A = random_genuine_flag(R, rng), B = random_genuine_flag(R, rng, 1);
        TensorLength t = tensor_length_test(A.dm, B.dm, true);
        held += t.within;
        strata += A.max_stratum() >= 1;
    }
    L.detail << " " << held << "/100 random flags within the bound (" << strata << " with higher strata);";
    L.need(held == 100, "random flags");
}

// 7
void total_rank(Line& L) {
    for (const RingPtr& R : {Qxy(), Q123(), F101(2)}) {
        TrcResult t = trc_check(koszul_fold(R, variables(R)));
        L.need(t.verdict == Verdict::holds && t.margin == 0, "folded Koszul margin 0");
    }
    std::mt19937_64 rng(7);
    auto R = F101(2);
    int held = 0, strata = 0;
    mpq_class least;
    for (int trial = 0; trial < 100; ++trial) {
        FreeFlag F = random_genuine_flag(R, rng);
        TrcResult t = trc_check(F.dm);
        if (t.verdict == Verdict::holds) ++held;
        strata += F.max_stratum() >= 1;
        if (trial == 0 || t.margin < least) least = t.margin;
    }
    L.detail << " " << held << "/100 random flags hold (" << strata << " with higher strata), least margin "
             << least.get_str() << ";";
    L.need(held == 100, "random flags");
}

// 8
void dutta(Line& L) {
    auto F3 = Field::prime(3);
    for (int n = 1; n <= 2; ++n) {
        RingPtr R = make_ring(F3, n);
        DuttaSequence s = dutta_sequence(koszul_fold(R, variables(R)), 3);
        bool constant = s.values.size() == 4;
        for (const auto& v : s.values) constant = constant && v == s.values[0];
        L.detail << " n=" << n << ":";
        for (const auto& v : s.values) L.detail << " " << v.get_str();
        L.detail << ";";
        L.need(constant, "constant for n = " + std::to_string(n));
    }
}

// 9
void non_fullness(Line& L) {
    auto R = Qxy();
    ChainComplex A(R, 0, {{0}, {0}, {0}}), B(R, 0, {{0}, {0}, {0}});
    A.set_d(1, Matrix::parse(R, {{"1"}}));
    B.set_d(2, Matrix::parse(R, {{"1"}}));
    DiffModule fa = fold(A, 1), fb = fold(B, 1);
    Matrix iso(R, 3, 3);
    iso.at(1, 0) = iso.at(2, 1) = iso.at(0, 2) = Poly::constant(R, 1);
    L.need(is_morphism(fa, fb, iso) && is_morphism(fb, fa, iso.transpose()) &&
               iso * iso.transpose() == Matrix::identity(R, 3),
           "folds isomorphic");
    auto support = [](const ChainComplex& C) {
        std::vector<int> out;
        DmHomology H = homology(C.to_dm());
        for (int i = 0; i < 3; ++i)
            if (!H.vanishes(i)) out.push_back(i);
        return out;
    };
    L.need(support(A) == std::vector<int>{2} && support(B) == std::vector<int>{0}, "homology in {2} and {0}");
    L.need(!respects_degree(A.to_dm(), B.to_dm(), iso), "the isomorphism does not respect the Z-grading");
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double limit;  // seconds, 0 for none
        std::function<void(Line&)> run;
    };
    const std::vector<Criterion> criteria{
        {"rank-four quasiminimal example", 5, rank_four_example},
        {"perturbation lemma, 200 random retractions over F_101", 60, perturbation_suite},
        {"anchored flags as retracts of their CE resolutions", 0, anchored_retract},
        {"CE and quasiminimal uniqueness under permuted generators", 0, uniqueness},
        {"chi(psi^2 fold Koszul(x_1..x_n)) = 2^n", 120, adams},
        {"tensor length facts", 0, tensor_length},
        {"total rank inequality", 0, total_rank},
        {"Dutta sequences constant over F_3", 0, dutta},
        {"folded complexes isomorphic with distinct homology degrees", 0, non_fullness},
    };
    bool all = true;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Line L;
        auto start = std::chrono::steady_clock::now();
        try {
            criteria[k].run(L);
        } catch (const std::exception& e) {
            L.need(false, std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (criteria[k].limit > 0 && secs >= criteria[k].limit) L.need(false, "time limit");
        all = all && L.pass;
        std::printf("criterion %zu: %s  %s (%.2fs%s)%s\n", k + 1, L.pass ? "PASS" : "FAIL", criteria[k].name, secs,
                    criteria[k].limit > 0 ? (" of " + std::to_string(static_cast<int>(criteria[k].limit)) + "s").c_str() : "",
                    L.detail.str().c_str());
    }
    return all ? 0 : 1;
}
