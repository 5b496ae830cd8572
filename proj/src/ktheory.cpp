#include "dmflag/ktheory.hpp"

#include <cstdlib>

namespace dmflag {

namespace {

bool is_prime(int k) {
    if (k < 2) return false;
    for (int q = 2; q * q <= k; ++q)
        if (k % q == 0) return false;
    return true;
}

int parity(const DiffModule& D, int g) { return std::abs(D.degree[g]) % 2; }

}  // namespace

std::optional<mpq_class> root_of_unity(const RingPtr& R, int k) {
    const Field& F = R->field();
    if (k == 1) return F.from_int(1);
    if (k == 2) {
        if (F.characteristic() == 2) return std::nullopt;
        return F.from_int(-1);
    }
    if (F.is_rationals()) return std::nullopt;
    const long p = F.characteristic();
    for (long a = 2; a < p; ++a) {
        mpq_class z = F.from_int(a);
        if (F.pow(z, k) == F.from_int(1)) return z;
    }
    return std::nullopt;
}

CyclicPower tensor_power_cyclic(const DiffModule& P, int k) {
    const RingPtr& R = P.ring();
    if (!is_prime(k)) throw RingError("tensor power needs a prime k");
    if (R->field().characteristic() == static_cast<std::uint32_t>(k)) throw RingError("k is not a unit");
    if (!root_of_unity(R, k)) throw RingError("missing root of unity");
    CyclicPower out;
    out.power = P;
    for (int t = 1; t < k; ++t) out.power = dm_tensor(out.power, P);
    const int n = P.rank();
    long long total = 1;
    for (int t = 0; t < k; ++t) total *= n;
    out.sigma = Matrix(R, static_cast<int>(total), static_cast<int>(total));
    std::vector<int> digits(k);
    for (long long idx = 0; idx < total; ++idx) {
        long long rest = idx;
        for (int t = k - 1; t >= 0; --t) {
            digits[t] = static_cast<int>(rest % n);
            rest /= n;
        }
        // move the last factor to the front past the others
        int moved = parity(P, digits[k - 1]), others = 0;
        for (int t = 0; t < k - 1; ++t) others += parity(P, digits[t]);
        long long target = digits[k - 1];
        for (int t = 0; t < k - 1; ++t) target = target * n + digits[t];
        out.sigma.at(static_cast<int>(target), static_cast<int>(idx)) =
            Poly::constant(R, (moved * others) % 2 == 0 ? 1 : -1);
    }
    return out;
}

EigenSplit eigen_split(const DiffModule& T, const Matrix& sigma, int k, const mpq_class& zeta) {
    const RingPtr& R = T.ring();
    const Field& F = R->field();
    const int n = T.rank();
    std::vector<int> image(n, -1);
    std::vector<mpq_class> sign(n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) {
            const Poly& v = sigma.at(r, c);
            if (v.is_zero()) continue;
            if (image[c] >= 0 || !v.is_unit()) throw RingError("sigma is not a signed permutation");
            image[c] = r;
            sign[c] = v.constant_term();
        }
    for (int c = 0; c < n; ++c)
        if (image[c] < 0) throw RingError("sigma is not a signed permutation");

    EigenSplit out;
    out.base = T;
    out.power = k;
    out.zeta = zeta;
    std::vector<std::vector<std::vector<std::pair<int, mpq_class>>>> vecs(k);  // i -> vectors -> entries
    std::vector<std::vector<int>> reps(k);
    std::vector<bool> seen(n, false);
    for (int v = 0; v < n; ++v) {
        if (seen[v]) continue;
        // orbit v, sigma v, ...; sigma^t e_v = c_t e_{o_t}
        std::vector<int> orbit;
        std::vector<mpq_class> coeff;
        int cur = v;
        mpq_class c = F.from_int(1);
        while (!seen[cur]) {
            seen[cur] = true;
            orbit.push_back(cur);
            coeff.push_back(c);
            c = F.mul(c, sign[cur]);
            cur = image[cur];
        }
        if (cur != v) throw RingError("sigma is not a permutation");
        const int L = static_cast<int>(orbit.size());
        for (int i = 0; i < k; ++i) {
            mpq_class lambda = F.pow(zeta, i);
            if (F.pow(lambda, L) != c) continue;  // sigma^L e_v = c e_v
            mpq_class linv = F.inv(lambda), w = F.from_int(1);
            std::vector<std::pair<int, mpq_class>> u;
            for (int t = 0; t < L; ++t) {
                u.emplace_back(orbit[t], F.mul(w, coeff[t]));
                w = F.mul(w, linv);
            }
            vecs[i].push_back(std::move(u));
            reps[i].push_back(v);
        }
    }
    for (int i = 0; i < k; ++i) {
        const int r = static_cast<int>(vecs[i].size());
        Matrix B(R, n, r), L(R, r, n);
        std::vector<int> degree, weight;
        for (int q = 0; q < r; ++q) {
            for (const auto& [row, val] : vecs[i][q]) B.at(row, q) = Poly::constant(R, val);
            L.at(q, reps[i][q]) = Poly::constant(R, 1);
            degree.push_back(T.degree[reps[i][q]]);
            weight.push_back(T.weight[reps[i][q]]);
        }
        Matrix d = L * T.diff * B;
        if (T.diff * B != B * d) throw RingError("eigenspace not closed under the differential");
        DiffModule piece(T.modulus, degree, d, weight, T.shift);
        piece.graded = T.graded;
        out.pieces[i] = {piece, B};
    }
    return out;
}

std::vector<DiffModule> CyclicAdams::minus_classes() const {
    std::vector<DiffModule> out;
    for (const auto& [i, piece] : split.pieces)
        if (i != 0) out.push_back(piece.dm);
    return out;
}

CyclicAdams cyclic_adams(const DiffModule& D, int k, const ResolveOptions& opts) {
    if (D.modulus != 2) throw RingError("cyclic Adams operations need modulus 2");
    auto zeta = root_of_unity(D.ring(), k);
    if (!zeta) throw RingError("missing root of unity");
    CyclicAdams out;
    out.anchored = quasiminimal(D, opts);
    CyclicPower T = tensor_power_cyclic(out.anchored.flag.dm, k);
    out.split = eigen_split(T.power, T.sigma, k, *zeta);
    return out;
}

RankProfile euler_and_profile(const DiffModule& D, std::optional<int> codim) {
    RankProfile p;
    p.rank = D.rank();
    p.dim = D.ring()->nvars();
    DmHomology H = homology(D);
    const int d = D.modulus == 0 ? 0 : D.modulus;
    bool finite = true;
    std::vector<int> degs = D.degrees();
    int top = d > 0 ? d : (degs.empty() ? 0 : degs.back() + 1);
    p.h.assign(std::max(top, 0), 0);
    for (const auto& piece : H.pieces) {
        if (!piece.length.finite) {
            finite = false;
            continue;
        }
        if (piece.degree >= 0 && piece.degree < top) p.h[piece.degree] = piece.length.length;
    }
    if (!finite) {
        if (!codim) throw RingError("homology has infinite length and no codimension was given");
        for (const auto& piece : H.pieces)
            if (!piece.length.finite && piece.degree >= 0 && piece.degree < top) p.h[piece.degree] = -1;
        p.codim = *codim;
        p.total = -1;
        return p;
    }
    for (int i = 0; i < top; ++i) {
        p.total += p.h[i];
        p.chi += i % 2 == 0 ? p.h[i] : -p.h[i];
    }
    p.codim = codim ? *codim : p.dim;
    return p;
}

long long chi_psi(const CyclicAdams& a) {
    return euler_and_profile(a.plus()).chi - euler_and_profile(a.minus()).chi;
}

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::inapplicable: return "inapplicable";
    }
    return "inapplicable";
}

TrcResult trc_verdict(const RankProfile& p) {
    TrcResult out;
    int nonzero = 0;
    for (long long v : p.h)
        if (v != 0) ++nonzero;
    out.concentrated = nonzero == 1;
    mpz_class two_c = 1, two_dim = 1;
    for (int i = 0; i < p.codim; ++i) two_c *= 2;
    for (int i = 0; i < p.dim; ++i) two_dim *= 2;
    if (out.concentrated) out.codim_bound = p.rank >= two_c;
    if (p.total > 0) {
        out.bound = mpq_class(mpz_class(two_dim * static_cast<long>(std::abs(p.chi))), mpz_class(static_cast<long>(p.total)));
        out.bound.canonicalize();
        out.margin = mpq_class(p.rank) - out.bound;
        out.verdict = out.margin >= 0 && out.codim_bound ? Verdict::holds : Verdict::fails;
    } else if (out.concentrated) {
        out.margin = mpq_class(p.rank) - mpq_class(two_c);
        out.bound = mpq_class(two_c);
        out.verdict = out.codim_bound ? Verdict::holds : Verdict::fails;
    }
    return out;
}

TrcResult trc_check(const DiffModule& D, std::optional<int> codim) {
    if (D.modulus != 2) throw RingError("the rank inequality is stated for modulus 2");
    return trc_verdict(euler_and_profile(D, codim));
}

TensorLength tensor_length_test(const DiffModule& D, const DiffModule& D2, bool flags) {
    if (D.modulus == 1) throw RingError("tensor length bound needs modulus other than 1");
    RankProfile p = euler_and_profile(D);
    TensorLength out;
    out.h_tensor = euler_and_profile(dm_tensor(D, D2)).total;
    out.bound = p.total * D2.rank();
    out.within = out.h_tensor <= out.bound;
    out.applicable = flags;
    return out;
}

DiffModule frobenius_dm(const DiffModule& D, unsigned e) {
    const std::uint32_t p = D.ring()->field().characteristic();
    if (p == 0) throw RingError("frobenius requires positive characteristic");
    int q = 1;
    for (unsigned t = 0; t < e; ++t) q *= static_cast<int>(p);
    DiffModule out = D;
    for (int r = 0; r < D.rank(); ++r)
        for (int c = 0; c < D.rank(); ++c)
            if (!D.diff.at(r, c).is_zero()) out.diff.at(r, c) = D.diff.at(r, c).frobenius(e);
    for (int& w : out.weight) w *= q;
    out.shift *= q;
    return out;
}

DuttaSequence dutta_sequence(const DiffModule& D, unsigned E) {
    const std::uint32_t p = D.ring()->field().characteristic();
    if (p == 0) throw RingError("frobenius requires positive characteristic");
    const int dim = D.ring()->nvars();
    DuttaSequence out;
    mpz_class scale = 1;
    for (unsigned e = 0; e <= E; ++e) {
        RankProfile prof = euler_and_profile(frobenius_dm(D, e));
        mpq_class v(mpz_class(static_cast<long>(prof.chi)), scale);
        v.canonicalize();
        out.values.push_back(v);
        for (int t = 0; t < dim; ++t) scale *= p;
    }
    out.stabilized = out.values.size() >= 2 && out.values[out.values.size() - 1] == out.values[out.values.size() - 2];
    return out;
}

}  // namespace dmflag
