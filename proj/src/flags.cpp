#include "dmflag/flags.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace dmflag {

namespace {

Matrix level_sign(const std::vector<int>& level, const RingPtr& R) {
    const int n = static_cast<int>(level.size());
    Matrix S(R, n, n);
    for (int k = 0; k < n; ++k) S.at(k, k) = Poly::constant(R, level[k] % 2 == 0 ? 1 : -1);
    return S;
}

Matrix drop_part(const std::vector<int>& src_level, const std::vector<int>& tgt_level, const Matrix& f,
                 int drop) {
    Matrix out(f.ring(), f.rows(), f.cols());
    for (int r = 0; r < f.rows(); ++r)
        for (int c = 0; c < f.cols(); ++c)
            if (src_level[c] - tgt_level[r] == drop) out.at(r, c) = f.at(r, c);
    return out;
}

int max_drop(const std::vector<int>& src_level, const std::vector<int>& tgt_level, const Matrix& f) {
    int m = -1;
    for (int r = 0; r < f.rows(); ++r)
        for (int c = 0; c < f.cols(); ++c)
            if (!f.at(r, c).is_zero()) m = std::max(m, src_level[c] - tgt_level[r]);
    return m;
}

}  // namespace

int FreeFlag::max_level() const {
    int m = -1;
    for (int l : level) m = std::max(m, l);
    return m;
}

int FreeFlag::column(int k) const { return dm.wrap(dm.degree[k] - level[k]); }

std::vector<int> FreeFlag::columns() const {
    std::set<int> s;
    for (int k = 0; k < rank(); ++k) s.insert(column(k));
    return {s.begin(), s.end()};
}

Matrix FreeFlag::stratum(int t) const { return drop_part(level, level, dm.diff, t + 1); }

int FreeFlag::max_stratum() const { return std::max(max_drop(level, level, dm.diff) - 1, -1); }

std::vector<int> FreeFlag::indices(int lvl, int col) const {
    std::vector<int> out;
    for (int k = 0; k < rank(); ++k)
        if (level[k] == lvl && column(k) == dm.wrap(col)) out.push_back(k);
    return out;
}

FreeFlag dm_to_flag(const DiffModule& D, std::vector<int> level) {
    if (static_cast<int>(level.size()) != D.rank()) throw FlagError("one level per generator is required");
    for (int l : level)
        if (l < 0) throw FlagError("levels must be nonnegative");
    for (int r = 0; r < D.rank(); ++r)
        for (int c = 0; c < D.rank(); ++c)
            if (!D.diff.at(r, c).is_zero() && level[c] - level[r] < 1)
                throw FlagError("entry (" + std::to_string(r) + ", " + std::to_string(c) +
                                ") does not lower the flag degree");
    return {D, std::move(level)};
}

FreeFlag flag_from_complex(const ChainComplex& C, int d) {
    if (C.lo() < 0) throw FlagError("complex must start in degree >= 0");
    DiffModule D = fold(C, d);
    return dm_to_flag(D, D.aux);
}

FreeFlag flag_from_strata(int modulus, std::vector<int> level, std::vector<int> column,
                          const std::vector<Matrix>& strata, std::vector<int> weight, int shift) {
    if (strata.empty()) throw FlagError("at least one stratum is required");
    const RingPtr& R = strata.front().ring();
    const int n = static_cast<int>(level.size());
    if (static_cast<int>(column.size()) != n) throw FlagError("one column per generator is required");
    Matrix total(R, n, n);
    for (std::size_t t = 0; t < strata.size(); ++t) {
        const Matrix& s = strata[t];
        if (s.rows() != n || s.cols() != n) throw FlagError("stratum has the wrong size");
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (!s.at(r, c).is_zero() && level[c] - level[r] != static_cast<int>(t) + 1)
                    throw FlagError("stratum " + std::to_string(t) + " entry (" + std::to_string(r) + ", " +
                                    std::to_string(c) + ") has the wrong level drop");
        total += s;
    }
    std::vector<int> degree(n);
    for (int k = 0; k < n; ++k) degree[k] = level[k] + column[k];
    const bool graded = !weight.empty();
    DiffModule D(modulus, degree, total, weight, shift);
    D.graded = graded;
    return dm_to_flag(D, std::move(level));
}

bool drops_level(const FreeFlag& src, const FreeFlag& tgt, const Matrix& f, int min_drop) {
    for (int r = 0; r < f.rows(); ++r)
        for (int c = 0; c < f.cols(); ++c)
            if (!f.at(r, c).is_zero() && src.level[c] - tgt.level[r] < min_drop) return false;
    return true;
}

bool is_flag_morphism(const FreeFlag& src, const FreeFlag& tgt, const Matrix& f) {
    return is_morphism(src.dm, tgt.dm, f) && drops_level(src, tgt, f, 0);
}

bool is_flag_homotopy(const FreeFlag& src, const FreeFlag& tgt, const Matrix& f, const Matrix& g,
                      const Matrix& h) {
    return is_homotopy(src.dm, tgt.dm, f, g, h) && drops_level(src, tgt, h, -1);
}

Matrix map_stratum(const FreeFlag& src, const FreeFlag& tgt, const Matrix& f, int t) {
    return drop_part(src.level, tgt.level, f, t);
}

bool strata_identities_hold(const FreeFlag& F) {
    const int top = F.max_stratum();
    std::vector<Matrix> delta;
    for (int t = 0; t <= top; ++t) delta.push_back(F.stratum(t));
    for (int i = 0; i <= 2 * top; ++i) {
        Matrix sum(F.ring(), F.rank(), F.rank());
        for (int a = std::max(0, i - top); a <= std::min(i, top); ++a) sum += delta[a] * delta[i - a];
        if (!sum.is_zero()) return false;
    }
    return true;
}

bool is_valid(const FlagMorphism& f) { return is_flag_morphism(f.source, f.target, f.map); }

namespace {

ChainComplex anchor_on(const FreeFlag& F, const std::vector<std::vector<int>>& gens) {
    std::vector<std::vector<int>> weights;
    for (const auto& g : gens) {
        std::vector<int> w;
        for (int k : g) w.push_back(F.dm.weight[k]);
        weights.push_back(std::move(w));
    }
    if (weights.empty()) weights.emplace_back();
    ChainComplex C(F.ring(), 0, std::move(weights));
    Matrix d0 = F.stratum(0);
    for (int i = 1; i < static_cast<int>(gens.size()); ++i) C.set_d(i, d0.select(gens[i - 1], gens[i]));
    return C;
}

}  // namespace

ChainComplex anchor(const FreeFlag& F) {
    std::vector<std::vector<int>> gens(std::max(F.max_level() + 1, 0));
    for (int k = 0; k < F.rank(); ++k) gens[F.level[k]].push_back(k);
    return anchor_on(F, gens);
}

std::vector<AnchorColumn> anchor_columns(const FreeFlag& F) {
    std::vector<AnchorColumn> out;
    for (int j : F.columns()) {
        AnchorColumn col;
        col.column = j;
        for (int i = 0; i <= F.max_level(); ++i) col.generators.push_back(F.indices(i, j));
        col.complex = anchor_on(F, col.generators);
        out.push_back(std::move(col));
    }
    return out;
}

bool is_anchored_resolution(const FreeFlag& F) {
    for (const auto& col : anchor_columns(F))
        for (int i = 1; i <= col.complex.hi(); ++i)
            if (!is_exact_at(col.complex, i)) return false;
    return true;
}

FlagMorphism triangular_invert(const FlagMorphism& f) {
    if (!drops_level(f.source, f.target, f.map, 0)) throw FlagError("map is not flag-preserving");
    const RingPtr& R = f.source.ring();
    const int n = f.source.rank();
    if (f.target.rank() != n) throw FlagError("ranks differ, anchor part cannot be invertible");
    Matrix phi0 = f.stratum(0);
    Matrix I = Matrix::identity(R, n);
    auto inv0 = lift_matrix(I, phi0);
    if (!inv0 || *inv0 * phi0 != I) throw FlagError("anchor part is not invertible");
    Matrix step = -(*inv0 * (f.map - phi0));
    Matrix inv = *inv0, power = *inv0;
    for (int k = 0; k <= f.source.max_level() + 1; ++k) {
        power = step * power;
        if (power.is_zero()) break;
        inv += power;
    }
    return {f.target, f.source, inv};
}

bool tau_relations_hold(const TauFlag& F) {
    FreeFlag shape = F.as_flag_data();
    const int top = shape.max_stratum();
    std::vector<Matrix> delta;
    for (int t = 0; t <= top; ++t) delta.push_back(shape.stratum(t));
    for (int i = 0; i <= 2 * top; ++i) {
        Matrix sum(shape.ring(), shape.rank(), shape.rank());
        for (int a = std::max(0, i - top); a <= std::min(i, top); ++a) {
            Matrix term = delta[a] * delta[i - a];
            sum += a % 2 == 0 ? term : -term;
        }
        if (!sum.is_zero()) return false;
    }
    return true;
}

bool is_tau_morphism(const TauFlag& src, const TauFlag& tgt, const Matrix& psi) {
    FreeFlag s = src.as_flag_data(), t = tgt.as_flag_data();
    if (!drops_level(s, t, psi, 0)) return false;
    const int ts = std::max(s.max_stratum(), t.max_stratum());
    const int tp = max_drop(s.level, t.level, psi);
    for (int i = 0; i <= ts + tp + 1; ++i) {
        Matrix lhs(psi.ring(), psi.rows(), psi.cols()), rhs = lhs;
        for (int j = 0; j <= i; ++j) {
            Matrix a = t.stratum(j) * map_stratum(s, t, psi, i - j);
            lhs += j % 2 == 0 ? a : -a;
            rhs += map_stratum(s, t, psi, j) * s.stratum(i - j);
        }
        if (lhs != (i % 2 == 0 ? rhs : -rhs)) return false;
    }
    return true;
}

TauFlag twist_phi(const FreeFlag& F) {
    TauFlag out{F.dm, F.level};
    out.carrier.diff = level_sign(F.level, F.ring()) * F.dm.diff;
    return out;
}

FreeFlag twist_phi_inverse(const TauFlag& F) {
    FreeFlag out{F.carrier, F.level};
    out.dm.diff = level_sign(F.level, F.carrier.ring()) * F.carrier.diff;
    return out;
}

Matrix twist_phi_map(const std::vector<int>& src_level, const std::vector<int>& tgt_level, const Matrix& f) {
    Matrix out = f;
    for (int r = 0; r < f.rows(); ++r)
        for (int c = 0; c < f.cols(); ++c)
            if ((src_level[c] - tgt_level[r]) % 2 != 0) out.at(r, c) = -f.at(r, c);
    return out;
}

bool AnchorHomology::finite() const {
    return std::all_of(h0.begin(), h0.end(), [](const QuotientLength& q) { return q.finite; });
}

long long AnchorHomology::total() const {
    long long s = 0;
    for (const auto& q : h0) s += q.length;
    return s;
}

AnchorHomology flag_homology_via_anchor(const FreeFlag& F) {
    if (!is_anchored_resolution(F)) throw FlagError("flag is not an anchored resolution");
    AnchorHomology out;
    for (const auto& col : anchor_columns(F)) {
        out.column.push_back(col.column);
        const ChainComplex& C = col.complex;
        if (C.rank(0) == 0)
            out.h0.push_back({true, 0});
        else
            out.h0.push_back(quotient_length(C.d(1)));
    }
    return out;
}

}  // namespace dmflag
