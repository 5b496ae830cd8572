#include "dmflag/homalg.hpp"

#include "dmflag/groebner.hpp"

#include <algorithm>
#include <numeric>

namespace dmflag {

ChainComplex::ChainComplex(RingPtr ring, int lo, std::vector<std::vector<int>> weights)
    : ring_(std::move(ring)), lo_(lo), weights_(std::move(weights)) {
    for (int k = 0; k < length(); ++k) {
        int rows = k == 0 ? 0 : static_cast<int>(weights_[k - 1].size());
        d_.emplace_back(ring_, rows, static_cast<int>(weights_[k].size()));
    }
}

int ChainComplex::rank(int i) const {
    if (i < lo_ || i > hi()) return 0;
    return static_cast<int>(weights_[i - lo_].size());
}

const std::vector<int>& ChainComplex::weights(int i) const {
    static const std::vector<int> none;
    if (i < lo_ || i > hi()) return none;
    return weights_[i - lo_];
}

int ChainComplex::total_rank() const {
    int n = 0;
    for (const auto& w : weights_) n += static_cast<int>(w.size());
    return n;
}

Matrix ChainComplex::d(int i) const {
    if (i <= lo_ || i > hi()) return Matrix(ring_, rank(i - 1), rank(i));
    return d_[i - lo_];
}

void ChainComplex::set_d(int i, Matrix m) {
    if (i <= lo_ || i > hi()) throw RingError("differential index outside the support");
    if (m.rows() != rank(i - 1) || m.cols() != rank(i)) throw RingError("differential shape mismatch");
    d_[i - lo_] = std::move(m);
}

int ChainComplex::offset(int i) const {
    int off = 0;
    for (int j = lo_; j < i && j <= hi(); ++j) off += rank(j);
    return off;
}

DiffModule ChainComplex::to_dm(bool graded) const {
    std::vector<int> degree, weight;
    for (int i = lo_; i <= hi(); ++i)
        for (int w : weights(i)) {
            degree.push_back(i);
            weight.push_back(w);
        }
    const int n = static_cast<int>(degree.size());
    Matrix M(ring_, n, n);
    for (int i = lo_ + 1; i <= hi(); ++i) M.set_block(offset(i - 1), offset(i), d(i));
    DiffModule D(0, degree, M, weight);
    D.graded = graded;
    return D;
}

ChainComplex ChainComplex::from_dm(const DiffModule& D) {
    if (D.modulus != 0) throw RingError("complex requires modulus 0");
    auto degs = D.degrees();
    int lo = degs.empty() ? 0 : degs.front();
    int hi = degs.empty() ? -1 : degs.back();
    std::vector<std::vector<int>> weights;
    for (int i = lo; i <= hi; ++i) {
        std::vector<int> w;
        for (int k : D.indices(i)) w.push_back(D.weight[k]);
        weights.push_back(w);
    }
    ChainComplex C(D.ring(), lo, weights);
    for (int i = lo + 1; i <= hi; ++i) C.set_d(i, D.block(i - 1, i));
    return C;
}

bool ChainComplex::is_graded_complex() const {
    for (int i = lo_ + 1; i <= hi(); ++i) {
        Matrix m = d(i);
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < m.cols(); ++c) {
                const Poly& e = m.at(r, c);
                if (!e.is_zero() && (!e.is_homogeneous() || *e.degree() != weights(i)[c] - weights(i - 1)[r]))
                    return false;
            }
    }
    return true;
}

bool ChainComplex::squares_to_zero() const {
    for (int i = lo_ + 2; i <= hi(); ++i)
        if (!(d(i - 1) * d(i)).is_zero()) return false;
    return true;
}

ChainComplex ChainComplex::trimmed() const {
    int a = lo_, b = hi();
    while (a <= b && rank(a) == 0) ++a;
    while (b >= a && rank(b) == 0) --b;
    if (a > b) return ChainComplex(ring_, 0, {});
    std::vector<std::vector<int>> w(weights_.begin() + (a - lo_), weights_.begin() + (b - lo_ + 1));
    ChainComplex C(ring_, a, w);
    for (int i = a + 1; i <= b; ++i) C.set_d(i, d(i));
    return C;
}

bool is_exact_at(const ChainComplex& C, int i) {
    const int n = C.rank(i);
    if (n == 0) return true;
    Matrix di = C.d(i), up = C.d(i + 1);
    Matrix Z = (di.rows() == 0 || di.is_zero()) ? Matrix::identity(C.ring(), n) : syzygies(di);
    return lift_matrix(Z, up).has_value();
}

bool is_chain_map(const ChainComplex& src, const ChainComplex& tgt, const ChainMap& f) {
    const int s = f.shift;
    const bool odd = s % 2 != 0;
    for (int i = src.lo(); i <= src.hi(); ++i) {
        const Matrix& fi = f.at(i);
        if (fi.rows() != tgt.rank(i + s) || fi.cols() != src.rank(i)) return false;
        Matrix lhs = tgt.d(i + s) * fi;
        Matrix rhs = (i - 1 >= src.lo()) ? f.at(i - 1) * src.d(i) : Matrix(src.ring(), lhs.rows(), lhs.cols());
        if (odd) rhs = -rhs;
        if (lhs != rhs) return false;
    }
    return true;
}

std::vector<int> column_weights(const Matrix& m, const std::vector<int>& row_weights) {
    std::vector<int> w(m.cols(), 0);
    for (int c = 0; c < m.cols(); ++c) {
        bool any = false;
        for (int r = 0; r < m.rows(); ++r) {
            const Poly& e = m.at(r, c);
            if (e.is_zero()) continue;
            int v = row_weights[r] + *e.degree();
            w[c] = any ? std::max(w[c], v) : v;
            any = true;
        }
    }
    return w;
}

namespace {

/// Complex ending in degree 0 from its differentials d_1, d_2, ...
ChainComplex assemble(const RingPtr& R, const std::vector<int>& w0, const std::vector<Matrix>& ds) {
    std::vector<std::vector<int>> weights{w0};
    for (const auto& m : ds) weights.push_back(column_weights(m, weights.back()));
    ChainComplex C(R, 0, weights);
    for (std::size_t k = 0; k < ds.size(); ++k) C.set_d(static_cast<int>(k) + 1, ds[k]);
    return C;
}

/// Iterated syzygies starting from d_1 : F_1 -> F_0, minimizing after every step.
Resolution resolve_from(const Matrix& first_d, Matrix aug, Matrix rel, ResolutionOptions opts,
                        std::vector<int> w0) {
    const RingPtr& R = aug.ring();
    const int cap = opts.length_cap >= 0 ? opts.length_cap : 2 * R->nvars() + 4;
    std::vector<Matrix> ds{first_d};
    while (true) {
        if (opts.minimize) {
            ChainComplex C = assemble(R, w0, ds);
            DiffModule big = C.to_dm(false);
            Minimized m = minimize(big);
            const DiffModule& small = m.sdr.small;
            aug = aug * m.sdr.i.select(big.indices(0), small.indices(0));
            w0.clear();
            for (int k : small.indices(0)) w0.push_back(small.weight[k]);
            std::vector<Matrix> next;
            for (int i = 1; i <= C.hi(); ++i) next.push_back(small.block(i - 1, i));
            ds = std::move(next);
        }
        while (!ds.empty() && ds.back().cols() == 0) ds.pop_back();
        if (ds.empty()) break;
        Matrix S = syzygies(ds.back());
        if (S.cols() == 0) break;
        if (static_cast<int>(ds.size()) + 1 > cap) throw RingError("resolution length cap exceeded");
        ds.push_back(S);
    }
    return {assemble(R, w0, ds), aug, rel};
}

}  // namespace

Resolution free_resolution(const Matrix& presentation, ResolutionOptions opts, std::vector<int> row_weights) {
    const RingPtr& R = presentation.ring();
    const int n = presentation.rows();
    if (row_weights.empty()) row_weights.assign(n, 0);
    return resolve_from(presentation, Matrix::identity(R, n), presentation, opts, row_weights);
}

Resolution resolve_submodule(const Matrix& gens, ResolutionOptions opts, std::vector<int> row_weights) {
    const RingPtr& R = gens.ring();
    if (row_weights.empty()) row_weights.assign(gens.rows(), 0);
    std::vector<int> w0 = column_weights(gens, row_weights);
    return resolve_from(syzygies(gens), gens, Matrix(R, gens.rows(), 0), opts, w0);
}

MinimizedComplex minimize_complex(const ChainComplex& C) {
    Minimized m = minimize(C.to_dm());
    // keep the original window so the DM forms line up
    std::vector<std::vector<int>> weights;
    for (int i = C.lo(); i <= C.hi(); ++i) {
        std::vector<int> w;
        for (int k : m.sdr.small.indices(i)) w.push_back(m.sdr.small.weight[k]);
        weights.push_back(w);
    }
    ChainComplex M(C.ring(), C.lo(), weights);
    for (int i = C.lo() + 1; i <= C.hi(); ++i) M.set_d(i, m.sdr.small.block(i - 1, i));
    return {M, m.sdr};
}

ChainMap comparison_lift(const Matrix& f, const Resolution& src, const Resolution& tgt) {
    const RingPtr& R = f.ring();
    ChainMap phi;
    phi.source_lo = 0;
    Matrix through = Matrix::hstack(tgt.aug, tgt.rel);
    auto base = lift_matrix(f * src.aug, through);
    if (!base) throw RingError("comparison lift failed in degree 0");
    phi.comp.push_back(base->block(0, 0, tgt.F.rank(0), src.F.rank(0)));
    for (int i = 1; i <= src.F.hi(); ++i) {
        Matrix need = phi.comp.back() * src.F.d(i);
        Matrix dt = tgt.F.d(i);
        if (need.is_zero()) {
            phi.comp.emplace_back(R, tgt.F.rank(i), src.F.rank(i));
            continue;
        }
        auto u = lift_matrix(need, dt);
        if (!u) throw RingError("comparison lift failed: target is not a resolution");
        phi.comp.push_back(*u);
    }
    return phi;
}

Horseshoe horseshoe(const Resolution& FA, const Resolution& FC) {
    const RingPtr& R = FA.aug.ring();
    const int top = std::max(FA.F.hi(), FC.F.hi() + 1);
    Horseshoe out;
    out.alpha.emplace_back(R, 0, 0);
    for (int i = 1; i <= FC.F.hi() + 1 && i <= top; ++i) {
        Matrix need = i == 1 ? FC.aug * FC.F.d(1) : out.alpha[i - 1] * FC.F.d(i);
        Matrix through = i == 1 ? FA.aug : FA.F.d(i - 1);
        if (need.is_zero()) {
            out.alpha.emplace_back(R, FA.F.rank(i - 1), FC.F.rank(i));
            continue;
        }
        auto u = lift_matrix(need, through);
        if (!u) throw RingError("horseshoe: sequence is not exact");
        out.alpha.push_back(-*u);
    }
    std::vector<std::vector<int>> weights;
    for (int i = 0; i <= top; ++i) {
        std::vector<int> w = FA.F.weights(i);
        for (int v : FC.F.weights(i)) w.push_back(v);
        weights.push_back(w);
    }
    ChainComplex B(R, 0, weights);
    for (int i = 1; i <= top; ++i) {
        Matrix m(R, B.rank(i - 1), B.rank(i));
        m.set_block(0, 0, FA.F.d(i));
        if (i < static_cast<int>(out.alpha.size())) m.set_block(0, FA.F.rank(i), out.alpha[i]);
        m.set_block(FA.F.rank(i - 1), FA.F.rank(i), FC.F.d(i));
        B.set_d(i, m);
    }
    out.FB = {B, Matrix::hstack(FA.aug, FC.aug), FA.rel};
    return out;
}

ChainComplex cone(const ChainComplex& src, const ChainComplex& tgt, const ChainMap& f) {
    const RingPtr& R = tgt.ring() ? tgt.ring() : src.ring();
    int lo = std::min(tgt.lo(), src.lo() + 1), hi = std::max(tgt.hi(), src.hi() + 1);
    std::vector<std::vector<int>> weights;
    for (int n = lo; n <= hi; ++n) {
        std::vector<int> w = tgt.weights(n);
        for (int v : src.weights(n - 1)) w.push_back(v);
        weights.push_back(w);
    }
    ChainComplex C(R, lo, weights);
    for (int n = lo + 1; n <= hi; ++n) {
        Matrix m(R, C.rank(n - 1), C.rank(n));
        m.set_block(0, 0, tgt.d(n));
        if (src.rank(n - 1) && tgt.rank(n - 1)) m.set_block(0, tgt.rank(n), -f.at(n - 1));
        m.set_block(tgt.rank(n - 1), tgt.rank(n), -src.d(n - 1));
        C.set_d(n, m);
    }
    return C;
}

ChainComplex tensor(const ChainComplex& C, const ChainComplex& D) {
    const RingPtr& R = C.ring();
    const int lo = C.lo() + D.lo(), hi = C.hi() + D.hi();
    // offset of block (i, n - i) inside degree n; blocks run from the top degree of C down
    auto block_offset = [&](int n, int i) {
        int off = 0;
        for (int k = C.hi(); k > i; --k) off += C.rank(k) * D.rank(n - k);
        return off;
    };
    std::vector<std::vector<int>> weights;
    for (int n = lo; n <= hi; ++n) {
        std::vector<int> w;
        for (int i = C.hi(); i >= C.lo(); --i)
            for (int a : C.weights(i))
                for (int b : D.weights(n - i)) w.push_back(a + b);
        weights.push_back(w);
    }
    ChainComplex T(R, lo, weights);
    for (int n = lo + 1; n <= hi; ++n) {
        Matrix m(R, T.rank(n - 1), T.rank(n));
        for (int i = C.lo(); i <= C.hi(); ++i) {
            const int j = n - i, ra = C.rank(i), rb = D.rank(j);
            if (!ra || !rb) continue;
            const int src = block_offset(n, i);
            Matrix dc = C.d(i), dd = D.d(j);
            const int rb0 = D.rank(j), ra1 = C.rank(i - 1), rb1 = D.rank(j - 1);
            const int tA = block_offset(n - 1, i - 1), tB = block_offset(n - 1, i);
            Poly sign = Poly::constant(R, i % 2 == 0 ? 1 : -1);
            for (int a = 0; a < ra; ++a)
                for (int b = 0; b < rb; ++b) {
                    int col = src + a * rb + b;
                    for (int a2 = 0; a2 < ra1; ++a2)
                        if (!dc.at(a2, a).is_zero()) m.at(tA + a2 * rb0 + b, col) += dc.at(a2, a);
                    for (int b2 = 0; b2 < rb1; ++b2)
                        if (!dd.at(b2, b).is_zero()) m.at(tB + a * rb1 + b2, col) += sign * dd.at(b2, b);
                }
        }
        T.set_d(n, m);
    }
    return T;
}

ChainComplex hom_complex(const ChainComplex& C, const ChainComplex& D) {
    const RingPtr& R = C.ring();
    const int lo = D.lo() - C.hi(), hi = D.hi() - C.lo();
    auto block_offset = [&](int n, int i) {
        int off = 0;
        for (int k = C.lo(); k < i; ++k) off += D.rank(k + n) * C.rank(k);
        return off;
    };
    std::vector<std::vector<int>> weights;
    for (int n = lo; n <= hi; ++n) {
        std::vector<int> w;
        for (int i = C.lo(); i <= C.hi(); ++i)
            for (int a : D.weights(i + n))
                for (int b : C.weights(i)) w.push_back(a - b);
        weights.push_back(w);
    }
    ChainComplex H(R, lo, weights);
    for (int n = lo + 1; n <= hi; ++n) {
        Matrix m(R, H.rank(n - 1), H.rank(n));
        Poly sign = Poly::constant(R, n % 2 == 0 ? -1 : 1);  // -(-1)^n
        for (int i = C.lo(); i <= C.hi(); ++i) {
            const int ra = D.rank(i + n), rb = C.rank(i);
            if (!ra || !rb) continue;
            const int src = block_offset(n, i);
            Matrix dD = D.d(i + n), dC = C.d(i + 1);
            const int tA = block_offset(n - 1, i), tB = block_offset(n - 1, i + 1);
            const int rbA = C.rank(i), rbB = C.rank(i + 1), raA = D.rank(i + n - 1);
            for (int a = 0; a < ra; ++a)
                for (int b = 0; b < rb; ++b) {
                    int col = src + a * rb + b;
                    // d_D E_ab
                    for (int a2 = 0; a2 < raA; ++a2)
                        if (!dD.at(a2, a).is_zero()) m.at(tA + a2 * rbA + b, col) += dD.at(a2, a);
                    // -(-1)^n E_ab d_C : sum_b' (d_C)_{b b'} E_{a b'}
                    for (int b2 = 0; b2 < rbB; ++b2)
                        if (!dC.at(b, b2).is_zero()) m.at(tB + a * rbB + b2, col) += sign * dC.at(b, b2);
                }
        }
        H.set_d(n, m);
    }
    return H;
}

ChainComplex koszul_complex(const RingPtr& ring, const std::vector<Poly>& elements) {
    const int n = static_cast<int>(elements.size());
    std::vector<std::vector<unsigned>> subsets(n + 1);
    for (unsigned mask = 0; mask < (1u << n); ++mask) subsets[__builtin_popcount(mask)].push_back(mask);
    // lexicographic order on sorted index lists
    auto as_list = [&](unsigned mask) {
        std::vector<int> l;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1u) l.push_back(i);
        return l;
    };
    for (auto& s : subsets)
        std::sort(s.begin(), s.end(), [&](unsigned a, unsigned b) { return as_list(a) < as_list(b); });
    std::vector<std::vector<int>> weights;
    for (int k = 0; k <= n; ++k) {
        std::vector<int> w;
        for (unsigned mask : subsets[k]) {
            int v = 0;
            for (int i : as_list(mask))
                if (!elements[i].is_zero()) v += *elements[i].degree();
            w.push_back(v);
        }
        weights.push_back(w);
    }
    ChainComplex K(ring, 0, weights);
    for (int k = 1; k <= n; ++k) {
        Matrix m(ring, K.rank(k - 1), K.rank(k));
        for (int c = 0; c < K.rank(k); ++c) {
            auto list = as_list(subsets[k][c]);
            for (int t = 0; t < k; ++t) {
                unsigned rest = subsets[k][c] & ~(1u << list[t]);
                int r = static_cast<int>(std::find(subsets[k - 1].begin(), subsets[k - 1].end(), rest) -
                                         subsets[k - 1].begin());
                m.at(r, c) = t % 2 == 0 ? elements[list[t]] : -elements[list[t]];
            }
        }
        K.set_d(k, m);
    }
    return K;
}

}  // namespace dmflag
