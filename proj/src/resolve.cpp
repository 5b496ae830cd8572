#include "dmflag/resolve.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace dmflag {

namespace {

void note(const ResolveOptions& opts, const std::string& msg) {
    if (opts.progress) opts.progress(msg);
}

/// x with A x = rhs; throws when rhs is outside the image.
Matrix solve(const Matrix& rhs, const Matrix& A, const char* what) {
    const RingPtr& R = rhs.ring();
    if (rhs.is_zero()) return Matrix(R, A.cols(), rhs.cols());
    if (A.cols() == 0) throw RingError(what);
    auto u = lift_matrix(rhs, A);
    if (!u) throw RingError(what);
    return *u;
}

Resolution zero_resolution(const RingPtr& R, int ambient) {
    return {ChainComplex(R, 0, {{}}), Matrix(R, ambient, 0), Matrix(R, ambient, 0)};
}

Matrix embedding(const RingPtr& R, int n, const std::vector<int>& idx) {
    Matrix E(R, n, static_cast<int>(idx.size()));
    for (int p = 0; p < static_cast<int>(idx.size()); ++p) E.at(idx[p], p) = Poly::constant(R, 1);
    return E;
}

std::vector<int> iota(int lo, int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), lo);
    return v;
}

/// Copy of B with differential negated and complex weights lowered by shift.
Resolution negated(const Resolution& B, Matrix aug, Matrix rel, int shift) {
    std::vector<std::vector<int>> weights;
    for (int m = 0; m <= B.F.hi(); ++m) {
        std::vector<int> w = B.F.weights(m);
        for (int& v : w) v -= shift;
        weights.push_back(w);
    }
    ChainComplex C(B.F.ring(), 0, weights);
    for (int m = 1; m <= B.F.hi(); ++m) C.set_d(m, -B.F.d(m));
    return {C, std::move(aug), std::move(rel)};
}

Matrix alpha_at(const Horseshoe& hs, int m, int rows, int cols, const RingPtr& R) {
    if (m >= 1 && m < static_cast<int>(hs.alpha.size())) return hs.alpha[m];
    return Matrix(R, rows, cols);
}

Matrix map_at(const std::vector<Matrix>& f, int m, int rows, int cols, const RingPtr& R) {
    if (m >= 0 && m < static_cast<int>(f.size())) return f[m];
    return Matrix(R, rows, cols);
}

/// Horseshoe (A, C; alpha) with alpha given: d = [[dA, alpha], [0, dC]].
Horseshoe stack(const Resolution& A, const Resolution& C, std::vector<Matrix> alpha) {
    const RingPtr& R = A.aug.ring();
    const int top = std::max(A.F.hi(), C.F.hi());
    std::vector<std::vector<int>> weights;
    for (int m = 0; m <= top; ++m) {
        std::vector<int> w = A.F.weights(m);
        for (int v : C.F.weights(m)) w.push_back(v);
        weights.push_back(w);
    }
    ChainComplex B(R, 0, weights);
    Horseshoe out;
    out.alpha.emplace_back(R, 0, 0);
    for (int m = 1; m <= top; ++m) {
        Matrix a = map_at(alpha, m, A.F.rank(m - 1), C.F.rank(m), R);
        Matrix d(R, B.rank(m - 1), B.rank(m));
        d.set_block(0, 0, A.F.d(m));
        d.set_block(0, A.F.rank(m), a);
        d.set_block(A.F.rank(m - 1), A.F.rank(m), C.F.d(m));
        B.set_d(m, d);
        out.alpha.push_back(a);
    }
    out.FB = {B, Matrix::hstack(A.aug, C.aug), A.rel};
    return out;
}

std::vector<Matrix> chain_comps(const ChainMap& f) { return f.comp; }

/// Lift of f to S.FB -> T.FB, block triangular over the given lifts fA, fC.
std::vector<Matrix> triangular_lift(const Matrix& f, const Resolution& SA, const Resolution& SC, const Horseshoe& S,
                                    const Resolution& TA, const Resolution& TC, const Horseshoe& T,
                                    const std::vector<Matrix>& fA, const std::vector<Matrix>& fC) {
    const RingPtr& R = f.ring();
    const int top = S.FB.F.hi();
    std::vector<Matrix> out;
    Matrix sigma_prev(R, 0, 0);
    for (int m = 0; m <= top; ++m) {
        const int ra = TA.F.rank(m), rc = TC.F.rank(m), ca = SA.F.rank(m), cc = SC.F.rank(m);
        Matrix a = map_at(fA, m, ra, ca, R), c = map_at(fC, m, rc, cc, R);
        Matrix sigma(R, ra, cc);
        if (m == 0) {
            sigma = solve(f * SC.aug - TC.aug * c, TA.aug, "ce_lift: degree 0 lift failed");
        } else {
            Matrix need = map_at(fA, m - 1, TA.F.rank(m - 1), SA.F.rank(m - 1), R) *
                              alpha_at(S, m, SA.F.rank(m - 1), cc, R) +
                          sigma_prev * SC.F.d(m) - alpha_at(T, m, TA.F.rank(m - 1), rc, R) * c;
            sigma = solve(need, TA.F.d(m), "ce_lift: lift failed");
        }
        Matrix phi(R, ra + rc, ca + cc);
        phi.set_block(0, 0, a);
        phi.set_block(0, ca, sigma);
        phi.set_block(ra, ca, c);
        out.push_back(phi);
        sigma_prev = sigma;
    }
    return out;
}

/// Fills flag, augmentation, generators and offsets from the components.
void assemble(CeResolution& G) {
    const DiffModule& D = G.target;
    const RingPtr& R = D.ring();
    G.offsets.assign(G.components.size(), {});
    G.generators.clear();
    std::vector<int> degree, weight, level;
    for (int c = 0; c < static_cast<int>(G.components.size()); ++c) {
        const CeComponent& K = G.components[c];
        const ChainComplex& F = K.Dk.FB.F;
        for (int m = 0; m <= F.hi(); ++m) {
            G.offsets[c].push_back(static_cast<int>(G.generators.size()));
            const int nb = K.B.F.rank(m), nh = K.H.F.rank(m), ng = K.G.F.rank(m);
            const std::vector<int>& w = F.weights(m);
            for (int p = 0; p < nb + nh + ng; ++p) {
                CePart part = p < nb ? CePart::B : p < nb + nh ? CePart::H : CePart::G;
                int pos = part == CePart::B ? p : part == CePart::H ? p - nb : p - nb - nh;
                G.generators.push_back({part, c, m, pos});
                degree.push_back(D.wrap(K.degree + m));
                weight.push_back(w[p] - m * D.shift);
                level.push_back(part == CePart::G ? m + 1 : m);
            }
        }
    }
    const int n = static_cast<int>(G.generators.size());
    Matrix diff(R, n, n), eta(R, D.rank(), n);
    for (int c = 0; c < static_cast<int>(G.components.size()); ++c) {
        const CeComponent& K = G.components[c];
        const ChainComplex& F = K.Dk.FB.F;
        for (int m = 1; m <= F.hi(); ++m) diff.set_block(G.offsets[c][m - 1], G.offsets[c][m], F.d(m));
        if (F.rank(0) > 0) eta.set_block(0, G.offsets[c][0], K.Dk.FB.aug);
    }
    for (int g = 0; g < n; ++g) {
        const CeGenerator& e = G.generators[g];
        if (e.part != CePart::G) continue;
        diff.at(G.index(G.components[e.comp].prev, e.hom, e.pos), g) = Poly::constant(R, 1);
    }
    DiffModule dm(D.modulus, degree, diff, weight, D.shift);
    dm.graded = D.graded;
    G.flag = dm_to_flag(dm, level);
    G.augmentation = {G.flag.dm, D, eta};
}

/// Component list for the ambient degrees of D, prev linked by degree.
std::vector<CeComponent> components_for(const std::vector<int>& degrees, const DiffModule& D) {
    std::vector<CeComponent> out;
    for (int k : degrees) out.push_back({k, -1, {}, {}, {}, {}, {}});
    for (auto& K : out) {
        int want = D.wrap(K.degree - 1);
        for (int c = 0; c < static_cast<int>(out.size()); ++c)
            if (out[c].degree == want) K.prev = c;
    }
    return out;
}

int find_degree(const CeResolution& G, int degree) {
    for (int c = 0; c < static_cast<int>(G.components.size()); ++c)
        if (G.components[c].degree == degree) return c;
    return -1;
}

std::vector<int> span(const CeResolution& G, int comp, int hom, int from, int count) {
    std::vector<int> out;
    for (int q = 0; q < count; ++q) out.push_back(G.index(comp, hom, from + q));
    return out;
}

struct Degenerated {
    SdrData sdr;
    FreeFlag flag;
    Matrix delta_small;
    std::vector<int> anchor;  // ce indices of F^H, the small basis
};

Degenerated degenerate(const CeResolution& G) {
    const RingPtr& R = G.target.ring();
    const int n = G.flag.rank();
    std::vector<int> fh = G.indices(CePart::H);
    Matrix ident = G.identity_part();
    DiffModule split = G.flag.dm;
    split.diff = G.split_part() + ident;
    Matrix delta = G.flag.dm.diff - split.diff;

    DiffModule small = G.flag.dm;
    small.degree.clear();
    small.weight.clear();
    std::vector<int> lv;
    for (int k : fh) {
        small.degree.push_back(G.flag.dm.degree[k]);
        small.weight.push_back(G.flag.dm.weight[k]);
        lv.push_back(G.generators[k].hom);
    }
    small.diff = split.diff.select(fh, fh);
    small.aux.clear();
    Matrix i = embedding(R, n, fh);
    SdrData s{split, small, i.transpose(), i, -ident.transpose()};
    PerturbedSdr r = perturb_sdr(s, delta);
    Degenerated out;
    out.sdr = r.sdr;
    out.flag = dm_to_flag(r.sdr.small, lv);
    out.delta_small = r.delta_small;
    out.anchor = fh;
    return out;
}

}  // namespace

std::vector<int> CeResolution::indices(CePart part) const {
    std::vector<int> out;
    for (int g = 0; g < static_cast<int>(generators.size()); ++g)
        if (generators[g].part == part) out.push_back(g);
    return out;
}

int CeResolution::index(int comp, int hom, int local) const { return offsets.at(comp).at(hom) + local; }

Matrix CeResolution::identity_part() const {
    const int n = flag.rank();
    Matrix out(flag.ring(), n, n);
    for (int g = 0; g < n; ++g) {
        const CeGenerator& e = generators[g];
        if (e.part != CePart::G) continue;
        out.at(index(components[e.comp].prev, e.hom, e.pos), g) = Poly::constant(flag.ring(), 1);
    }
    return out;
}

Matrix CeResolution::split_part() const {
    Matrix out = flag.dm.diff;
    for (int r = 0; r < out.rows(); ++r)
        for (int c = 0; c < out.cols(); ++c)
            if (generators[r].part != generators[c].part || generators[r].comp != generators[c].comp)
                out.at(r, c) = Poly(flag.ring());
    return out;
}

CeResolution ce_resolution(const DiffModule& D, const ResolveOptions& opts) {
    const RingPtr& R = D.ring();
    const int n = D.rank();
    CeResolution G;
    G.target = D;
    G.components = components_for(D.degrees(), D);

    for (auto& K : G.components) {
        std::vector<int> next = D.indices(D.wrap(K.degree + 1));
        Matrix dn = D.diff.select(iota(0, n), next);
        std::vector<int> nonzero;
        for (int c = 0; c < dn.cols(); ++c)
            if (!dn.select(iota(0, n), {c}).is_zero()) nonzero.push_back(c);
        if (nonzero.empty()) K.B = zero_resolution(R, n);
        else K.B = resolve_submodule(dn.select(iota(0, n), nonzero), opts.resolution, D.weight);
    }
    note(opts, "boundaries resolved");

    for (auto& K : G.components) {
        std::vector<int> idx = D.indices(K.degree);
        Matrix dk = D.diff.select(iota(0, n), idx);
        Matrix E = embedding(R, n, idx);
        Matrix z = dk.is_zero() ? Matrix::identity(R, static_cast<int>(idx.size())) : syzygies(dk);
        Matrix zg = E * z;
        if (zg.cols() == 0) {
            K.H = zero_resolution(R, n);
            K.H.rel = K.B.aug;
            continue;
        }
        Matrix pres = Matrix::hstack(syzygies(zg), solve(K.B.aug, zg, "boundary outside the cycles"));
        Resolution res = free_resolution(pres, opts.resolution, column_weights(zg, D.weight));
        K.H = {res.F, zg * res.aug, K.B.aug};
    }
    note(opts, "homology resolved");

    for (auto& K : G.components) {
        K.Z = horseshoe(K.B, K.H);
        if (K.prev < 0) {
            K.G = zero_resolution(R, n);
        } else {
            const Resolution& Bp = G.components[K.prev].B;
            std::vector<int> idx = D.indices(K.degree);
            Matrix L = embedding(R, n, idx) *
                       solve(Bp.aug, D.diff.select(iota(0, n), idx), "boundary without a preimage");
            K.G = negated(Bp, L, K.Z.FB.aug, D.shift);
        }
        K.Dk = horseshoe(K.Z.FB, K.G);
    }
    note(opts, "horseshoes built");
    assemble(G);
    return G;
}

FlagMorphism ce_lift(const DmMorphism& phi, const CeResolution& G, const CeResolution& G2) {
    const RingPtr& R = phi.map.ring();
    const int nc = static_cast<int>(G.components.size());
    std::vector<int> match(nc);
    std::vector<std::vector<Matrix>> psi(nc);
    for (int c = 0; c < nc; ++c) {
        match[c] = find_degree(G2, G.components[c].degree);
        if (match[c] >= 0) psi[c] = chain_comps(comparison_lift(phi.map, G.components[c].B, G2.components[match[c]].B));
    }
    Matrix out(R, G2.flag.rank(), G.flag.rank());
    for (int c = 0; c < nc; ++c) {
        const int c2 = match[c];
        if (c2 < 0) continue;
        const CeComponent &K = G.components[c], &K2 = G2.components[c2];
        std::vector<Matrix> nu = chain_comps(comparison_lift(phi.map, K.H, K2.H));
        std::vector<Matrix> fz = triangular_lift(phi.map, K.B, K.H, K.Z, K2.B, K2.H, K2.Z, psi[c], nu);
        std::vector<Matrix> fg = K.prev >= 0 ? psi[K.prev] : std::vector<Matrix>{};
        std::vector<Matrix> fd = triangular_lift(phi.map, K.Z.FB, K.G, K.Dk, K2.Z.FB, K2.G, K2.Dk, fz, fg);
        for (int m = 0; m < static_cast<int>(fd.size()); ++m) {
            const int rows = K2.Dk.FB.F.rank(m), cols = K.Dk.FB.F.rank(m);
            if (cols == 0) continue;
            if (rows == 0) {
                if (!fd[m].is_zero()) throw RingError("ce_lift: target resolution too short");
                continue;
            }
            out.set_block(G2.index(c2, m, 0), G.index(c, m, 0), fd[m]);
        }
    }
    return {G.flag, G2.flag, out};
}

Matrix nullhomotopy(const CeResolution& G, const CeResolution& G2, const Matrix& f) {
    const RingPtr& R = f.ring();
    const int nc = static_cast<int>(G.components.size());
    std::vector<int> match(nc);
    std::vector<std::vector<Matrix>> sB(nc);
    for (int c = 0; c < nc; ++c) {
        match[c] = find_degree(G2, G.components[c].degree);
        if (match[c] < 0) continue;
        const Resolution &B = G.components[c].B, &B2 = G2.components[match[c]].B;
        const int hiB = B.F.hi(), hiB2 = G2.components[match[c]].Dk.FB.F.hi();
        for (int m = 0; m <= hiB; ++m) {
            Matrix fm(R, B2.F.rank(m), B.F.rank(m));
            if (m <= hiB2 && B.F.rank(m) && B2.F.rank(m))
                fm = f.select(span(G2, match[c], m, 0, B2.F.rank(m)), span(G, c, m, 0, B.F.rank(m)));
            if (m > 0) fm = fm - sB[c][m - 1] * B.F.d(m);
            sB[c].push_back(solve(fm, B2.F.d(m + 1), "nullhomotopy: map does not vanish on boundaries"));
        }
    }
    Matrix S(R, G2.flag.rank(), G.flag.rank());
    for (int c = 0; c < nc; ++c) {
        const int c2 = match[c];
        if (c2 < 0) continue;
        const CeComponent &K = G.components[c], &K2 = G2.components[c2];
        const ChainComplex &F = K.Dk.FB.F, &F2 = K2.Dk.FB.F;
        Matrix prev(R, 0, 0);
        for (int m = 0; m <= F.hi(); ++m) {
            const int cols = F.rank(m), rows = F2.rank(m), up = F2.rank(m + 1);
            const int nb = K.B.F.rank(m), nz2 = K2.Z.FB.F.rank(m + 1);
            Matrix s(R, up, cols);
            if (up > 0) {
                s.set_block(0, 0, map_at(sB[c], m, K2.B.F.rank(m + 1), nb, R));
                if (K.prev >= 0 && K.G.F.rank(m) > 0)
                    s.set_block(nz2, nb + K.H.F.rank(m),
                                -map_at(sB[K.prev], m, K2.G.F.rank(m + 1), K.G.F.rank(m), R));
            }
            Matrix fm(R, rows, cols);
            if (rows && cols) fm = f.select(span(G2, c2, m, 0, rows), span(G, c, m, 0, cols));
            Matrix rhs = fm - F2.d(m + 1) * s;
            if (m > 0) rhs = rhs - prev * F.d(m);
            std::vector<int> unknown = iota(nb, cols - nb), zrows = iota(0, nz2);
            Matrix x = solve(rhs.select(iota(0, rows), unknown), F2.d(m + 1).select(iota(0, rows), zrows),
                             "nullhomotopy: no lift");
            s.set_select(zrows, unknown, x);
            if (up > 0 && cols > 0) S.set_block(G2.index(c2, m + 1, 0), G.index(c, m, 0), s);
            prev = s;
        }
    }
    return S;
}

std::vector<Resolution> AnchoredResolution::anchor_resolutions() const {
    std::vector<Resolution> out;
    for (const auto& K : ce.components) out.push_back(K.H);
    return out;
}

AnchoredResolution degenerate_to_homology(const DiffModule& D, const ResolveOptions& opts) {
    AnchoredResolution out;
    out.ce = ce_resolution(D, opts);
    Degenerated g = degenerate(out.ce);
    note(opts, "perturbed onto the anchor");
    out.flag = g.flag;
    out.sdr = g.sdr;
    out.augmentation = {out.flag.dm, D, out.ce.augmentation.map * g.sdr.i};
    return out;
}

Matrix degeneration_series(const CeResolution& G) {
    const RingPtr& R = G.target.ring();
    const int n = G.flag.rank();
    Matrix ident = G.identity_part();
    Matrix d = G.flag.dm.diff - ident;
    auto masked = [&](CePart row, CePart col) {
        Matrix m = d;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (G.generators[r].part != row || G.generators[c].part != col) m.at(r, c) = Poly(R);
        return m;
    };
    Matrix alpha = masked(CePart::B, CePart::H), gamma = masked(CePart::B, CePart::G),
           beta = masked(CePart::H, CePart::G);
    Matrix Q = ident.transpose();
    Matrix QG = Q * gamma, term = Q * alpha, sum(R, n, n);
    for (int l = 0; l <= n && !term.is_zero(); ++l) {
        Matrix t = beta * term;
        sum = l % 2 == 0 ? sum - t : sum + t;
        term = QG * term;
    }
    std::vector<int> fh = G.indices(CePart::H);
    return sum.select(fh, fh);
}

AnchoredResolution quasiminimal(const DiffModule& D, const ResolveOptions& opts) {
    ResolveOptions o = opts;
    o.resolution.minimize = true;
    AnchoredResolution A = degenerate_to_homology(D, o);
    Minimized mm = minimize(anchor_dm(A.flag), &A.flag.level);
    if (static_cast<int>(mm.kept.size()) == A.flag.rank()) return A;
    std::vector<int> lv;
    for (int k : mm.kept) lv.push_back(A.flag.level[k]);
    TransferredFlag T = transfer_anchor(A.flag, as_hequiv(mm.sdr), lv);
    A.sdr = compose(A.sdr, SdrData{T.he.big, T.he.small, T.he.p, T.he.i, T.he.h});
    A.augmentation = {T.flag.dm, D, A.augmentation.map * T.he.i};
    A.flag = T.flag;
    note(opts, "anchor minimized");
    return A;
}

AnchoredRetract anchored_as_retract(const FreeFlag& F) {
    if (!is_anchored_resolution(F)) throw FlagError("not an anchored resolution");
    const DiffModule& D = F.dm;
    const RingPtr& R = F.ring();
    const int n = F.rank();

    std::vector<int> keys;
    if (D.modulus > 0) {
        keys = iota(0, D.modulus);
    } else {
        std::set<int> ks;
        for (int e = 0; e < n; ++e)
            for (int k = 0; k <= F.level[e] + 1; ++k) ks.insert(F.column(e) + k);
        for (int e = 0; e < n; ++e) ks.insert(F.column(e) - 1);
        keys.assign(ks.begin(), ks.end());
    }
    CeResolution G;
    G.target = D;
    G.components = components_for(keys, D);
    std::map<int, int> comp_of;
    for (int c = 0; c < static_cast<int>(keys.size()); ++c) comp_of[keys[c]] = c;
    const int nk = static_cast<int>(keys.size());

    // positions: H by e, B by (k, e); each gives (component, hom, pos)
    struct Slot { int comp, hom, pos; };
    std::vector<Slot> hslot(n);
    std::map<std::pair<int, int>, Slot> bslot;
    std::vector<std::vector<std::vector<int>>> hgens(nk), bk(nk), be(nk);
    auto grow = [](std::vector<std::vector<int>>& v, int m) {
        if (static_cast<int>(v.size()) <= m) v.resize(m + 1);
    };
    for (int e = 0; e < n; ++e) {
        int c = comp_of.at(D.wrap(F.column(e))), m = F.level[e];
        grow(hgens[c], m);
        hslot[e] = {c, m, static_cast<int>(hgens[c][m].size())};
        hgens[c][m].push_back(e);
    }
    for (int k = 1; k <= F.max_level(); ++k)
        for (int e = 0; e < n; ++e) {
            if (F.level[e] < k) continue;
            int c = comp_of.at(D.wrap(F.column(e) - 1 + k)), m = F.level[e] - k;
            grow(bk[c], m);
            grow(be[c], m);
            bslot[{k, e}] = {c, m, static_cast<int>(bk[c][m].size())};
            bk[c][m].push_back(k);
            be[c][m].push_back(e);
        }
    std::vector<Matrix> strata;
    for (int t = 0; t <= F.max_level(); ++t) strata.push_back(F.stratum(t));

    for (int c = 0; c < nk; ++c) {
        CeComponent& K = G.components[c];
        // H
        {
            std::vector<std::vector<int>> w;
            for (int m = 0; m < static_cast<int>(hgens[c].size()); ++m) {
                w.emplace_back();
                for (int e : hgens[c][m]) w.back().push_back(D.weight[e] + m * D.shift);
            }
            if (w.empty()) w.emplace_back();
            ChainComplex H(R, 0, w);
            for (int m = 1; m <= H.hi(); ++m) H.set_d(m, strata[0].select(hgens[c][m - 1], hgens[c][m]));
            Matrix aug(R, n, H.rank(0));
            if (H.rank(0)) aug = embedding(R, n, hgens[c][0]);
            K.H = {H, aug, Matrix(R, n, 0)};
        }
        // B
        {
            std::vector<std::vector<int>> w;
            for (int m = 0; m < static_cast<int>(be[c].size()); ++m) {
                w.emplace_back();
                for (int e : be[c][m]) w.back().push_back(D.weight[e] + D.shift + m * D.shift);
            }
            if (w.empty()) w.emplace_back();
            ChainComplex B(R, 0, w);
            for (int m = 1; m <= B.hi(); ++m) {
                Matrix d(R, B.rank(m - 1), B.rank(m));
                for (int q = 0; q < B.rank(m); ++q) {
                    const int k = bk[c][m][q], e = be[c][m][q];
                    for (int t = 0; t < k; ++t)
                        for (int f = 0; f < n; ++f) {
                            const Poly& v = strata[t].at(f, e);
                            if (v.is_zero()) continue;
                            Slot s = bslot.at({k - t, f});
                            d.at(s.pos, q) += v;
                        }
                }
                B.set_d(m, d);
            }
            Matrix aug(R, n, B.rank(0));
            for (int q = 0; q < B.rank(0); ++q) aug.set_block(0, q, D.diff.select(iota(0, n), {be[c][0][q]}));
            K.B = {B, aug, Matrix(R, n, 0)};
        }
    }
    for (int c = 0; c < nk; ++c) {
        CeComponent& K = G.components[c];
        K.H.rel = K.B.aug;
        std::vector<Matrix> alpha(1, Matrix(R, 0, 0));
        for (int m = 1; m <= K.H.F.hi(); ++m) {
            Matrix a(R, K.B.F.rank(m - 1), K.H.F.rank(m));
            for (int q = 0; q < K.H.F.rank(m); ++q) {
                const int e = hgens[c][m][q];
                a.at(bslot.at({1, e}).pos, q) = Poly::constant(R, F.level[e] % 2 == 0 ? 1 : -1);
            }
            alpha.push_back(a);
        }
        K.Z = stack(K.B, K.H, alpha);
    }
    for (int c = 0; c < nk; ++c) {
        CeComponent& K = G.components[c];
        const int pc = K.prev;
        if (pc < 0) {
            K.G = zero_resolution(R, n);
            K.G.rel = K.Z.FB.aug;
        } else {
            const Resolution& Bp = G.components[pc].B;
            Matrix L(R, n, Bp.F.rank(0));
            for (int q = 0; q < Bp.F.rank(0); ++q) L.at(be[pc][0][q], q) = Poly::constant(R, 1);
            K.G = negated(Bp, L, K.Z.FB.aug, D.shift);
        }
        std::vector<Matrix> theta(1, Matrix(R, 0, 0));
        for (int m = 1; m <= K.G.F.hi(); ++m) {
            const int nb = K.B.F.rank(m - 1);
            Matrix th(R, K.Z.FB.F.rank(m - 1), K.G.F.rank(m));
            for (int q = 0; q < K.G.F.rank(m); ++q) {
                const int k = bk[pc][m][q], e = be[pc][m][q];
                th.at(bslot.at({k + 1, e}).pos, q) = Poly::constant(R, 1);
                for (int f = 0; f < n; ++f) {
                    const Poly& v = strata[k].at(f, e);
                    if (v.is_zero()) continue;
                    th.at(nb + hslot[f].pos, q) += m % 2 == 0 ? v : -v;
                }
            }
            theta.push_back(th);
        }
        K.Dk = stack(K.Z.FB, K.G, theta);
    }
    assemble(G);

    Degenerated g = degenerate(G);
    // reorder the small side into F's basis
    std::vector<int> order(n);
    for (int e = 0; e < n; ++e) {
        const Slot& s = hslot[e];
        int global = G.index(s.comp, s.hom, G.components[s.comp].B.F.rank(s.hom) + s.pos);
        order[e] = static_cast<int>(std::find(g.anchor.begin(), g.anchor.end(), global) - g.anchor.begin());
    }
    const int ns = static_cast<int>(g.anchor.size());
    AnchoredRetract out;
    out.ce = G;
    out.sdr = g.sdr;
    out.sdr.small = D;
    out.sdr.small.diff = g.sdr.small.diff.select(order, order);
    out.sdr.p = g.sdr.p.select(order, iota(0, G.flag.rank()));
    out.sdr.i = g.sdr.i.select(iota(0, G.flag.rank()), order);
    out.delta_small = g.delta_small.select(order, order);
    out.identity = ns == n && out.ce.augmentation.map * out.sdr.i == Matrix::identity(R, n);
    return out;
}

FunctorialDegeneration functorial_degeneration(const DmMorphism& phi, bool minimal, const ResolveOptions& opts) {
    FunctorialDegeneration out;
    out.source = minimal ? quasiminimal(phi.source, opts) : degenerate_to_homology(phi.source, opts);
    out.target = minimal ? quasiminimal(phi.target, opts) : degenerate_to_homology(phi.target, opts);
    FlagMorphism Phi = ce_lift(phi, out.source.ce, out.target.ce);
    Matrix inner = Phi.map * out.source.sdr.i;
    out.lift = {out.source.flag, out.target.flag, out.target.sdr.p * inner};
    Matrix h = out.target.ce.augmentation.map * out.target.sdr.h * inner;
    out.square = {out.source.augmentation, out.target.augmentation, out.lift.map, phi.map, h};
    return out;
}

FlagPreserving flag_preserve_up_to_homotopy(const FreeFlag& F, const FreeFlag& F2, const Matrix& phi) {
    AnchoredRetract A = anchored_as_retract(F), B = anchored_as_retract(F2);
    FlagMorphism Phi = ce_lift(DmMorphism{F.dm, F2.dm, phi}, A.ce, B.ce);
    Matrix inner = Phi.map * A.sdr.i;
    return {B.sdr.p * inner, -(B.ce.augmentation.map * B.sdr.h * inner)};
}

}  // namespace dmflag
