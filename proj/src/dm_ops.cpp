#include "dmflag/dm_ops.hpp"

namespace dmflag {

namespace {

Matrix sign_diag(const DiffModule& D) {
    Matrix S(D.ring(), D.rank(), D.rank());
    for (int k = 0; k < D.rank(); ++k) S.at(k, k) = Poly::constant(D.ring(), koszul_sign(D, D.degree[k]));
    return S;
}

void require_same_modulus(const DiffModule& a, const DiffModule& b) {
    if (a.modulus != b.modulus) throw RingError("differential modules have different moduli");
    if (!a.ring()->same_as(*b.ring())) throw RingError("differential modules over different rings");
}

void require_monoidal(const DiffModule& D) {
    const int d = D.modulus;
    if (d == 0 || d % 2 == 0 || D.ring()->field().characteristic() == 2) return;
    throw RingError("tensor and hom need d = 0, even d, or characteristic 2");
}

}  // namespace

bool is_morphism(const DmMorphism& f) { return is_morphism(f.source, f.target, f.map); }

DmMorphism identity_morphism(const DiffModule& D) {
    return {D, D, Matrix::identity(D.ring(), D.rank())};
}

DmMorphism compose(const DmMorphism& f, const DmMorphism& g) {
    if (f.target.rank() != g.source.rank()) throw RingError("morphisms are not composable");
    return {f.source, g.target, g.map * f.map};
}

bool is_valid(const HomotopySquare& sq) {
    if (!is_morphism(sq.from) || !is_morphism(sq.to)) return false;
    if (!is_morphism(sq.from.source, sq.to.source, sq.top)) return false;
    if (!is_morphism(sq.from.target, sq.to.target, sq.bottom)) return false;
    return is_homotopy(sq.from.source, sq.to.target, sq.to.map * sq.top, sq.bottom * sq.from.map, sq.h);
}

HomotopySquare identity_square(const DmMorphism& phi) {
    const RingPtr& R = phi.source.ring();
    return {phi, phi, Matrix::identity(R, phi.source.rank()), Matrix::identity(R, phi.target.rank()),
            Matrix(R, phi.target.rank(), phi.source.rank())};
}

HomotopySquare compose(const HomotopySquare& first, const HomotopySquare& second) {
    return {first.from, second.to, second.top * first.top, second.bottom * first.bottom,
            second.bottom * first.h + second.h * first.top};
}

bool DmHomology::finite() const {
    for (const auto& p : pieces)
        if (!p.length.finite) return false;
    return true;
}

long long DmHomology::total() const {
    long long s = 0;
    for (const auto& p : pieces) s += p.length.length;
    return s;
}

long long DmHomology::at(int degree) const {
    for (const auto& p : pieces)
        if (p.degree == degree) return p.length.length;
    return 0;
}

bool DmHomology::vanishes(int degree) const {
    for (const auto& p : pieces)
        if (p.degree == degree) return p.length.finite && p.length.length == 0;
    return true;
}

DmHomology homology(const DiffModule& input, bool minimize_first) {
    const DiffModule D = minimize_first ? minimize(input).sdr.small : input;
    const RingPtr& R = D.ring();
    DmHomology out;
    for (int j : D.degrees()) {
        HomologyPiece piece;
        piece.degree = j;
        const int n = static_cast<int>(D.indices(j).size());
        Matrix A = D.block(j - 1, j), B = D.block(j, j + 1);
        piece.cycles = (A.rows() == 0 || A.is_zero()) ? Matrix::identity(R, n) : syzygies(A);
        const int z = piece.cycles.cols();
        if (z == 0) {
            piece.presentation = Matrix(R, 0, 0);
            piece.length = {true, 0};
            out.pieces.push_back(std::move(piece));
            continue;
        }
        auto L = lift_matrix(B, piece.cycles);
        if (!L) throw RingError("boundaries are not cycles");
        Matrix rel = piece.cycles.cols() == n && piece.cycles == Matrix::identity(R, n)
                         ? Matrix(R, n, 0)
                         : syzygies(piece.cycles);
        piece.presentation = Matrix::hstack(rel, *L);
        piece.length = quotient_length(piece.presentation);
        out.pieces.push_back(std::move(piece));
    }
    return out;
}

DiffModule fold(const DiffModule& D, int target) {
    if (target < 0) throw RingError("negative modulus");
    if (D.modulus != 0 && (target == 0 || D.modulus % target != 0))
        throw RingError("target modulus must divide the source modulus");
    DiffModule out(target, D.degree, D.diff, D.weight, D.shift);
    out.graded = D.graded;
    out.aux = D.degree;
    return out;
}

DiffModule fold(const ChainComplex& C, int target) { return fold(C.to_dm(), target); }

DiffModule unfold_z2(const DiffModule& D) {
    const int n = D.rank();
    const RingPtr& R = D.ring();
    std::vector<int> degree(2 * n), weight(2 * n), aux(2 * n);
    for (int k = 0; k < n; ++k) {
        degree[k] = 0;
        degree[n + k] = 1;
        weight[k] = weight[n + k] = D.weight[k];
        aux[k] = aux[n + k] = D.degree[k];
    }
    Matrix diff(R, 2 * n, 2 * n);
    diff.set_block(0, n, D.diff);
    diff.set_block(n, 0, D.diff);
    DiffModule out(2, degree, diff, weight, D.shift);
    out.graded = D.graded;
    out.aux = aux;
    return out;
}

int koszul_sign(const DiffModule& D, int j) {
    int r = D.wrap(j);
    if (r < 0) r = -r;
    return r % 2 == 0 ? 1 : -1;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.ring(), a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const Poly& x = a.at(i, j);
            if (x.is_zero()) continue;
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l)
                    if (!b.at(k, l).is_zero()) out.at(i * b.rows() + k, j * b.cols() + l) = x * b.at(k, l);
        }
    return out;
}

DiffModule dm_tensor(const DiffModule& D, const DiffModule& E) {
    require_same_modulus(D, E);
    require_monoidal(D);
    const RingPtr& R = D.ring();
    std::vector<int> degree, weight;
    for (int a = 0; a < D.rank(); ++a)
        for (int b = 0; b < E.rank(); ++b) {
            degree.push_back(D.degree[a] + E.degree[b]);
            weight.push_back(D.weight[a] + E.weight[b]);
        }
    Matrix diff = kron(D.diff, Matrix::identity(R, E.rank())) + kron(sign_diag(D), E.diff);
    DiffModule out(D.modulus, degree, diff, weight, D.shift);
    out.graded = D.graded && E.graded && D.shift == E.shift;
    return out;
}

DiffModule dm_hom(const DiffModule& D, const DiffModule& E) {
    require_same_modulus(D, E);
    require_monoidal(D);
    const RingPtr& R = D.ring();
    std::vector<int> degree, weight;
    for (int r = 0; r < E.rank(); ++r)
        for (int c = 0; c < D.rank(); ++c) {
            degree.push_back(E.degree[r] - D.degree[c]);
            weight.push_back(E.weight[r] - D.weight[c]);
        }
    DiffModule shape(D.modulus, degree, Matrix(R, static_cast<int>(degree.size()), static_cast<int>(degree.size())));
    Matrix post = kron(E.diff, Matrix::identity(R, D.rank()));
    Matrix pre = kron(Matrix::identity(R, E.rank()), D.diff.transpose());
    Matrix diff = post - pre * sign_diag(shape);
    DiffModule out(D.modulus, degree, diff, weight, E.shift);
    out.graded = D.graded && E.graded && D.shift == E.shift;
    return out;
}

DiffModule dm_cone(const DmMorphism& phi) {
    require_same_modulus(phi.source, phi.target);
    const DiffModule &C = phi.source, &T = phi.target;
    const int nt = T.rank(), nc = C.rank();
    std::vector<int> degree = T.degree, weight = T.weight;
    for (int k = 0; k < nc; ++k) {
        degree.push_back(C.degree[k] + 1);
        weight.push_back(C.weight[k] - T.shift);
    }
    Matrix diff(T.ring(), nt + nc, nt + nc);
    diff.set_block(0, 0, T.diff);
    diff.set_block(0, nt, -phi.map);
    diff.set_block(nt, nt, -C.diff);
    DiffModule out(T.modulus, degree, diff, weight, T.shift);
    out.graded = C.graded && T.graded && C.shift == T.shift;
    return out;
}

DmMorphism cone_functor(const HomotopySquare& sq) {
    DiffModule src = dm_cone(sq.from), tgt = dm_cone(sq.to);
    const int nd = sq.from.target.rank(), nd2 = sq.to.target.rank();
    Matrix m(src.ring(), tgt.rank(), src.rank());
    m.set_block(0, 0, sq.bottom);
    m.set_block(0, nd, sq.h);
    m.set_block(nd2, nd, sq.top);
    return {std::move(src), std::move(tgt), std::move(m)};
}

HomotopySquare transport_square(const HomotopySquare& sq, const SdrData& left, const SdrData& right) {
    if (left.big.rank() != sq.from.source.rank() || right.big.rank() != sq.to.source.rank())
        throw RingError("retractions do not start at the square's corners");
    DmMorphism from{left.small, sq.from.target, sq.from.map * left.i};
    DmMorphism to{right.small, sq.to.target, sq.to.map * right.i};
    Matrix top = right.p * sq.top * left.i;
    Matrix h = (sq.h + sq.to.map * right.h * sq.top) * left.i;
    return {std::move(from), std::move(to), std::move(top), sq.bottom, std::move(h)};
}

}  // namespace dmflag
