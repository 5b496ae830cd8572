#include "dmflag/perturb.hpp"

namespace dmflag {

bool is_perturbation(const DiffModule& D, const Matrix& delta) {
    if (!respects_degree(D, D, delta, -1)) return false;
    Matrix d = D.diff + delta;
    return (d * d).is_zero();
}

DiffModule perturbed(const DiffModule& D, const Matrix& delta) {
    DiffModule out = D;
    out.diff = D.diff + delta;
    if (out.graded) {
        for (int r = 0; r < out.rank() && out.graded; ++r)
            for (int c = 0; c < out.rank(); ++c) {
                const Poly& e = out.diff.at(r, c);
                if (!e.is_zero() &&
                    (!e.is_homogeneous() || *e.degree() != out.weight[c] + out.shift - out.weight[r])) {
                    out.graded = false;
                    break;
                }
            }
    }
    return out;
}

std::optional<int> check_small(const Matrix& delta, const Matrix& h) {
    Matrix m = delta * h;
    Matrix power = m;
    for (int n = 1; n <= std::max(m.rows(), 1); ++n) {
        if (power.is_zero()) return n;
        power = power * m;
    }
    return std::nullopt;
}

PerturbedSdr perturb_sdr(const SdrData& sdr, const Matrix& delta) {
    auto n = check_small(delta, sdr.h);
    if (!n) throw NotSmall("delta h is not nilpotent");
    const RingPtr& R = sdr.big.ring();
    const int nb = sdr.big.rank();
    Matrix dh = delta * sdr.h;
    Matrix A = Matrix::identity(R, nb), power = A;
    for (int t = 1; t < *n; ++t) {
        power = power * dh;
        A += power;
    }
    Matrix X = A * delta;  // (1 - delta h)^{-1} delta
    PerturbedSdr out;
    out.delta_small = sdr.p * X * sdr.i;
    out.sdr.big = perturbed(sdr.big, delta);
    out.sdr.small = perturbed(sdr.small, out.delta_small);
    out.sdr.p = sdr.p + sdr.p * X * sdr.h;
    out.sdr.i = sdr.i + sdr.h * X * sdr.i;
    out.sdr.h = sdr.h + sdr.h * X * sdr.h;
    return out;
}

SdrData make_strong(const SdrData& sdr) {
    const RingPtr& R = sdr.big.ring();
    if (sdr.p * sdr.i != Matrix::identity(R, sdr.small.rank())) throw RingError("p i is not the identity");
    const Matrix& d = sdr.big.diff;
    SdrData out = sdr;
    Matrix K = d * out.h + out.h * d;
    out.h = -(out.h * K);
    K = d * out.h + out.h * d;
    out.h = -(K * out.h);
    out.h = -(out.h * d * out.h);
    return out;
}

bool check_hequiv(const HomotopyEquivalence& he) {
    const RingPtr& R = he.big.ring();
    const int nb = he.big.rank(), ns = he.small.rank();
    if (he.p.rows() != ns || he.p.cols() != nb || he.i.rows() != nb || he.i.cols() != ns) return false;
    if (!is_morphism(he.big, he.small, he.p) || !is_morphism(he.small, he.big, he.i)) return false;
    return is_homotopy(he.big, he.big, he.i * he.p, Matrix::identity(R, nb), he.h) &&
           is_homotopy(he.small, he.small, he.p * he.i, Matrix::identity(R, ns), he.h_small);
}

HomotopyEquivalence as_hequiv(const SdrData& sdr) {
    const int ns = sdr.small.rank();
    return {sdr.big, sdr.small, sdr.p, sdr.i, sdr.h, Matrix(sdr.big.ring(), ns, ns)};
}

PerturbedHequiv perturb_hequiv(const HomotopyEquivalence& he, const Matrix& delta) {
    const DiffModule &C = he.big, &D = he.small;
    const RingPtr& R = C.ring();
    const int nc = C.rank(), nd = D.rank(), n = nc + 2 * nd;
    const Matrix Id = Matrix::identity(R, nd);

    std::vector<int> degree = C.degree, weight = C.weight;
    for (int k = 0; k < nd; ++k) {
        degree.push_back(D.degree[k]);
        weight.push_back(D.weight[k]);
    }
    for (int k = 0; k < nd; ++k) {
        degree.push_back(D.degree[k] + 1);
        weight.push_back(D.weight[k] - D.shift);
    }
    Matrix dB(R, n, n);
    dB.set_block(0, 0, C.diff);
    dB.set_block(nc, nc, D.diff);
    dB.set_block(nc, nc + nd, Id);
    dB.set_block(nc + nd, nc + nd, -D.diff);
    DiffModule B(C.modulus, degree, dB, weight, C.shift);
    B.graded = C.graded && D.graded && C.shift == D.shift;

    Matrix I(R, n, nd), P(R, nd, n), H(R, n, n), K(R, n, n);
    I.set_block(0, 0, he.i);
    I.set_block(nc, 0, Id);
    P.set_block(0, 0, he.p);
    P.set_block(0, nc, Id - he.p * he.i);
    P.set_block(0, nc + nd, -he.h_small);
    H.set_block(0, 0, he.h);
    H.set_block(0, nc, -(he.i * he.h_small));
    H.set_block(nc, nc, -he.h_small);
    H.set_block(nc + nd, 0, he.p);
    H.set_block(nc + nd, nc, -Id);
    K.set_block(nc + nd, nc, Id);

    Matrix deltaB(R, n, n);
    deltaB.set_block(0, 0, delta);
    PerturbedSdr r = perturb_sdr(make_strong(SdrData{B, D, P, I, H}), deltaB);

    PerturbedHequiv out;
    out.delta_small = r.delta_small;
    out.he.big = perturbed(C, delta);
    out.he.small = r.sdr.small;
    out.he.p = r.sdr.p.block(0, 0, nd, nc);
    out.he.i = r.sdr.i.block(0, 0, nc, nd);
    out.he.h = r.sdr.h.block(0, 0, nc, nc);
    out.he.h_small = -(r.sdr.p * K * r.sdr.i);
    return out;
}

DiffModule anchor_dm(const FreeFlag& F) {
    DiffModule out = F.dm;
    out.diff = F.stratum(0);
    return out;
}

TransferredFlag transfer_anchor(const FreeFlag& F, const HomotopyEquivalence& he, const std::vector<int>& g_levels) {
    if (he.big.rank() != F.rank() || he.big.diff != F.stratum(0))
        throw FlagError("equivalence does not start at the anchor");
    const RingPtr& R = F.ring();
    Matrix delta = F.dm.diff - F.stratum(0);
    TransferredFlag out;
    out.retract = he.p * he.i == Matrix::identity(R, he.small.rank()) && he.h_small.is_zero();
    if (out.retract) {
        SdrData strong = make_strong(SdrData{he.big, he.small, he.p, he.i, he.h});
        PerturbedSdr r = perturb_sdr(strong, delta);
        out.he = as_hequiv(r.sdr);
    } else {
        out.he = perturb_hequiv(he, delta).he;
    }
    out.he.big = F.dm;
    out.flag = dm_to_flag(out.he.small, g_levels);
    return out;
}

}  // namespace dmflag
