#include "dmflag/dm.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace dmflag {

DiffModule::DiffModule(int modulus_, std::vector<int> degree_, Matrix diff_, std::vector<int> weight_,
                       int shift_)
    : modulus(modulus_), degree(std::move(degree_)), weight(std::move(weight_)),
      diff(std::move(diff_)), shift(shift_), graded(!weight.empty()) {
    if (modulus < 0) throw RingError("negative modulus");
    if (weight.empty()) weight.assign(degree.size(), 0);
    if (diff.rows() != rank() || diff.cols() != rank() || static_cast<int>(weight.size()) != rank())
        throw RingError("differential shape does not match the basis");
    for (auto& j : degree) j = wrap(j);
}

int DiffModule::wrap(int j) const {
    if (modulus == 0) return j;
    int r = j % modulus;
    return r < 0 ? r + modulus : r;
}

std::vector<int> DiffModule::indices(int j) const {
    std::vector<int> out;
    int w = wrap(j);
    for (int k = 0; k < rank(); ++k)
        if (degree[k] == w) out.push_back(k);
    return out;
}

std::vector<int> DiffModule::degrees() const {
    if (modulus > 0) return iota_range(0, modulus);
    std::set<int> s(degree.begin(), degree.end());
    return {s.begin(), s.end()};
}

Matrix DiffModule::block(int target, int source) const {
    return diff.select(indices(target), indices(source));
}

DiffModule DiffModule::permuted(const std::vector<int>& order) const {
    DiffModule out(*this);
    out.degree.clear();
    out.weight.clear();
    out.aux.clear();
    for (int k : order) {
        out.degree.push_back(degree[k]);
        out.weight.push_back(weight[k]);
        if (!aux.empty()) out.aux.push_back(aux[k]);
    }
    out.diff = diff.select(order, order);
    return out;
}

DmReport dm_check(const DiffModule& D) {
    DmReport rep;
    const int n = D.rank();
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const Poly& e = D.diff.at(r, c);
            if (e.is_zero()) continue;
            if (D.degree[r] != D.wrap(D.degree[c] - 1)) {
                rep = {false, "entry violates the degree -1 pattern", r, c};
                return rep;
            }
            if (D.graded && (!e.is_homogeneous() || *e.degree() != D.weight[c] + D.shift - D.weight[r])) {
                rep = {false, "entry is not homogeneous of the expected degree", r, c};
                return rep;
            }
        }
    Matrix sq = D.diff * D.diff;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (!sq.at(r, c).is_zero()) {
                rep = {false, "differential does not square to zero", r, c};
                return rep;
            }
    return rep;
}

bool respects_degree(const DiffModule& src, const DiffModule& tgt, const Matrix& f, int offset) {
    if (f.rows() != tgt.rank() || f.cols() != src.rank()) return false;
    for (int r = 0; r < f.rows(); ++r)
        for (int c = 0; c < f.cols(); ++c)
            if (!f.at(r, c).is_zero() && tgt.degree[r] != tgt.wrap(src.degree[c] + offset)) return false;
    return true;
}

bool is_morphism(const DiffModule& src, const DiffModule& tgt, const Matrix& f) {
    return respects_degree(src, tgt, f) && tgt.diff * f == f * src.diff;
}

bool is_homotopy(const DiffModule& src, const DiffModule& tgt, const Matrix& f, const Matrix& g,
                 const Matrix& h) {
    return respects_degree(src, tgt, h, 1) && f - g == tgt.diff * h + h * src.diff;
}

SdrReport check_sdr(const SdrData& s) {
    SdrReport r;
    const int nb = s.big.rank(), ns = s.small.rank();
    r.maps_ok = s.p.rows() == ns && s.p.cols() == nb && s.i.rows() == nb && s.i.cols() == ns &&
                s.h.rows() == nb && s.h.cols() == nb && is_morphism(s.big, s.small, s.p) &&
                is_morphism(s.small, s.big, s.i) && respects_degree(s.big, s.big, s.h, 1);
    if (!r.maps_ok) return r;
    const RingPtr& R = s.big.ring();
    r.pi_identity = s.p * s.i == Matrix::identity(R, ns);
    r.homotopy = s.i * s.p - Matrix::identity(R, nb) == s.big.diff * s.h + s.h * s.big.diff;
    r.h_squared = (s.h * s.h).is_zero();
    r.h_i = (s.h * s.i).is_zero();
    r.p_h = (s.p * s.h).is_zero();
    return r;
}

SdrData identity_sdr(const DiffModule& D) {
    const RingPtr& R = D.ring();
    return {D, D, Matrix::identity(R, D.rank()), Matrix::identity(R, D.rank()), Matrix(R, D.rank(), D.rank())};
}

SdrData compose(const SdrData& first, const SdrData& second) {
    return {first.big, second.small, second.p * first.p, first.i * second.i,
            first.h + first.i * second.h * first.p};
}

Minimized minimize(const DiffModule& D, const std::vector<int>* levels) {
    const RingPtr& R = D.ring();
    const Field& F = R->field();
    const int N = D.rank();

    std::vector<int> alive = iota_range(0, N);  // original index per current position
    Matrix M = D.diff;
    Matrix P = Matrix::identity(R, N);  // current x original
    Matrix I = Matrix::identity(R, N);  // original x current
    Matrix H(R, N, N);

    while (true) {
        const int n = static_cast<int>(alive.size());
        int br = -1, bc = -1;
        for (int c = 0; c < n; ++c) {
            if (!M.at(c, c).is_zero()) continue;
            for (int r = 0; r < n; ++r) {
                if (r == c || !M.at(r, c).is_unit()) continue;
                if (levels && (*levels)[alive[c]] - (*levels)[alive[r]] != 1) continue;
                auto key = [&](int rr, int cc) { return std::make_tuple(D.weight[alive[cc]], rr, cc); };
                if (br < 0 || key(r, c) < key(br, bc)) br = r, bc = c;
            }
        }
        if (br < 0) break;
        const int r = br, c = bc;
        const mpq_class uinv = F.inv(M.at(r, c).constant_term());
        std::vector<int> rest;
        for (int k = 0; k < n; ++k)
            if (k != r && k != c) rest.push_back(k);
        const int m = static_cast<int>(rest.size());

        // Schur complement M' = M_II - M_Ic M_rI / u
        Matrix M2 = M.select(rest, rest);
        for (int a = 0; a < m; ++a) {
            const Poly& lc = M.at(rest[a], c);
            if (lc.is_zero()) continue;
            Poly f = lc.scale(uinv);
            for (int b = 0; b < m; ++b) {
                const Poly& rk = M.at(r, rest[b]);
                if (!rk.is_zero()) M2.at(a, b) -= f * rk;
            }
        }
        // H += -(1/u) I_c P_r
        Matrix Ic = I.select(iota_range(0, N), {c}), Pr = P.select({r}, iota_range(0, N));
        H -= (Ic * Pr).scale(uinv);
        // P' rows: P_l - (M_lc/u) P_r ; I' cols: I_k - (M_rk/u) I_c
        Matrix P2 = P.select(rest, iota_range(0, N));
        Matrix I2 = I.select(iota_range(0, N), rest);
        for (int a = 0; a < m; ++a) {
            const Poly& lc = M.at(rest[a], c);
            if (!lc.is_zero()) {
                Poly f = lc.scale(uinv);
                for (int k = 0; k < N; ++k)
                    if (!P.at(r, k).is_zero()) P2.at(a, k) -= f * P.at(r, k);
            }
            const Poly& rk = M.at(r, rest[a]);
            if (!rk.is_zero()) {
                Poly f = rk.scale(uinv);
                for (int k = 0; k < N; ++k)
                    if (!I.at(k, c).is_zero()) I2.at(k, a) -= f * I.at(k, c);
            }
        }
        M = std::move(M2);
        P = std::move(P2);
        I = std::move(I2);
        std::vector<int> alive2;
        for (int k : rest) alive2.push_back(alive[k]);
        alive = std::move(alive2);
    }

    DiffModule small = D.permuted(alive);
    small.diff = M;
    return {{D, small, P, I, H}, alive};
}

}  // namespace dmflag
