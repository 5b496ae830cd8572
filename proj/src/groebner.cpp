#include "dmflag/groebner.hpp"

#include <algorithm>
#include <numeric>

namespace dmflag {

namespace {

int cmp_term(const Ring& R, const Mono& a, int ca, const Mono& b, int cb) {
    if (ca != cb) return ca < cb ? 1 : -1;
    return R.cmp(a, b);
}

/// a - c * m * b
MVec sub_mul(const Ring& R, const MVec& a, const MVec& b, const Mono& m, const mpq_class& c) {
    const Field& F = R.field();
    MVec out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size()) {
            out.push_back(a[i++]);
            continue;
        }
        Mono bm = b[j].m * m;
        int s = i == a.size() ? -1 : cmp_term(R, a[i].m, a[i].comp, bm, b[j].comp);
        if (s > 0) {
            out.push_back(a[i++]);
        } else if (s < 0) {
            out.push_back({bm, b[j].comp, F.neg(F.mul(c, b[j].c))});
            ++j;
        } else {
            mpq_class v = F.sub(a[i].c, F.mul(c, b[j].c));
            if (v != 0) out.push_back({a[i].m, a[i].comp, v});
            ++i, ++j;
        }
    }
    return out;
}

void scale_in_place(const Field& F, MVec& v, const mpq_class& c) {
    for (auto& t : v) t.c = F.mul(t.c, c);
}

}  // namespace

MVec to_mvec(const Ring& R, const Vec& v, int comp_offset) {
    MVec out;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (const auto& t : v[i].terms()) out.push_back({t.m, int(i) + comp_offset, t.c});
    // components ascending, each polynomial already descending
    (void)R;
    return out;
}

Vec to_vec(const RingPtr& R, const MVec& v, int rank, int comp_offset) {
    std::vector<std::vector<Term>> parts(rank);
    for (const auto& t : v) parts[t.comp - comp_offset].push_back({t.m, t.c});
    Vec out;
    out.reserve(rank);
    for (auto& p : parts) out.push_back(Poly::from_terms(R, std::move(p)));
    return out;
}

ModuleGB::ModuleGB(RingPtr ring, int rank, const std::vector<Vec>& gens, GbOptions opts)
    : ring_(std::move(ring)), rank_(rank), ngens_(static_cast<int>(gens.size())), opts_(opts) {
    if (opts_.want_syzygies) opts_.track_log = true;
    std::vector<Element> input;
    input.reserve(gens.size());
    for (int k = 0; k < ngens_; ++k) {
        if (static_cast<int>(gens[k].size()) != rank_) throw RingError("generator length mismatch");
        for (const auto& p : gens[k])
            if (p.ring() && !p.ring()->same_as(*ring_)) throw RingError("ring mismatch");
        Element e{to_mvec(*ring_, gens[k]), {}};
        if (opts_.track_log) e.log.push_back({Mono{}, k, mpq_class(1)});
        input.push_back(std::move(e));
    }
    run(std::move(input));
}

namespace {
std::vector<Vec> columns_of(const Matrix& A) {
    std::vector<Vec> cols;
    for (int c = 0; c < A.cols(); ++c) cols.push_back(A.col(c));
    return cols;
}
}  // namespace

ModuleGB::ModuleGB(const Matrix& columns, GbOptions opts)
    : ModuleGB(columns.ring(), columns.rows(), columns_of(columns), opts) {}

int ModuleGB::find_divisor(const MTerm& t, std::size_t limit) const {
    int nv = ring_->nvars();
    for (std::size_t g = 0; g < basis_.size(); ++g) {
        if (g == limit) continue;
        const MTerm& l = basis_[g].real.front();
        if (l.comp == t.comp && l.m.divides(t.m, nv)) return static_cast<int>(g);
    }
    return -1;
}

void ModuleGB::reduce_full(Element& f, std::size_t exclude) const {
    const Ring& R = *ring_;
    const Field& F = R.field();
    std::size_t i = 0;
    while (i < f.real.size()) {
        int g = find_divisor(f.real[i], exclude);
        if (g < 0) {
            ++i;
            continue;
        }
        const Element& b = basis_[g];
        const MTerm& l = b.real.front();
        Mono q = f.real[i].m.quo(l.m);
        mpq_class c = F.div(f.real[i].c, l.c);
        f.real = sub_mul(R, f.real, b.real, q, c);
        if (opts_.track_log) f.log = sub_mul(R, f.log, b.log, q, c);
    }
}

void ModuleGB::run(std::vector<Element> input) {
    const Ring& R = *ring_;
    const Field& F = R.field();
    const int nv = R.nvars();
    const bool product_ok = rank_ == 1;

    struct Pair {
        int i, j;
        Mono lcm;
        int comp;
    };
    std::vector<Pair> pairs;

    auto lead = [&](int g) -> const MTerm& { return basis_[g].real.front(); };

    auto record_syzygy = [&](MVec log) {
        if (opts_.want_syzygies && !log.empty()) syz_.push_back(std::move(log));
    };

    auto koszul = [&](int i, int j) {
        // g_j * log_i - g_i * log_j, the trivial relation of a coprime pair
        if (!opts_.want_syzygies) return;
        MVec acc;
        for (const auto& t : basis_[j].real) acc = sub_mul(R, acc, basis_[i].log, t.m, F.neg(t.c));
        for (const auto& t : basis_[i].real) acc = sub_mul(R, acc, basis_[j].log, t.m, t.c);
        record_syzygy(std::move(acc));
    };

    // Gebauer-Moeller update for a new basis element h.
    auto update = [&](int h) {
        const MTerm& lh = lead(h);
        std::vector<Pair> C;
        for (int g = 0; g < h; ++g)
            if (lead(g).comp == lh.comp) C.push_back({g, h, lead(g).m.lcm(lh.m, nv), lh.comp});

        auto coprime = [&](const Pair& p) {
            return product_ok && lead(p.i).m.coprime(lead(p.j).m, nv);
        };
        std::vector<Pair> D;
        for (std::size_t k = 0; k < C.size(); ++k) {
            const Pair& p = C[k];
            bool keep = coprime(p);
            if (!keep) {
                keep = true;
                for (std::size_t l = k + 1; l < C.size() && keep; ++l)
                    if (C[l].lcm.divides(p.lcm, nv)) keep = false;
                for (const auto& q : D)
                    if (keep && q.lcm.divides(p.lcm, nv)) keep = false;
            }
            if (keep) D.push_back(p);
        }
        std::vector<Pair> kept;
        for (const auto& p : pairs) {
            bool drop = p.comp == lh.comp && lh.m.divides(p.lcm, nv) &&
                        !(lead(p.i).m.lcm(lh.m, nv) == p.lcm) &&
                        !(lead(p.j).m.lcm(lh.m, nv) == p.lcm);
            if (!drop) kept.push_back(p);
        }
        pairs = std::move(kept);
        for (const auto& p : D) {
            if (coprime(p))
                koszul(p.i, p.j);
            else
                pairs.push_back(p);
        }
    };

    auto add_element = [&](Element e) {
        reduce_full(e, basis_.size());
        if (e.real.empty()) {
            record_syzygy(std::move(e.log));
            return;
        }
        mpq_class inv = F.inv(e.real.front().c);
        scale_in_place(F, e.real, inv);
        scale_in_place(F, e.log, inv);
        basis_.push_back(std::move(e));
        update(static_cast<int>(basis_.size()) - 1);
    };

    for (auto& e : input) add_element(std::move(e));

    while (!pairs.empty()) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < pairs.size(); ++k) {
            const Pair &a = pairs[k], &b = pairs[best];
            int s = R.cmp(a.lcm, b.lcm);
            if (s == 0) s = b.comp - a.comp;
            if (s == 0) s = (a.j != b.j) ? b.j - a.j : b.i - a.i;
            if (s < 0) best = k;
        }
        Pair p = pairs[best];
        pairs.erase(pairs.begin() + static_cast<long>(best));
        const Element &f = basis_[p.i], &g = basis_[p.j];
        Element s;
        // leads are monic
        s.real = sub_mul(R, {}, f.real, p.lcm.quo(f.real.front().m), F.from_int(-1));
        s.real = sub_mul(R, s.real, g.real, p.lcm.quo(g.real.front().m), F.from_int(1));
        if (opts_.track_log) {
            s.log = sub_mul(R, {}, f.log, p.lcm.quo(f.real.front().m), F.from_int(-1));
            s.log = sub_mul(R, s.log, g.log, p.lcm.quo(g.real.front().m), F.from_int(1));
        }
        add_element(std::move(s));
    }
    interreduce();
}

void ModuleGB::interreduce() {
    const Ring& R = *ring_;
    const int nv = R.nvars();
    std::vector<bool> keep(basis_.size());
    for (std::size_t g = 0; g < basis_.size(); ++g) {
        const MTerm& l = basis_[g].real.front();
        bool redundant = false;
        for (std::size_t h = 0; h < basis_.size() && !redundant; ++h) {
            if (h == g) continue;
            const MTerm& k = basis_[h].real.front();
            if (k.comp != l.comp || !k.m.divides(l.m, nv)) continue;
            redundant = !(k.m == l.m) || h < g;
        }
        keep[g] = !redundant;
    }
    std::vector<Element> minimal;
    for (std::size_t g = 0; g < basis_.size(); ++g)
        if (keep[g]) minimal.push_back(std::move(basis_[g]));
    basis_ = std::move(minimal);
    for (std::size_t g = 0; g < basis_.size(); ++g) reduce_full(basis_[g], g);
    std::sort(basis_.begin(), basis_.end(), [&](const Element& a, const Element& b) {
        const MTerm &x = a.real.front(), &y = b.real.front();
        return cmp_term(R, x.m, x.comp, y.m, y.comp) > 0;
    });
}

std::vector<Vec> ModuleGB::basis() const {
    std::vector<Vec> out;
    for (const auto& e : basis_) out.push_back(to_vec(ring_, e.real, rank_));
    return out;
}

Matrix ModuleGB::basis_matrix() const { return Matrix::from_columns(ring_, rank_, basis()); }

Matrix ModuleGB::log_matrix() const {
    if (!opts_.track_log) throw RingError("transformation log not tracked");
    std::vector<Vec> cols;
    for (const auto& e : basis_) cols.push_back(to_vec(ring_, e.log, ngens_));
    return Matrix::from_columns(ring_, ngens_, cols);
}

NormalForm ModuleGB::normal_form(const Vec& v) const {
    const Ring& R = *ring_;
    const Field& F = R.field();
    if (static_cast<int>(v.size()) != rank_) throw RingError("vector length mismatch");
    MVec r = to_mvec(R, v);
    std::vector<std::vector<Term>> quo(basis_.size());
    std::size_t i = 0;
    while (i < r.size()) {
        int g = find_divisor(r[i], basis_.size());
        if (g < 0) {
            ++i;
            continue;
        }
        const MTerm& l = basis_[g].real.front();
        Mono q = r[i].m.quo(l.m);
        mpq_class c = F.div(r[i].c, l.c);
        quo[g].push_back({q, c});
        r = sub_mul(R, r, basis_[g].real, q, c);
    }
    NormalForm nf;
    nf.remainder = to_vec(ring_, r, rank_);
    for (auto& q : quo) nf.quotients.push_back(Poly::from_terms(ring_, std::move(q)));
    return nf;
}

bool ModuleGB::contains(const Vec& v) const { return is_zero(normal_form(v).remainder); }

std::optional<Vec> ModuleGB::lift(const Vec& v) const {
    if (!opts_.track_log) throw RingError("transformation log not tracked");
    NormalForm nf = normal_form(v);
    if (!is_zero(nf.remainder)) return std::nullopt;
    const Ring& R = *ring_;
    MVec u;
    for (std::size_t g = 0; g < basis_.size(); ++g)
        for (const auto& t : nf.quotients[g].terms())
            u = sub_mul(R, u, basis_[g].log, t.m, R.field().neg(t.c));
    return to_vec(ring_, u, ngens_);
}

Matrix ModuleGB::syzygies() const {
    if (!opts_.want_syzygies) throw RingError("syzygies not requested");
    std::vector<Vec> cols;
    for (const auto& s : syz_) {
        Vec v = to_vec(ring_, s, ngens_);
        if (std::find(cols.begin(), cols.end(), v) == cols.end()) cols.push_back(std::move(v));
    }
    return Matrix::from_columns(ring_, ngens_, cols);
}

QuotientLength ModuleGB::quotient_length() const {
    const int nv = ring_->nvars();
    QuotientLength out{true, 0};
    for (int c = 0; c < rank_; ++c) {
        std::vector<Mono> leads;
        for (const auto& e : basis_)
            if (e.real.front().comp == c) leads.push_back(e.real.front().m);
        bool unit = std::any_of(leads.begin(), leads.end(), [](const Mono& m) { return m.is_one(); });
        if (unit) continue;
        std::array<int, kMaxVars> bound{};
        for (int i = 0; i < nv; ++i) {
            int b = -1;
            for (const auto& m : leads)
                if (m.deg == m.e[i] && (b < 0 || m.e[i] < b)) b = m.e[i];
            if (b < 0) return {false, 0};
            bound[i] = b;
        }
        // odometer over the box of exponents below the pure powers
        Mono cur;
        while (true) {
            bool standard = std::none_of(leads.begin(), leads.end(),
                                         [&](const Mono& m) { return m.divides(cur, nv); });
            if (standard) ++out.length;
            int i = 0;
            for (; i < nv; ++i) {
                if (++cur.e[i] < bound[i]) {
                    ++cur.deg;
                    break;
                }
                cur.deg -= cur.e[i] - 1;
                cur.e[i] = 0;
            }
            if (i == nv) break;
        }
    }
    return out;
}

int ModuleGB::krull_dimension() const {
    const int nv = ring_->nvars();
    int best = -1;
    for (int c = 0; c < rank_; ++c) {
        std::vector<Mono> leads;
        for (const auto& e : basis_)
            if (e.real.front().comp == c) leads.push_back(e.real.front().m);
        for (unsigned mask = 0; mask < (1u << nv); ++mask) {
            int size = __builtin_popcount(mask);
            if (size <= best) continue;
            bool independent = std::none_of(leads.begin(), leads.end(), [&](const Mono& m) {
                for (int i = 0; i < nv; ++i)
                    if (m.e[i] && !(mask >> i & 1u)) return false;
                return true;
            });
            if (independent) best = size;
        }
    }
    return best;
}

bool ModuleGB::verify() const {
    const Ring& R = *ring_;
    const Field& F = R.field();
    const int nv = R.nvars();
    for (std::size_t i = 0; i < basis_.size(); ++i)
        for (std::size_t j = i + 1; j < basis_.size(); ++j) {
            const MTerm &a = basis_[i].real.front(), &b = basis_[j].real.front();
            if (a.comp != b.comp) continue;
            Mono L = a.m.lcm(b.m, nv);
            MVec s = sub_mul(R, {}, basis_[i].real, L.quo(a.m), F.neg(F.inv(a.c)));
            s = sub_mul(R, s, basis_[j].real, L.quo(b.m), F.inv(b.c));
            if (!contains(to_vec(ring_, s, rank_))) return false;
        }
    return true;
}

ModuleGB module_gb(RingPtr ring, int rank, const std::vector<Vec>& gens) {
    return ModuleGB(std::move(ring), rank, gens);
}

NormalForm normal_form(const Vec& v, const ModuleGB& gb) { return gb.normal_form(v); }

std::optional<Vec> lift_through(const Vec& v, const Matrix& A) {
    const RingPtr& R = A.ring();
    if (is_zero(v)) return zero_vec(R, A.cols());
    for (int k = 0; k < A.cols(); ++k)
        if (A.col(k) == v) return unit_vec(R, A.cols(), k);
    return ModuleGB(A).lift(v);
}

std::optional<Matrix> lift_matrix(const Matrix& B, const Matrix& A) {
    const RingPtr& R = A.ring();
    Matrix out(R, A.cols(), B.cols());
    std::optional<ModuleGB> gb;
    std::vector<Vec> acols;
    for (int k = 0; k < A.cols(); ++k) acols.push_back(A.col(k));
    for (int c = 0; c < B.cols(); ++c) {
        Vec v = B.col(c);
        if (is_zero(v)) continue;
        auto hit = std::find(acols.begin(), acols.end(), v);
        if (hit != acols.end()) {
            out.at(static_cast<int>(hit - acols.begin()), c) = Poly::constant(R, 1);
            continue;
        }
        if (!gb) gb.emplace(A);
        auto u = gb->lift(v);
        if (!u) return std::nullopt;
        out.set_col(c, *u);
    }
    return out;
}

Matrix syzygies(const Matrix& A) {
    return ModuleGB(A, GbOptions{true, true}).syzygies();
}

QuotientLength quotient_length(const Matrix& presentation) {
    return ModuleGB(presentation, GbOptions{false, false}).quotient_length();
}

int krull_dimension(RingPtr ring, const std::vector<Poly>& ideal_gens) {
    std::vector<Vec> gens;
    for (const auto& g : ideal_gens) gens.push_back({g});
    return ModuleGB(std::move(ring), 1, gens, GbOptions{false, false}).krull_dimension();
}

}  // namespace dmflag
