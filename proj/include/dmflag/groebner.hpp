#pragma once

#include "dmflag/matrix.hpp"

#include <optional>
#include <vector>

namespace dmflag {

/// Free-module term m*e_comp with coefficient c.
struct MTerm {
    Mono m;
    int comp;
    mpq_class c;
};

/// Sparse module vector, terms sorted descending in position-over-term order
/// (component 0 is the largest).
using MVec = std::vector<MTerm>;

struct GbOptions {
    bool track_log = true;
    bool want_syzygies = false;
};

struct NormalForm {
    Vec remainder;
    /// v = sum quotients[i] * basis[i] + remainder
    std::vector<Poly> quotients;
};

struct QuotientLength {
    bool finite = false;
    long long length = 0;
};

/// Reduced Groebner basis of the submodule of R^rank spanned by gens.
class ModuleGB {
public:
    ModuleGB(RingPtr ring, int rank, const std::vector<Vec>& gens, GbOptions opts = {});
    ModuleGB(const Matrix& columns, GbOptions opts = {});

    const RingPtr& ring() const { return ring_; }
    int rank() const { return rank_; }
    int num_generators() const { return ngens_; }
    std::size_t size() const { return basis_.size(); }

    std::vector<Vec> basis() const;
    Matrix basis_matrix() const;
    /// Column i expresses basis[i] in the original generators.
    Matrix log_matrix() const;

    NormalForm normal_form(const Vec& v) const;
    bool contains(const Vec& v) const;
    /// u with sum u_k gens_k = v, or nullopt.
    std::optional<Vec> lift(const Vec& v) const;
    /// Columns generate the relations among the original generators.
    Matrix syzygies() const;

    QuotientLength quotient_length() const;
    /// Dimension of R/I for a rank-one submodule I; -1 for the unit ideal.
    int krull_dimension() const;

    /// Buchberger criterion recomputed on the reduced basis.
    bool verify() const;

private:
    struct Element {
        MVec real;
        MVec log;
    };

    void run(std::vector<Element> input);
    void reduce_full(Element& f, std::size_t limit) const;
    int find_divisor(const MTerm& t, std::size_t limit) const;
    void interreduce();

    RingPtr ring_;
    int rank_;
    int ngens_;
    GbOptions opts_;
    std::vector<Element> basis_;
    std::vector<MVec> syz_;
};

/// Free-function forms.
ModuleGB module_gb(RingPtr ring, int rank, const std::vector<Vec>& gens);
NormalForm normal_form(const Vec& v, const ModuleGB& gb);
std::optional<Vec> lift_through(const Vec& v, const Matrix& A);
/// Lift every column of B through A; nullopt when some column is not in the image.
std::optional<Matrix> lift_matrix(const Matrix& B, const Matrix& A);
Matrix syzygies(const Matrix& A);
QuotientLength quotient_length(const Matrix& presentation);
int krull_dimension(RingPtr ring, const std::vector<Poly>& ideal_gens);

MVec to_mvec(const Ring& R, const Vec& v, int comp_offset = 0);
Vec to_vec(const RingPtr& R, const MVec& v, int rank, int comp_offset = 0);

}  // namespace dmflag
