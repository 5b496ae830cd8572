#pragma once

#include "dmflag/dm.hpp"

#include <vector>

namespace dmflag {

/// Bounded chain complex C_lo .. C_hi of graded free modules, homological indexing.
class ChainComplex {
public:
    ChainComplex() = default;
    ChainComplex(RingPtr ring, int lo, std::vector<std::vector<int>> weights);

    const RingPtr& ring() const { return ring_; }
    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(weights_.size()) - 1; }
    int length() const { return static_cast<int>(weights_.size()); }
    int rank(int i) const;
    const std::vector<int>& weights(int i) const;
    int total_rank() const;

    /// d_i : C_i -> C_{i-1}; a zero matrix outside the support.
    Matrix d(int i) const;
    void set_d(int i, Matrix m);

    /// Basis ordered by degree lo..hi, as a modulus-0 differential module.
    DiffModule to_dm(bool graded = true) const;
    static ChainComplex from_dm(const DiffModule& D);
    /// Offset of degree i inside to_dm's basis.
    int offset(int i) const;

    bool is_graded_complex() const;
    bool squares_to_zero() const;

    /// Drop zero modules at both ends.
    ChainComplex trimmed() const;

private:
    RingPtr ring_;
    int lo_ = 0;
    std::vector<std::vector<int>> weights_;
    std::vector<Matrix> d_;  // d_[k] = d_{lo+k}
};

/// Components f_i : C_i -> C'_{i+shift}.
struct ChainMap {
    int shift = 0;
    std::vector<Matrix> comp;  // indexed by i - source.lo()
    int source_lo = 0;
    const Matrix& at(int i) const { return comp[i - source_lo]; }
};

/// ker d_i = im d_{i+1}.
bool is_exact_at(const ChainComplex& C, int i);

bool is_chain_map(const ChainComplex& src, const ChainComplex& tgt, const ChainMap& f);

/// Free resolution F of a module M with augmentation aug: F_0 -> E into an ambient free
/// module E, image of aug generating M modulo the relations rel (M = (im aug + im rel)/im rel).
struct Resolution {
    ChainComplex F;
    Matrix aug;
    Matrix rel;
};

struct ResolutionOptions {
    bool minimize = true;
    int length_cap = -1;  // -1: 2 nvars + 4
};

/// Resolves coker(presentation).  row_weights label the target generators.
Resolution free_resolution(const Matrix& presentation, ResolutionOptions opts = {},
                           std::vector<int> row_weights = {});

/// Resolves the submodule of R^n generated by the columns of gens.
Resolution resolve_submodule(const Matrix& gens, ResolutionOptions opts = {},
                             std::vector<int> row_weights = {});

struct MinimizedComplex {
    ChainComplex C;
    SdrData sdr;  // on the to_dm() forms
};

MinimizedComplex minimize_complex(const ChainComplex& C);

/// Lift of f : E -> E' (on ambients, carrying M into M') to a chain map F -> F'.
ChainMap comparison_lift(const Matrix& f, const Resolution& src, const Resolution& tgt);

struct Horseshoe {
    Resolution FB;
    std::vector<Matrix> alpha;  // alpha[i] : FC_i -> FA_{i-1}, i >= 1 (alpha[0] unused)
};

/// A ⊆ B ⊆ E with FA resolving A (aug into E) and FC resolving B/A (aug lifts generators into E).
Horseshoe horseshoe(const Resolution& FA, const Resolution& FC);

ChainComplex cone(const ChainComplex& src, const ChainComplex& tgt, const ChainMap& f);
ChainComplex tensor(const ChainComplex& C, const ChainComplex& D);
ChainComplex hom_complex(const ChainComplex& C, const ChainComplex& D);

/// Koszul complex on the given elements, subsets in lexicographic order,
/// d(e_S) = sum_t (-1)^t f_{s_t} e_{S - s_t}.
ChainComplex koszul_complex(const RingPtr& ring, const std::vector<Poly>& elements);

/// Column weights from entries and row weights (max of row weight + entry degree).
std::vector<int> column_weights(const Matrix& m, const std::vector<int>& row_weights);

}  // namespace dmflag
