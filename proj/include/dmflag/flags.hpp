#pragma once

#include "dmflag/dm_ops.hpp"

#include <stdexcept>
#include <vector>

namespace dmflag {

struct FlagError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Free flag: a differential module with a flag degree (level) per generator.  Generator k
/// lies in the bigraded piece D_{level, column} with column = degree - level (mod d).
/// Every nonzero entry of the differential drops the level by at least one; the entries
/// dropping it by exactly t + 1 form the stratum delta_t.
struct FreeFlag {
    DiffModule dm;
    std::vector<int> level;

    int rank() const { return dm.rank(); }
    const RingPtr& ring() const { return dm.ring(); }
    int modulus() const { return dm.modulus; }
    int max_level() const;
    int column(int k) const;
    /// Columns present, ascending.
    std::vector<int> columns() const;
    /// delta_t as a full-size matrix.
    Matrix stratum(int t) const;
    /// Largest t with delta_t != 0, or -1 for a zero differential.
    int max_stratum() const;
    /// Generators with the given level and column, ascending.
    std::vector<int> indices(int lvl, int col) const;
};

/// Rejects assignments where some entry does not drop the level, naming the entry.
FreeFlag dm_to_flag(const DiffModule& D, std::vector<int> level);
inline const DiffModule& flag_to_dm(const FreeFlag& F) { return F.dm; }
/// Fold to Z/d with level = homological degree (requires lo >= 0).
FreeFlag flag_from_complex(const ChainComplex& C, int d);
/// Sum of strata; strata[t] drops the level by t + 1.
FreeFlag flag_from_strata(int modulus, std::vector<int> level, std::vector<int> column,
                          const std::vector<Matrix>& strata, std::vector<int> weight = {}, int shift = 0);

/// Basis-level check of the drop condition: entries of f have level drop >= min_drop.
bool drops_level(const FreeFlag& src, const FreeFlag& tgt, const Matrix& f, int min_drop);
bool is_flag_morphism(const FreeFlag& src, const FreeFlag& tgt, const Matrix& f);
/// f - g = d' h + h d with h raising the level by at most one.
bool is_flag_homotopy(const FreeFlag& src, const FreeFlag& tgt, const Matrix& f, const Matrix& g,
                      const Matrix& h);

/// The part of f dropping the level by exactly t.
Matrix map_stratum(const FreeFlag& src, const FreeFlag& tgt, const Matrix& f, int t);

/// Stratified identities: (delta_0)^2 = 0, delta_0 delta_i + delta_i delta_0 = -sum delta_j delta_{i-j}.
bool strata_identities_hold(const FreeFlag& F);

struct FlagMorphism {
    FreeFlag source, target;
    Matrix map;
    Matrix stratum(int t) const { return map_stratum(source, target, map, t); }
};

bool is_valid(const FlagMorphism& f);

/// The anchor (D, delta_0) indexed by level, every column summed in each level.
ChainComplex anchor(const FreeFlag& F);

struct AnchorColumn {
    int column = 0;
    ChainComplex complex;
    std::vector<std::vector<int>> generators;  // generators[i]: flag generators at level i
};
std::vector<AnchorColumn> anchor_columns(const FreeFlag& F);

/// Anchor homology vanishes in every level >= 1, column by column.
bool is_anchored_resolution(const FreeFlag& F);

/// Inverse of a flag morphism whose level-preserving part is invertible.
FlagMorphism triangular_invert(const FlagMorphism& f);

/// Object of the twisted category: strata with sum_j (-1)^j delta_j delta_{i-j} = 0.
struct TauFlag {
    DiffModule carrier;  // diff holds the sum of the twisted strata; need not square to zero
    std::vector<int> level;
    FreeFlag as_flag_data() const { return {carrier, level}; }
    Matrix stratum(int t) const { return as_flag_data().stratum(t); }
};

bool tau_relations_hold(const TauFlag& F);
/// sum_j (-1)^j delta'_j psi_{i-j} = (-1)^i sum_k psi_k delta_{i-k} for every i.
bool is_tau_morphism(const TauFlag& src, const TauFlag& tgt, const Matrix& psi);

/// Strata delta_t -> tau delta_t with tau = (-1)^level.
TauFlag twist_phi(const FreeFlag& F);
FreeFlag twist_phi_inverse(const TauFlag& F);
/// On maps: psi_i = (-1)^i phi_i (phi_i the part dropping the level by i); an involution.
Matrix twist_phi_map(const std::vector<int>& src_level, const std::vector<int>& tgt_level, const Matrix& f);

struct AnchorHomology {
    std::vector<int> column;
    std::vector<QuotientLength> h0;
    bool finite() const;
    long long total() const;
};

/// H_0 of each anchor column.  Throws FlagError unless F is an anchored resolution.
AnchorHomology flag_homology_via_anchor(const FreeFlag& F);

}  // namespace dmflag
