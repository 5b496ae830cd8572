#pragma once

#include "dmflag/matrix.hpp"

#include <string>
#include <vector>

namespace dmflag {

/// Free Z/d-graded differential module.  modulus 0 means Z-graded on a finite window.
/// Basis element k sits in homological degree degree[k] and internal degree weight[k];
/// diff(r, c) may be nonzero only when degree[r] = degree[c] - 1 (mod d).
struct DiffModule {
    int modulus = 0;
    std::vector<int> degree;
    std::vector<int> weight;
    Matrix diff;
    int shift = 0;
    /// When set, dm_check also demands every entry be homogeneous of degree
    /// weight[c] + shift - weight[r].
    bool graded = false;
    /// Extra per-generator label carried through constructions (empty when unused).
    std::vector<int> aux;

    DiffModule() = default;
    DiffModule(int modulus, std::vector<int> degree, Matrix diff, std::vector<int> weight = {},
               int shift = 0);

    const RingPtr& ring() const { return diff.ring(); }
    int rank() const { return static_cast<int>(degree.size()); }
    int wrap(int j) const;
    /// Basis indices in degree j, ascending.
    std::vector<int> indices(int j) const;
    /// Degrees to iterate over: 0..d-1, or the occupied degrees when d = 0.
    std::vector<int> degrees() const;
    /// The component d_j : D_source -> D_target as a matrix.
    Matrix block(int target, int source) const;
    DiffModule permuted(const std::vector<int>& order) const;
};

struct DmReport {
    bool ok = true;
    std::string message;
    int row = -1, col = -1;
};

/// Square-zero, degree pattern and (when every entry is homogeneous) homogeneity of degree shift.
DmReport dm_check(const DiffModule& D);

/// Entry (r,c) nonzero only when tgt.degree[r] = src.degree[c] + offset (mod tgt.modulus).
bool respects_degree(const DiffModule& src, const DiffModule& tgt, const Matrix& f, int offset = 0);
/// A degree-0 map with tgt.d f = f src.d.
bool is_morphism(const DiffModule& src, const DiffModule& tgt, const Matrix& f);
/// f - g = d' h + h d with h of degree +1.
bool is_homotopy(const DiffModule& src, const DiffModule& tgt, const Matrix& f, const Matrix& g,
                 const Matrix& h);

/// Retraction datum with p i = id and i p - id = d h + h d.
struct SdrData {
    DiffModule big, small;
    Matrix p;  // big -> small
    Matrix i;  // small -> big
    Matrix h;  // big -> big, degree +1
};

struct SdrReport {
    bool maps_ok = false;      // p and i are morphisms of the right shape and degree
    bool pi_identity = false;
    bool homotopy = false;     // i p - id = d h + h d
    bool h_squared = false;    // h h = 0
    bool h_i = false;          // h i = 0
    bool p_h = false;          // p h = 0
    bool retract() const { return maps_ok && pi_identity && homotopy; }
    bool strong() const { return retract() && h_squared && h_i && p_h; }
};

SdrReport check_sdr(const SdrData& s);
SdrData identity_sdr(const DiffModule& D);
/// first: A -> B, second: B -> C, result A -> C.
SdrData compose(const SdrData& first, const SdrData& second);

struct Minimized {
    SdrData sdr;
    /// Original index of each basis element of the small module.
    std::vector<int> kept;
};

/// Iterated cancellation of constant entries M_rc (r != c, M_cc = 0), lowest column weight first,
/// then (row, col).  When levels are given only entries with levels[c] - levels[r] = 1 are used.
Minimized minimize(const DiffModule& D, const std::vector<int>* levels = nullptr);

}  // namespace dmflag
