#pragma once

#include "dmflag/flags.hpp"

#include <optional>
#include <stdexcept>

namespace dmflag {

struct NotSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// (d + delta)^2 = 0 with delta of degree -1.
bool is_perturbation(const DiffModule& D, const Matrix& delta);
/// D with differential d + delta; the graded flag survives only if every entry stays homogeneous.
DiffModule perturbed(const DiffModule& D, const Matrix& delta);

/// Least N with (delta h)^N = 0, or nullopt when delta h is not nilpotent.
std::optional<int> check_small(const Matrix& delta, const Matrix& h);

struct PerturbedSdr {
    SdrData sdr;        // between (C, d + delta) and (D, d + delta_small)
    Matrix delta_small;
};

/// First perturbation lemma with A = sum_{t<N} (delta h)^t:
/// p + p A delta h, i + h A delta i, h + h A delta h, delta_small = p A delta i.
/// p i = id survives only for strong input.
PerturbedSdr perturb_sdr(const SdrData& sdr, const Matrix& delta);

/// Three homotopy replacements giving h i = 0, then p h = 0, then h^2 = 0.
SdrData make_strong(const SdrData& sdr);

/// i p - 1 = d h + h d on big, p i - 1 = d h' + h' d on small.
struct HomotopyEquivalence {
    DiffModule big, small;
    Matrix p, i, h, h_small;
};

bool check_hequiv(const HomotopyEquivalence& he);
HomotopyEquivalence as_hequiv(const SdrData& sdr);

struct PerturbedHequiv {
    HomotopyEquivalence he;
    Matrix delta_small;
};

/// Second perturbation lemma through B = C (+) Cone(id_D), which retracts onto D by
/// I = (i, 1, 0), P = (p, 1 - p i, -h'); made strong, then perturbed on the C block only.
PerturbedHequiv perturb_hequiv(const HomotopyEquivalence& he, const Matrix& delta);

/// The anchor (F, delta_0) as a differential module in F's own basis.
DiffModule anchor_dm(const FreeFlag& F);

struct TransferredFlag {
    FreeFlag flag;
    HomotopyEquivalence he;  // between F and the new flag
    bool retract = false;    // he.p he.i = id and he.h_small = 0
};

/// Flag on G (with the given levels) homotopy equivalent to F, from an equivalence between
/// anchor_dm(F) and G.  Retractions go through make_strong and perturb_sdr.
TransferredFlag transfer_anchor(const FreeFlag& F, const HomotopyEquivalence& he, const std::vector<int>& g_levels);

}  // namespace dmflag
