#pragma once

#include "dmflag/perturb.hpp"

#include <functional>
#include <string>
#include <vector>

namespace dmflag {

struct ResolveOptions {
    ResolutionOptions resolution;
    /// Called with a short message after each stage; may be empty.
    std::function<void(const std::string&)> progress;
};

/// One ambient degree k of a Cartan-Eilenberg resolution: resolutions of B_k and H_k, the
/// copy G of the resolution of B_{k-1} (negated, augmented by lifts into D_k), and the two
/// horseshoes F^Z = (B, H; alpha) and F^{D_k} = (F^Z, G; theta).  Augmentations use D's
/// global coordinates.
struct CeComponent {
    int degree = 0;
    int prev = -1;  // component holding B_{k-1}, or -1
    Resolution B, H, G;
    Horseshoe Z, Dk;
};

enum class CePart { B, H, G };

struct CeGenerator {
    CePart part = CePart::B;
    int comp = 0;  // index into components
    int hom = 0;   // homological degree inside F^{D_k}
    int pos = 0;   // position inside the part's module in that degree
};

/// Flag G = (+)_k F^{D_k} with differential [[dB, alpha, 1 + gamma], [0, dH, beta], [0, 0, -dB]].
/// F^B and F^H generators of homological degree m sit at level m, G generators at m + 1.
struct CeResolution {
    DiffModule target;
    std::vector<CeComponent> components;
    FreeFlag flag;
    DmMorphism augmentation;  // flag.dm -> target
    std::vector<CeGenerator> generators;

    std::vector<int> indices(CePart part) const;
    /// Global index of (component, homological degree, local index in F^{D_k}).
    int index(int comp, int hom, int local) const;
    /// The identity blocks G^{B_{k-1}} -> F^{B_{k-1}} as a full matrix.
    Matrix identity_part() const;
    /// d with the identity part removed and only the dB, dH, -dB blocks kept.
    Matrix split_part() const;

    std::vector<std::vector<int>> offsets;  // offsets[comp][hom]
};

/// Throws RingError when a resolution exceeds opts.resolution.length_cap.
CeResolution ce_resolution(const DiffModule& D, const ResolveOptions& opts = {});

/// Flag-preserving lift of phi with the block-triangular horseshoe shape; commutes with the
/// augmentations exactly.  Throws RingError when a lift fails.
FlagMorphism ce_lift(const DmMorphism& phi, const CeResolution& G, const CeResolution& G2);

/// Homotopy s with f = d s + s d for a block-triangular map f : G -> G2 with
/// augmentation(G2) f = 0 (a difference of two ce_lift outputs, say).  s raises levels by at
/// most one.
Matrix nullhomotopy(const CeResolution& G, const CeResolution& G2, const Matrix& f);

struct AnchoredResolution {
    FreeFlag flag;
    CeResolution ce;
    SdrData sdr;              // ce.flag.dm -> flag.dm
    DmMorphism augmentation;  // flag.dm -> ce.target
    /// Anchor resolutions F^{H_k}, one per ambient degree.
    std::vector<Resolution> anchor_resolutions() const;
};

/// Perturbation of the split retraction of the CE resolution onto F^H (homotopy minus the
/// reverse identity F^B -> G^B).
AnchoredResolution degenerate_to_homology(const DiffModule& D, const ResolveOptions& opts = {});

/// The closed form sum_l (-1)^(l+1) beta (Q gamma)^l Q alpha of the perturbed anchor
/// differential, Q the reverse identity.
Matrix degeneration_series(const CeResolution& G);

/// degenerate_to_homology with minimal anchor resolutions, then the anchor minimized and the
/// flag transferred.
AnchoredResolution quasiminimal(const DiffModule& D, const ResolveOptions& opts = {});

/// The resolutions of boundaries and cycles built from the strata of an anchored flag and the
/// resulting CE resolution of F.dm, with the retraction onto F.
struct AnchoredRetract {
    CeResolution ce;
    SdrData sdr;          // ce.flag.dm -> F.dm
    Matrix delta_small;   // perturbed anchor differential minus the anchor part
    bool identity = false;  // augmentation o i_inf = id_F
};

AnchoredRetract anchored_as_retract(const FreeFlag& F);

struct FunctorialDegeneration {
    AnchoredResolution source, target;
    FlagMorphism lift;    // source.flag -> target.flag
    HomotopySquare square;  // over the two augmentations, bottom phi
};

/// Anchored (or, with minimal set, quasiminimal) resolutions of both ends and p'_inf Phi i_inf.
FunctorialDegeneration functorial_degeneration(const DmMorphism& phi, bool minimal = false,
                                               const ResolveOptions& opts = {});

struct FlagPreserving {
    Matrix psi;  // flag-preserving
    Matrix h;    // phi - psi = d h + h d
};

/// phi : F -> F2 between anchored resolutions (a DM morphism of the underlying modules).
FlagPreserving flag_preserve_up_to_homotopy(const FreeFlag& F, const FreeFlag& F2, const Matrix& phi);

}  // namespace dmflag
