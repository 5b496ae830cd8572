#pragma once

#include "dmflag/groebner.hpp"
#include "dmflag/homalg.hpp"

#include <vector>

namespace dmflag {

struct DmMorphism {
    DiffModule source, target;
    Matrix map;  // target.rank() x source.rank()
};

bool is_morphism(const DmMorphism& f);
DmMorphism identity_morphism(const DiffModule& D);
/// g after f.
DmMorphism compose(const DmMorphism& f, const DmMorphism& g);

/// Square from the arrow phi : C -> D to the arrow phi' : C' -> D', with
/// top : C -> C', bottom : D -> D' and phi' top - bottom phi = d h + h d.
struct HomotopySquare {
    DmMorphism from;  // phi
    DmMorphism to;    // phi'
    Matrix top, bottom, h;
};

bool is_valid(const HomotopySquare& sq);
HomotopySquare identity_square(const DmMorphism& phi);
/// second after first: (top' top, bottom' bottom, bottom' h + h' top).
HomotopySquare compose(const HomotopySquare& first, const HomotopySquare& second);

struct HomologyPiece {
    int degree = 0;
    Matrix cycles;        // columns generate Z_j inside D_j
    Matrix presentation;  // H_j = coker, rows indexed by the columns of cycles
    QuotientLength length;
};

struct DmHomology {
    std::vector<HomologyPiece> pieces;
    bool finite() const;
    long long total() const;
    long long at(int degree) const;
    /// H_j = 0 (finite of length zero, or degree absent).
    bool vanishes(int degree) const;
};

/// Per-degree homology.  With minimize_first the computation runs on the cancellation
/// retract, so cycles and presentations refer to that smaller module.
DmHomology homology(const DiffModule& D, bool minimize_first = true);

/// Regrade onto Z/target.  Requires target | modulus or modulus = 0.  aux records the old degree.
DiffModule fold(const DiffModule& D, int target);
DiffModule fold(const ChainComplex& C, int target);

/// Two copies of D in Z/2-degrees 0 and 1 with the differential crossing between them;
/// aux holds the original degree.
DiffModule unfold_z2(const DiffModule& D);

/// Sign of a degree-j element in the Koszul rule: (-1)^r with r the representative of j in 0..d-1.
int koszul_sign(const DiffModule& D, int j);

/// Basis (a, b) in lexicographic order.  Throws unless d = 0, d even, or the field has
/// characteristic 2.
DiffModule dm_tensor(const DiffModule& D, const DiffModule& E);
/// Basis e_{r,c} : D_c -> E_r, row index major, differential d_E f - (-1)^{|f|} f d_D.
DiffModule dm_hom(const DiffModule& D, const DiffModule& E);

/// Cone(phi) = target (+) source with [[d', -phi], [0, -d]].
DiffModule dm_cone(const DmMorphism& phi);
/// Cone(from) -> Cone(to) given by [[bottom, h], [0, top]].
DmMorphism cone_functor(const HomotopySquare& sq);

/// Given a square on arrows nu : C -> E, nu' : C' -> E' and retractions
/// left : C -> D, right : C' -> D' (big = C, C'), the square on nu iota : D -> E,
/// nu' iota' : D' -> E' with top p' phi iota and homotopy (sigma + nu' h' phi) iota.
HomotopySquare transport_square(const HomotopySquare& sq, const SdrData& left, const SdrData& right);

/// Kronecker product, (a (x) b)((i,k),(j,l)) = a(i,j) b(k,l).
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace dmflag
