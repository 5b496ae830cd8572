#pragma once

#include "dmflag/resolve.hpp"

#include <gmpxx.h>

#include <map>
#include <optional>
#include <vector>

namespace dmflag {

struct CyclicPower {
    DiffModule power;  // T^k(P), basis e_{i_1} (x) ... (x) e_{i_k} with i_1 most significant
    Matrix sigma;      // x_1 (x) ... (x) x_k -> (+-) x_k (x) x_1 (x) ... (x) x_{k-1}
};

/// Throws RingError unless k is a prime unit in the field with a primitive kth root there.
CyclicPower tensor_power_cyclic(const DiffModule& P, int k);

/// Primitive kth root of unity in R's field (-1 for k = 2), or nullopt.
std::optional<mpq_class> root_of_unity(const RingPtr& R, int k);

struct EigenPiece {
    DiffModule dm;
    Matrix basis;  // columns span the eigenspace inside T
};

struct EigenSplit {
    DiffModule base;
    int power = 2;
    mpq_class zeta;
    std::map<int, EigenPiece> pieces;  // i -> zeta^i eigenspace
};

/// sigma must be a signed permutation with sigma^k = 1 commuting with T.diff.
EigenSplit eigen_split(const DiffModule& T, const Matrix& sigma, int k, const mpq_class& zeta);

struct CyclicAdams {
    AnchoredResolution anchored;  // quasiminimal representative of D
    EigenSplit split;
    const DiffModule& plus() const { return split.pieces.at(0).dm; }
    const DiffModule& minus() const { return split.pieces.at(1).dm; }
    std::vector<DiffModule> minus_classes() const;
};

/// The pieces of T^k of the quasiminimal resolution of D.
CyclicAdams cyclic_adams(const DiffModule& D, int k, const ResolveOptions& opts = {});

struct RankProfile {
    int rank = 0;
    std::vector<long long> h;  // h[i], i = 0 .. d-1
    long long total = 0;
    long long chi = 0;  // sum (-1)^i h_i
    int dim = 0;
    int codim = 0;
};

/// Throws RingError when some H_i has infinite length and no codim is given.
RankProfile euler_and_profile(const DiffModule& D, std::optional<int> codim = std::nullopt);

/// chi(plus) - chi(zeta piece).
long long chi_psi(const CyclicAdams& a);

enum class Verdict { holds, fails, inapplicable };
const char* to_string(Verdict v);

struct TrcResult {
    Verdict verdict = Verdict::inapplicable;
    mpq_class bound;   // 2^dim |chi| / h
    mpq_class margin;  // rank - bound
    bool concentrated = false;  // H in a single degree, so rank >= 2^codim was also checked
    bool codim_bound = true;
};

TrcResult trc_verdict(const RankProfile& p);
TrcResult trc_check(const DiffModule& D, std::optional<int> codim = std::nullopt);

struct TensorLength {
    long long h_tensor = 0;
    long long bound = 0;   // h(D) rank(D')
    bool within = false;   // h_tensor <= bound
    bool applicable = false;  // both sides flags of finite class
};

/// D.modulus must not be 1.  flags says whether both inputs carry free flag structures.
TensorLength tensor_length_test(const DiffModule& D, const DiffModule& D2, bool flags);

/// Entry-wise p^e-th power; weights and shift scale by p^e.
DiffModule frobenius_dm(const DiffModule& D, unsigned e);

struct DuttaSequence {
    std::vector<mpq_class> values;  // chi(F^e D) / p^(e dim R), e = 0 .. E
    bool stabilized = false;        // last two values agree
};

DuttaSequence dutta_sequence(const DiffModule& D, unsigned E);

}  // namespace dmflag
