#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hrlab/exact_point.hpp"

namespace hrlab {

// Biexponent (m, n) stands for the monomial conj(z)^m z^n.
using Biexponent = std::pair<int, int>;
using ExponentSet = std::vector<Biexponent>;

// Witness for the sigma condition: p != q and p + q < 2r with both (p, q)
// and (r, r) present in the set.
struct SigmaTriple {
    int p = 0;
    int q = 0;
    int r = 0;
};

// gcd of |n - m| over the off-diagonal part. Errors with AllDiagonal when the
// set has no off-diagonal element.
int gcd_diffs(const ExponentSet& xs);

// Lexicographically smallest (p, q, r) witness, or nullopt.
std::optional<SigmaTriple> sigma_condition(const ExponentSet& xs);

// Do the monomials of xs separate the points of X? Exact test: points with
// different moduli are split by any monomial of total degree >= 1; points
// with equal moduli need an off-diagonal (m, n) whose angle multiple
// |n - m| * (turn difference) is not an integer.
bool generates(const ExponentSet& xs, const PointSet& x);

// Finite form of the sector test for the pair set {(p,q),(r,r)}: X avoids 0
// and no two distinct points differ in angle by a nonzero multiple of a
// 1/|p-q| turn.
bool sector_condition(int p, int q, int r, const PointSet& x);

enum class WarningCode {
    NoDiagonalPair,
    LowDiagonal,
    NotGenerating,
};

struct VerdictWarning {
    WarningCode code;
    std::string message;
};

struct HyperrigidVerdict {
    enum class Kind { ByGcd, BySector, Unknown };
    Kind kind = Kind::Unknown;
    std::optional<SigmaTriple> witness;
    std::vector<VerdictWarning> warnings;
};

// Sufficiency check for hyperrigidity of the monomial family on X. ByGcd
// needs a sigma witness plus gcd 1 (X plays no role); BySector needs exactly
// the two-element set {(p,q),(r,r)} plus the sector test. Anything else is
// Unknown with structured warnings describing which known regime failed.
HyperrigidVerdict hyperrigid_sufficient(const ExponentSet& xs, const PointSet& x);

const char* warning_code_name(WarningCode c);

} // namespace hrlab
