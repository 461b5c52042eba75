#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hrlab/exponents.hpp"
#include "hrlab/matrix_core.hpp"

namespace hrlab {

struct HansenReport {
    double gap = 0.0;       // least eigenvalue of f(T* A T) - T* f(A) T
    double diff_norm = 0.0;
    bool equality = false;  // diff vanishes at the (tighter) equality tolerance
};

// Operator-monotone power inequality f(t) = t^s, s in (0, 1): for a
// contraction T and PSD A, T* f(A) T <= f(T* A T). The inequality is checked
// at ineq_tol, equality claimed at the tighter eq_tol; the two live an order
// of magnitude apart so a strict gap cannot masquerade as equality.
HansenReport hansen_check(const ComplexMatrix& a, const ComplexMatrix& t, double s,
                          const ToleranceConfig& tol = {}, double eq_tol = 1e-10,
                          double ineq_tol = 1e-9);

struct LiebRuskaiReport {
    std::vector<double> gaps;            // psd gap per epsilon, schedule order
    double final_gap = 0.0;
    bool monotone = true;                // quadratic forms nondecreasing as eps drops
};

// Schwarz-type bound for the congruence map X -> R* X R: the compressed
// Gram block R*(A*A)R dominates the limit of
// R*(A*B)R (R*(B*B)R + eps I)^{-1} R*(B*A)R as eps decreases to 0.
// Monotonicity of the inner term is sampled at eight fixed test vectors.
LiebRuskaiReport lieb_ruskai_check(const ComplexMatrix& r, const ComplexMatrix& a,
                                   const ComplexMatrix& b,
                                   const std::vector<double>& eps_schedule,
                                   const ToleranceConfig& tol = {});

struct CommutationVerdict {
    std::map<std::string, double> residuals;  // raw, unscaled
    std::map<std::string, bool> conditions;   // residual under its scaled gate
    bool equivalent = true;                   // conditions expected equivalent agree
};

// Labeled commutation residuals for a projection P against T. The first
// family ties the compression being multiplicative to P reducing T; the
// second, available when T is normal and a biexponent is given, walks the
// chain from commuting with the mixed power down to commuting with N^|q-p|.
CommutationVerdict projection_commutation_check(const ComplexMatrix& t, const ComplexMatrix& p,
                                                const std::optional<Biexponent>& pq = {},
                                                const ToleranceConfig& tol = {});

struct Main1Report {
    bool hypothesis_met = true;
    double worst_hypothesis_residual = 0.0;
    std::vector<std::pair<int, double>> diagonal_residuals;  // n -> residual
    int d = 0;
    double commute_power_residual = 0.0;   // ||P N^d - N^d P||
    double commute_modulus_residual = 0.0; // ||P |N| - |N| P||
    double kernel_split_residual = 0.0;    // ||P P_ker - P_ker P||
    bool conclusions_hold = false;
};

// Checks the compression-moment rigidity statement on concrete matrices:
// given matching mixed moments for an exponent set with a sigma witness, the
// diagonal moments must match for every exponent and the frame projection
// must commute with N^d (d = gcd of the differences) and with |N|, splitting
// H along ker N and its complement. A failed hypothesis is informational:
// the report says so and skips the conclusions.
Main1Report main1_verify(const NormalOperator& n, const ComplexMatrix& basis,
                         const ComplexMatrix& t, const ExponentSet& xs,
                         const ToleranceConfig& tol = {});

} // namespace hrlab
