#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hrlab/choquet.hpp"
#include "hrlab/matrix_core.hpp"
#include "hrlab/povm.hpp"

namespace hrlab {

// The ambient space K splits as H (first h_dim coordinates) plus a finite
// shift tail. V acts as the identity on H and as the truncated unilateral
// shift on the tail; the sequence member at step n is
//   T_n = V^n N V^{*n} + lambda (I - V^n V^{*n}).
struct SequenceConfig {
    NormalOperator n;
    Eigen::Index h_dim = 1;
    Eigen::Index tail_dim = 0;
    Complex lambda;
    int n_max = 0;
};

// Weak pairing probe <. u, v> with unit vectors on K. degree counts how deep
// into the tail the pair reaches: 0 for H-supported vectors, otherwise one
// past the largest occupied tail index.
struct Probe {
    ComplexVector u;
    ComplexVector v;
    int degree = 0;
    std::string label;
};

std::vector<Probe> default_probes(const SequenceConfig& cfg);

ComplexMatrix shift_power(const SequenceConfig& cfg, int n); // V^n, exact 0/1 entries

ComplexMatrix build_sequence(const SequenceConfig& cfg, int n);

struct StepFunctional {
    std::string label;
    std::function<Complex(Complex)> f;
};

StepFunctional monomial_functional(int m, int n);

struct ConvergenceRow {
    std::string f_label;
    int n = 0;
    double weak_gap = 0.0;        // worst probe pairing against f(comparison)
    double strong_gap = 0.0;      // worst ||(f(T_n) - f(comparison)) u||
    double weak_shift = 0.0;      // worst pairing change against the final step
    double discarded_norm = 0.0;  // edge leak cut off by the compression
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    double identity_residual = 0.0; // strong-norm expansion identity defect
    double seq_norm_max = 0.0;
    double comparison_norm = 0.0;
    bool norm_bound_ok = true;      // comparison norm and spectrum under seq_norm_max
};

// Gap table for each functional and each step against a comparison operator
// (default: compression of N to H, extended by lambda on the tail). After
// truncation T_n is only normal on the block where V^n V^{*n} acts as an
// exact projection; functionals are evaluated through that compression and
// the discarded boundary block norm is reported.
ConvergenceReport convergence_gaps(const SequenceConfig& cfg,
                                   const std::vector<StepFunctional>& fs,
                                   const std::vector<Probe>& probes,
                                   const std::optional<ComplexMatrix>& comparison = {},
                                   const ToleranceConfig& tol = {});

struct Main2Report {
    ConvergenceReport gaps;
    AtomicMeasure witness;     // representing measure behind the construction
    Complex lambda0;
    Complex lambda;
    int n_max = 0;
    bool sot_diverges = false;             // some functional keeps a strong gap
    double sot_divergence_value = 0.0;
    std::string sot_witness_label;
    bool weak_all_converge = false;        // every pairing goes stationary
    double weak_stationarity_defect = 0.0;
    bool weak_limit_matches_on_m = false;  // pairings land on the comparison for M
    double weak_on_m_defect = 0.0;
    bool mismatch_found = false;           // some candidate leaves the comparison
    std::string mismatch_label;
    double mismatch_value = 0.0;
};

// End-to-end non-convergence experiment. Requires lambda0 to sit off the
// LP boundary of (X, M); the witness measure is dilated, rotated so H is the
// first coordinate, padded by lambda, and run through convergence_gaps
// against the comparison lambda0 I_H + lambda I_tail. The default mismatch
// candidates are the identity coordinate and its square modulus.
Main2Report main2_experiment(const PointSet& x, const MonomialSpace& m,
                             const ExactPoint& lambda0, const ExactPoint& lambda, int padding,
                             int n_max = -1,
                             const std::vector<Biexponent>& mismatch_candidates = {{0, 1},
                                                                                   {1, 1}},
                             const ToleranceConfig& tol = {});

struct ScalarSearchResult {
    bool found = false;
    AtomicMeasure measure;
    double residual_low = 0.0;   // diagonal-exponent moment defect
    double residual_high = 0.0;  // off-diagonal-exponent moment defect
    int trials_used = 0;
};

// Real scalar regime with the diagonal exponent at or below the off-diagonal
// line (2r <= p+q): look for a non-point probability measure on the line
// matching both power moments of t. Refuses (RegimeError) when 2r > p+q,
// where such a measure cannot exist, or when p == q.
ScalarSearchResult scalar_counterexample_search(int p, int q, int r, double t, int budget,
                                                std::uint64_t seed = 0);

struct PovmSearchOptions {
    int budget = 10000;
    std::uint64_t seed = 0;
    double non_spectral_floor = 1e-2; // idempotence defect a candidate must keep
    double witness_tol = 1e-8;        // residual below which the best candidate is returned
    int extra_support = 2;
    std::optional<Povm> seed_candidate;
};

struct PovmSearchResult {
    double best_residual = 0.0;
    double best_defect = 0.0;
    std::optional<Povm> witness;
    int steps_used = 0;
};

// Randomized local search over clearly-non-spectral measures (idempotence
// defect at least the floor) minimizing the moment mismatch against T for
// the given exponents. In the rigid regime the residual plateaus well above
// zero; outside it, a seeded start can reach zero and is returned as a
// witness. The floor keeps the search away from the spectral manifold, where
// "non-spectral with tiny residual" would be vacuous.
PovmSearchResult povm_perturbation_search(const NormalOperator& t, const ExponentSet& xs,
                                          const PovmSearchOptions& opts = {},
                                          const ToleranceConfig& tol = {});

} // namespace hrlab
