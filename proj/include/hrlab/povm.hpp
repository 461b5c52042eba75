#pragma once

#include <vector>

#include "hrlab/matrix_core.hpp"

namespace hrlab {

// Finitely supported positive operator-valued measure: distinct support
// points z_j with PSD effects summing to the identity.
struct Povm {
    std::vector<Complex> support;
    std::vector<ComplexMatrix> effects;

    Eigen::Index dim() const { return effects.empty() ? 0 : effects.front().rows(); }
    std::size_t atoms() const { return support.size(); }
};

void validate_povm(const Povm& f, const ToleranceConfig& tol = {});

// sum_j conj(z_j)^m z_j^n F_j.
ComplexMatrix moment_operator(const Povm& f, int m, int n);

// sum_j g(z_j) F_j, the unital completely positive image of g.
ComplexMatrix ucp_apply(const Povm& f, const std::function<Complex(Complex)>& g);

// Spectral means every effect is idempotent. With effects summing to the
// identity this forces mutually orthogonal projections.
bool is_spectral(const Povm& f, const ToleranceConfig& tol = {});

// Largest idempotence defect max_j ||F_j^2 - F_j||.
double spectrality_defect(const Povm& f);

// Projection-valued measure of a normal matrix, by clustering its
// eigenvalues at distance <= tol.abs. Refuses with ClusterAmbiguity when two
// eigenvalues sit in the dead zone (tol, 10 tol]: close enough to doubt the
// split, too far to merge silently.
Povm spectral_measure_of(const NormalOperator& t, const ToleranceConfig& tol = {});

bool is_spectral_measure_of(const Povm& f, const NormalOperator& t,
                            const ToleranceConfig& tol = {});

// Block-form dilation: V stacks the effect square roots, the E_j are the
// block coordinate projections, and N = sum z_j E_j. Invariants
// V^* V = I and V^* E_j V = F_j hold by construction and are re-checked.
struct Dilation {
    Eigen::Index big_dim = 0;
    ComplexMatrix isometry;                  // big_dim x dim
    std::vector<ComplexMatrix> projections;  // big_dim x big_dim
    NormalOperator normal;                   // sum z_j E_j
    ComplexMatrix projection_p;              // V V^*
};

// minimal = true compresses the big space to span{E_j V h}; for a spectral
// measure this brings the dilation back down to the original dimension.
Dilation naimark_dilate(const Povm& f, bool minimal = false, const ToleranceConfig& tol = {});

} // namespace hrlab
