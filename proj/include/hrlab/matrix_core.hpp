#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "hrlab/errors.hpp"
#include "hrlab/tolerance.hpp"

namespace hrlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Normal matrix bundled with a unitary diagonalization, A = Q diag(ev) Q^*.
// Construction is gated: callers get one only when the commutator and the
// reconstruction both pass their tolerance checks.
struct NormalOperator {
    ComplexMatrix matrix;
    ComplexVector eigenvalues;
    ComplexMatrix eigenbasis;

    Eigen::Index dim() const { return matrix.rows(); }
};

// Largest singular value. The library's default norm for tolerance gates.
double op_norm(const ComplexMatrix& a);

bool is_hermitian(const ComplexMatrix& a, const ToleranceConfig& tol = {});

void require_square_finite(const ComplexMatrix& a, const char* who);

// Unitary diagonalization of a normal matrix via the commuting Hermitian
// parts: diagonalize (A+A^*)/2, then refine each eigenspace against
// (A-A^*)/2i. Eigenvalues come out sorted lexicographically by (re, im),
// so identical input bits give identical output.
NormalOperator spectral_decompose(const ComplexMatrix& a, const ToleranceConfig& tol = {});

// f applied through the eigenvalues: Q diag(f(ev)) Q^*.
ComplexMatrix func_calc(const NormalOperator& n, const std::function<Complex(Complex)>& f);

struct PolarParts {
    ComplexMatrix unitary;   // sgn'(ev) through the basis, sgn'(0) := 1
    ComplexMatrix modulus;   // |ev| through the basis
};

// Unitary polar decomposition N = U |N| with U := I on the kernel.
PolarParts polar_unitary(const NormalOperator& n);

// B^* (N^{*m} N^n) B for an isometric column frame B (K x h, orthonormal
// columns). The mixed power is evaluated through the eigenbasis.
ComplexMatrix compression_moment(const NormalOperator& n, const ComplexMatrix& basis, int m,
                                 int p, const ToleranceConfig& tol = {});

// Smallest eigenvalue of a Hermitian matrix; negative values measure how far
// the matrix is from the PSD cone.
double psd_gap(const ComplexMatrix& a, const ToleranceConfig& tol = {});

// Hermitian square root with eigenvalues clamped at zero. Roundoff can push a
// PSD matrix slightly below the cone; clamping keeps the calculus defined.
ComplexMatrix sqrt_psd(const ComplexMatrix& a, const ToleranceConfig& tol = {});

// t^s on the clamped spectrum, s in (0, 1].
ComplexMatrix pow_psd(const ComplexMatrix& a, double s, const ToleranceConfig& tol = {});

} // namespace hrlab
