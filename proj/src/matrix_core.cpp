#include "hrlab/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace hrlab {

double op_norm(const ComplexMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    return a.jacobiSvd().singularValues()(0);
}

void require_square_finite(const ComplexMatrix& a, const char* who) {
    if (a.rows() != a.cols())
        fail(ErrorCode::InvalidArgument, std::string(who) + ": matrix must be square");
    if (!a.allFinite())
        fail(ErrorCode::InvalidArgument, std::string(who) + ": matrix has non-finite entries");
}

bool is_hermitian(const ComplexMatrix& a, const ToleranceConfig& tol) {
    return op_norm(ComplexMatrix(a - a.adjoint())) <= tol.gate(op_norm(a));
}

namespace {

// Cluster threshold for the first-stage Hermitian spectrum. Chosen well above
// eigensolver noise and well below the reconstruction gate, so over-merging
// costs less accuracy than the contract allows and under-merging cannot split
// a numerically degenerate eigenspace.
double cluster_width(double scale) { return 1e-11 * std::max(1.0, scale); }

} // namespace

NormalOperator spectral_decompose(const ComplexMatrix& a, const ToleranceConfig& tol) {
    require_square_finite(a, "spectral_decompose");
    const Eigen::Index d = a.rows();
    const double scale = op_norm(a);

    const ComplexMatrix comm = a * a.adjoint() - a.adjoint() * a;
    if (op_norm(comm) > tol.gate(scale * scale))
        fail(ErrorCode::NotNormal, "spectral_decompose: commutator norm " +
                                       std::to_string(op_norm(comm)) + " exceeds gate");

    const ComplexMatrix h1 = 0.5 * (a + a.adjoint());
    const ComplexMatrix h2 = (a - a.adjoint()) / Complex(0.0, 2.0);

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es1(h1);
    if (es1.info() != Eigen::Success)
        fail(ErrorCode::NoConvergence, "spectral_decompose: stage-1 eigensolver failed");

    ComplexMatrix q = es1.eigenvectors();
    const Eigen::VectorXd ev1 = es1.eigenvalues();

    // Second stage: within each near-degenerate block of h1, diagonalize the
    // compression of h2 and rotate the basis accordingly.
    const double width = cluster_width(scale);
    Eigen::Index lo = 0;
    while (lo < d) {
        Eigen::Index hi = lo + 1;
        while (hi < d && ev1(hi) - ev1(hi - 1) <= width) ++hi;
        if (hi - lo > 1) {
            const ComplexMatrix qc = q.middleCols(lo, hi - lo);
            const ComplexMatrix block = qc.adjoint() * h2 * qc;
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> es2(block);
            if (es2.info() != Eigen::Success)
                fail(ErrorCode::NoConvergence, "spectral_decompose: stage-2 eigensolver failed");
            q.middleCols(lo, hi - lo) = qc * es2.eigenvectors();
        }
        lo = hi;
    }

    // Rayleigh quotients give the eigenvalues to full accuracy for both parts.
    ComplexVector evals(d);
    for (Eigen::Index i = 0; i < d; ++i) evals(i) = q.col(i).dot(a * q.col(i));

    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        if (evals(i).real() != evals(j).real()) return evals(i).real() < evals(j).real();
        return evals(i).imag() < evals(j).imag();
    });

    NormalOperator out;
    out.matrix = a;
    out.eigenvalues.resize(d);
    out.eigenbasis.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        out.eigenvalues(i) = evals(order[static_cast<std::size_t>(i)]);
        out.eigenbasis.col(i) = q.col(order[static_cast<std::size_t>(i)]);
    }

    const double recon =
        op_norm(a - out.eigenbasis * out.eigenvalues.asDiagonal() * out.eigenbasis.adjoint());
    if (recon > tol.gate(scale))
        fail(ErrorCode::NoConvergence,
             "spectral_decompose: reconstruction residual " + std::to_string(recon));
    if (op_norm(ComplexMatrix(out.eigenbasis.adjoint() * out.eigenbasis -
                              ComplexMatrix::Identity(d, d))) > tol.gate(1.0))
        fail(ErrorCode::NoConvergence, "spectral_decompose: basis lost orthonormality");
    return out;
}

ComplexMatrix func_calc(const NormalOperator& n, const std::function<Complex(Complex)>& f) {
    const Eigen::Index d = n.dim();
    ComplexVector fe(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const Complex v = f(n.eigenvalues(i));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            fail(ErrorCode::DomainError, "func_calc: function not finite on the spectrum");
        fe(i) = v;
    }
    return n.eigenbasis * fe.asDiagonal() * n.eigenbasis.adjoint();
}

PolarParts polar_unitary(const NormalOperator& n) {
    PolarParts out;
    out.unitary = func_calc(n, [](Complex z) {
        const double r = std::abs(z);
        return r == 0.0 ? Complex(1.0, 0.0) : z / r;
    });
    out.modulus = func_calc(n, [](Complex z) { return Complex(std::abs(z), 0.0); });
    return out;
}

ComplexMatrix compression_moment(const NormalOperator& n, const ComplexMatrix& basis, int m,
                                 int p, const ToleranceConfig& tol) {
    if (basis.rows() != n.dim())
        fail(ErrorCode::ShapeMismatch, "compression_moment: frame rows must match operator dim");
    if (m < 0 || p < 0) fail(ErrorCode::InvalidArgument, "compression_moment: negative exponent");
    const ComplexMatrix gram = basis.adjoint() * basis;
    if (op_norm(ComplexMatrix(gram - ComplexMatrix::Identity(basis.cols(), basis.cols()))) >
        tol.gate(1.0))
        fail(ErrorCode::NotOrthonormal, "compression_moment: frame columns not orthonormal");
    const ComplexMatrix mixed = func_calc(
        n, [&](Complex z) { return std::pow(std::conj(z), m) * std::pow(z, p); });
    return basis.adjoint() * mixed * basis;
}

double psd_gap(const ComplexMatrix& a, const ToleranceConfig& tol) {
    require_square_finite(a, "psd_gap");
    if (!is_hermitian(a, tol))
        fail(ErrorCode::NotHermitian, "psd_gap: matrix is not Hermitian within tolerance");
    if (a.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (a + a.adjoint()));
    if (es.info() != Eigen::Success) fail(ErrorCode::NoConvergence, "psd_gap: eigensolver failed");
    return es.eigenvalues().minCoeff();
}

namespace {

ComplexMatrix clamped_power(const ComplexMatrix& a, double s, const ToleranceConfig& tol) {
    require_square_finite(a, "pow_psd");
    if (!is_hermitian(a, tol)) fail(ErrorCode::NotHermitian, "pow_psd: input not Hermitian");
    const double scale = op_norm(a);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (a + a.adjoint()));
    if (es.info() != Eigen::Success) fail(ErrorCode::NoConvergence, "pow_psd: eigensolver failed");
    const double floor = -tol.gate(scale);
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < floor)
            fail(ErrorCode::DomainError, "pow_psd: eigenvalue " + std::to_string(ev(i)) +
                                             " is negative beyond tolerance");
        ev(i) = std::pow(std::max(ev(i), 0.0), s);
    }
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace

ComplexMatrix sqrt_psd(const ComplexMatrix& a, const ToleranceConfig& tol) {
    return clamped_power(a, 0.5, tol);
}

ComplexMatrix pow_psd(const ComplexMatrix& a, double s, const ToleranceConfig& tol) {
    if (!(s > 0.0 && s <= 1.0))
        fail(ErrorCode::InvalidArgument, "pow_psd: exponent must lie in (0, 1]");
    return clamped_power(a, s, tol);
}

} // namespace hrlab
