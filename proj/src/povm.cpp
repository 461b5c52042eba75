#include "hrlab/povm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hrlab {

void validate_povm(const Povm& f, const ToleranceConfig& tol) {
    if (f.support.empty() || f.support.size() != f.effects.size())
        fail(ErrorCode::InvalidPovm, "povm: support and effect counts must match and be nonzero");
    const Eigen::Index d = f.dim();
    if (d == 0) fail(ErrorCode::InvalidPovm, "povm: empty effects");
    for (std::size_t i = 0; i < f.support.size(); ++i)
        for (std::size_t j = i + 1; j < f.support.size(); ++j)
            if (f.support[i] == f.support[j])
                fail(ErrorCode::InvalidPovm, "povm: support points must be pairwise distinct");
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (const auto& e : f.effects) {
        require_square_finite(e, "povm effect");
        if (e.rows() != d) fail(ErrorCode::InvalidPovm, "povm: effects must share one dimension");
        if (!is_hermitian(e, tol)) fail(ErrorCode::InvalidPovm, "povm: effect not Hermitian");
        if (psd_gap(e, tol) < -tol.gate(op_norm(e)))
            fail(ErrorCode::InvalidPovm, "povm: effect not PSD within tolerance");
        sum += e;
    }
    if (op_norm(ComplexMatrix(sum - ComplexMatrix::Identity(d, d))) > tol.gate(1.0))
        fail(ErrorCode::InvalidPovm, "povm: effects do not sum to the identity");
}

ComplexMatrix moment_operator(const Povm& f, int m, int n) {
    if (m < 0 || n < 0) fail(ErrorCode::InvalidArgument, "moment_operator: negative exponent");
    const Eigen::Index d = f.dim();
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (std::size_t j = 0; j < f.atoms(); ++j)
        out += std::pow(std::conj(f.support[j]), m) * std::pow(f.support[j], n) * f.effects[j];
    return out;
}

ComplexMatrix ucp_apply(const Povm& f, const std::function<Complex(Complex)>& g) {
    const Eigen::Index d = f.dim();
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (std::size_t j = 0; j < f.atoms(); ++j) out += g(f.support[j]) * f.effects[j];
    return out;
}

double spectrality_defect(const Povm& f) {
    double worst = 0.0;
    for (const auto& e : f.effects) worst = std::max(worst, op_norm(ComplexMatrix(e * e - e)));
    return worst;
}

bool is_spectral(const Povm& f, const ToleranceConfig& tol) {
    return spectrality_defect(f) <= tol.gate(1.0);
}

Povm spectral_measure_of(const NormalOperator& t, const ToleranceConfig& tol) {
    const Eigen::Index d = t.dim();
    const double merge = tol.abs_tol;

    // Union-find clustering at distance <= merge.
    std::vector<Eigen::Index> parent(static_cast<std::size_t>(d));
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](Eigen::Index i) {
        while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)];
        return i;
    };
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i + 1; j < d; ++j)
            if (std::abs(t.eigenvalues(i) - t.eigenvalues(j)) <= merge)
                parent[static_cast<std::size_t>(root(j))] = root(i);

    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i + 1; j < d; ++j) {
            const double dist = std::abs(t.eigenvalues(i) - t.eigenvalues(j));
            if (root(i) != root(j) && dist > merge && dist <= 10.0 * merge)
                fail(ErrorCode::ClusterAmbiguity,
                     "spectral_measure_of: eigenvalue gap " + std::to_string(dist) +
                         " falls between tol and 10*tol; refusing to guess the clustering");
        }

    Povm out;
    for (Eigen::Index i = 0; i < d; ++i) {
        if (root(i) != i) continue;
        Complex mean(0.0, 0.0);
        int count = 0;
        ComplexMatrix proj = ComplexMatrix::Zero(d, d);
        for (Eigen::Index j = 0; j < d; ++j) {
            if (root(j) != i) continue;
            mean += t.eigenvalues(j);
            ++count;
            proj += t.eigenbasis.col(j) * t.eigenbasis.col(j).adjoint();
        }
        out.support.push_back(mean / static_cast<double>(count));
        out.effects.push_back(proj);
    }
    validate_povm(out, tol);
    return out;
}

bool is_spectral_measure_of(const Povm& f, const NormalOperator& t, const ToleranceConfig& tol) {
    if (f.dim() != t.dim()) fail(ErrorCode::ShapeMismatch, "is_spectral_measure_of: dim mismatch");
    if (!is_spectral(f, tol)) return false;
    const double scale = std::max(1.0, op_norm(t.matrix));
    if (op_norm(ComplexMatrix(moment_operator(f, 0, 1) - t.matrix)) > tol.gate(scale))
        return false;
    // Support points carrying mass must be eigenvalues.
    for (std::size_t j = 0; j < f.atoms(); ++j) {
        if (op_norm(f.effects[j]) <= tol.gate(1.0)) continue;
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < t.dim(); ++i)
            best = std::min(best, std::abs(f.support[j] - t.eigenvalues(i)));
        if (best > 10.0 * tol.gate(scale)) return false;
    }
    return true;
}

Dilation naimark_dilate(const Povm& f, bool minimal, const ToleranceConfig& tol) {
    validate_povm(f, tol);
    const Eigen::Index d = f.dim();
    const Eigen::Index k = static_cast<Eigen::Index>(f.atoms());

    Dilation out;
    out.big_dim = d * k;
    out.isometry.resize(out.big_dim, d);
    out.projections.assign(static_cast<std::size_t>(k),
                           ComplexMatrix::Zero(out.big_dim, out.big_dim));
    for (Eigen::Index j = 0; j < k; ++j) {
        out.isometry.middleRows(j * d, d) = sqrt_psd(f.effects[static_cast<std::size_t>(j)], tol);
        out.projections[static_cast<std::size_t>(j)].block(j * d, j * d, d, d) =
            ComplexMatrix::Identity(d, d);
    }

    if (minimal) {
        // Keep, in each block, an orthonormal basis of the range of the
        // effect; the stacked square roots never leave that span.
        std::vector<ComplexMatrix> block_bases;
        Eigen::Index total = 0;
        for (Eigen::Index j = 0; j < k; ++j) {
            const ComplexMatrix& e = f.effects[static_cast<std::size_t>(j)];
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (e + e.adjoint()));
            if (es.info() != Eigen::Success)
                fail(ErrorCode::NoConvergence, "naimark_dilate: effect eigensolver failed");
            const double rank_tol = 1e-9 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
            std::vector<Eigen::Index> keep;
            for (Eigen::Index i = 0; i < d; ++i)
                if (es.eigenvalues()(i) > rank_tol) keep.push_back(i);
            ComplexMatrix basis(d, static_cast<Eigen::Index>(keep.size()));
            for (std::size_t i = 0; i < keep.size(); ++i)
                basis.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(keep[i]);
            total += basis.cols();
            block_bases.push_back(std::move(basis));
        }
        ComplexMatrix b = ComplexMatrix::Zero(out.big_dim, total);
        Eigen::Index col = 0;
        for (Eigen::Index j = 0; j < k; ++j) {
            const auto& basis = block_bases[static_cast<std::size_t>(j)];
            b.block(j * d, col, d, basis.cols()) = basis;
            col += basis.cols();
        }
        Dilation compressed;
        compressed.big_dim = total;
        compressed.isometry = b.adjoint() * out.isometry;
        for (const auto& e : out.projections)
            compressed.projections.push_back(b.adjoint() * e * b);
        out = std::move(compressed);
    }

    ComplexMatrix nmat = ComplexMatrix::Zero(out.big_dim, out.big_dim);
    for (std::size_t j = 0; j < f.atoms(); ++j) nmat += f.support[j] * out.projections[j];
    out.normal = spectral_decompose(nmat, tol);
    out.projection_p = out.isometry * out.isometry.adjoint();

    const double viso = op_norm(ComplexMatrix(out.isometry.adjoint() * out.isometry -
                                              ComplexMatrix::Identity(d, d)));
    if (viso > tol.gate(1.0))
        fail(ErrorCode::NoConvergence, "naimark_dilate: V lost isometry, residual " +
                                           std::to_string(viso));
    for (std::size_t j = 0; j < f.atoms(); ++j) {
        const double res = op_norm(ComplexMatrix(
            out.isometry.adjoint() * out.projections[j] * out.isometry - f.effects[j]));
        if (res > tol.gate(1.0))
            fail(ErrorCode::NoConvergence,
                 "naimark_dilate: effect transport residual " + std::to_string(res));
    }
    return out;
}

} // namespace hrlab
