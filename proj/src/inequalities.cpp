#include "hrlab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace hrlab {

namespace {

ComplexMatrix matrix_power(const ComplexMatrix& a, int k) {
    ComplexMatrix out = ComplexMatrix::Identity(a.rows(), a.cols());
    for (int i = 0; i < k; ++i) out = out * a;
    return out;
}

ComplexMatrix mixed_power(const ComplexMatrix& t, int m, int n) {
    return matrix_power(t.adjoint(), m) * matrix_power(t, n);
}

} // namespace

HansenReport hansen_check(const ComplexMatrix& a, const ComplexMatrix& t, double s,
                          const ToleranceConfig& tol, double eq_tol, double ineq_tol) {
    require_square_finite(a, "hansen_check A");
    require_square_finite(t, "hansen_check T");
    if (a.rows() != t.rows()) fail(ErrorCode::ShapeMismatch, "hansen_check: dimension mismatch");
    if (!(s > 0.0 && s < 1.0))
        fail(ErrorCode::InvalidArgument, "hansen_check: exponent must lie in (0, 1)");
    const double tnorm = op_norm(t);
    if (tnorm > 1.0 + tol.gate(1.0))
        fail(ErrorCode::NotContraction, "hansen_check: ||T|| = " + std::to_string(tnorm));
    if (!is_hermitian(a, tol) || psd_gap(a, tol) < -tol.gate(op_norm(a)))
        fail(ErrorCode::NotPsd, "hansen_check: A is not PSD within tolerance");

    const ComplexMatrix inner = t.adjoint() * a * t;
    const ComplexMatrix lhs = pow_psd(0.5 * (inner + inner.adjoint()), s, tol);
    const ComplexMatrix rhs = t.adjoint() * pow_psd(a, s, tol) * t;
    const ComplexMatrix diff = lhs - rhs;

    HansenReport out;
    out.diff_norm = op_norm(diff);
    const double scale = std::max(1.0, std::pow(op_norm(a), s));
    out.gap = psd_gap(ComplexMatrix(0.5 * (diff + diff.adjoint())),
                      ToleranceConfig::uniform(ineq_tol));
    out.equality = out.diff_norm <= eq_tol * scale;
    return out;
}

LiebRuskaiReport lieb_ruskai_check(const ComplexMatrix& r, const ComplexMatrix& a,
                                   const ComplexMatrix& b,
                                   const std::vector<double>& eps_schedule,
                                   const ToleranceConfig& tol) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows() ||
        r.rows() != a.rows())
        fail(ErrorCode::ShapeMismatch, "lieb_ruskai_check: incompatible shapes");
    if (eps_schedule.empty() || !(eps_schedule.back() > 0.0))
        fail(ErrorCode::InvalidArgument, "lieb_ruskai_check: schedule must be positive");
    for (std::size_t i = 0; i + 1 < eps_schedule.size(); ++i)
        if (!(eps_schedule[i] > eps_schedule[i + 1]))
            fail(ErrorCode::InvalidArgument,
                 "lieb_ruskai_check: schedule must be strictly decreasing");

    const Eigen::Index k = r.cols();
    auto phi = [&](const ComplexMatrix& x) { return ComplexMatrix(r.adjoint() * x * r); };
    const ComplexMatrix gaa = phi(a.adjoint() * a);
    const ComplexMatrix gab = phi(a.adjoint() * b);
    const ComplexMatrix gbb = phi(b.adjoint() * b);

    // Eight deterministic probe vectors: coordinate, flat, alternating, and a
    // fixed congruential fill. Same bits on every run.
    std::vector<ComplexVector> probes;
    for (int v = 0; v < 8; ++v) {
        ComplexVector u = ComplexVector::Zero(k);
        if (v < 3)
            u(std::min<Eigen::Index>(v, k - 1)) = 1.0;
        else if (v == 3)
            u.setOnes();
        else if (v == 4)
            for (Eigen::Index i = 0; i < k; ++i) u(i) = (i % 2 == 0) ? 1.0 : -1.0;
        else {
            std::uint64_t state = 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(v + 1);
            for (Eigen::Index i = 0; i < k; ++i) {
                state = state * 6364136223846793005ull + 1442695040888963407ull;
                const double re = static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
                state = state * 6364136223846793005ull + 1442695040888963407ull;
                const double im = static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
                u(i) = Complex(re, im);
            }
        }
        if (u.norm() > 0.0) u /= u.norm();
        probes.push_back(u);
    }

    LiebRuskaiReport out;
    std::vector<std::vector<double>> forms(probes.size());
    for (double eps : eps_schedule) {
        const ComplexMatrix reg = gbb + eps * ComplexMatrix::Identity(k, k);
        const ComplexMatrix inner = gab * reg.ldlt().solve(gab.adjoint());
        const ComplexMatrix diff = gaa - inner;
        out.gaps.push_back(psd_gap(ComplexMatrix(0.5 * (diff + diff.adjoint())), tol));
        for (std::size_t v = 0; v < probes.size(); ++v)
            forms[v].push_back(std::real(probes[v].dot(inner * probes[v])));
    }
    out.final_gap = out.gaps.back();

    const double slack = tol.gate(std::max(1.0, op_norm(gaa)));
    for (const auto& f : forms)
        for (std::size_t i = 0; i + 1 < f.size(); ++i)
            out.monotone = out.monotone && f[i + 1] >= f[i] - slack;
    return out;
}

CommutationVerdict projection_commutation_check(const ComplexMatrix& t, const ComplexMatrix& p,
                                                const std::optional<Biexponent>& pq,
                                                const ToleranceConfig& tol) {
    require_square_finite(t, "projection_commutation_check T");
    require_square_finite(p, "projection_commutation_check P");
    if (t.rows() != p.rows())
        fail(ErrorCode::ShapeMismatch, "projection_commutation_check: dimension mismatch");
    if (op_norm(ComplexMatrix(p * p - p)) > tol.gate(1.0) || !is_hermitian(p, tol))
        fail(ErrorCode::NotProjection,
             "projection_commutation_check: P is not an orthogonal projection");

    CommutationVerdict out;
    const Eigen::Index d = t.rows();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    const double tn = std::max(1.0, op_norm(t));

    const ComplexMatrix ptp = p * t * p;
    const ComplexMatrix pt_adj_p = p * t.adjoint() * p;
    const double r1a = op_norm(ComplexMatrix(pt_adj_p * ptp - p * t.adjoint() * t * p));
    const double r1b = op_norm(ComplexMatrix(ptp * pt_adj_p - p * t * t.adjoint() * p));
    out.residuals["rudec_i"] = std::max(r1a, r1b);
    out.conditions["rudec_i"] = std::max(r1a, r1b) <= tol.gate(tn * tn);

    const double r2 = op_norm(ComplexMatrix(p * t - t * p));
    out.residuals["rudec_ii"] = r2;
    out.conditions["rudec_ii"] = r2 <= tol.gate(tn);

    const double r3 = std::max(op_norm(ComplexMatrix((id - p) * t * p)),
                               op_norm(ComplexMatrix(p * t * (id - p))));
    out.residuals["rudec_iii"] = r3;
    out.conditions["rudec_iii"] = r3 <= tol.gate(tn);

    const bool t_normal =
        op_norm(ComplexMatrix(t * t.adjoint() - t.adjoint() * t)) <= tol.gate(tn * tn);
    const bool ptp_normal =
        op_norm(ComplexMatrix(ptp * ptp.adjoint() - ptp.adjoint() * ptp)) <= tol.gate(tn * tn);
    if (t_normal && ptp_normal) {
        out.residuals["rudec_iv"] = r1a;
        out.conditions["rudec_iv"] = r1a <= tol.gate(tn * tn);
    }

    if (pq) {
        const auto [pe, qe] = *pq;
        if (pe == 0 && qe == 0)
            fail(ErrorCode::InvalidArgument, "projection_commutation_check: (0,0) has no content");
        if (!t_normal)
            fail(ErrorCode::NotNormal,
                 "projection_commutation_check: biexponent chain needs a normal operator");
        const NormalOperator nop = spectral_decompose(t, tol);
        const int diff = std::abs(qe - pe);
        const double power_scale = std::max(1.0, std::pow(tn, pe + qe));

        const ComplexMatrix mixed = mixed_power(t, pe, qe);
        const double ri = op_norm(ComplexMatrix(p * mixed - mixed * p));
        out.residuals["npq_i"] = ri;
        out.conditions["npq_i"] = ri <= tol.gate(power_scale);

        const PolarParts polar = polar_unitary(nop);
        const double r_abs = op_norm(ComplexMatrix(p * polar.modulus - polar.modulus * p));
        const ComplexMatrix ud = matrix_power(polar.unitary, diff);
        const double r_u = op_norm(ComplexMatrix(p * ud - ud * p));
        out.residuals["npq_ii_modulus"] = r_abs;
        out.residuals["npq_ii_unitary"] = r_u;
        out.conditions["npq_ii"] = r_abs <= tol.gate(tn) && r_u <= tol.gate(1.0);

        if (diff > 0) {
            // Same-difference representatives stand in for the full family.
            double riii = 0.0;
            for (const Biexponent& rep :
                 {Biexponent{0, diff}, Biexponent{diff, 0}, Biexponent{1, 1 + diff},
                  Biexponent{2, 2 + diff}}) {
                const ComplexMatrix g = mixed_power(t, rep.first, rep.second);
                riii = std::max(riii, op_norm(ComplexMatrix(p * g - g * p)) /
                                          std::max(1.0, std::pow(tn, rep.first + rep.second)));
            }
            out.residuals["npq_iii"] = riii;
            out.conditions["npq_iii"] = riii <= tol.gate(1.0);

            const ComplexMatrix nd = matrix_power(t, diff);
            const double riv = op_norm(ComplexMatrix(p * nd - nd * p));
            out.residuals["npq_iv"] = riv;
            out.conditions["npq_iv"] = riv <= tol.gate(std::max(1.0, std::pow(tn, diff)));
        }
    }

    bool first = true;
    bool ref = false;
    for (const auto& [label, value] : out.conditions) {
        if (first) {
            ref = value;
            first = false;
        }
        out.equivalent = out.equivalent && value == ref;
    }
    return out;
}

Main1Report main1_verify(const NormalOperator& n, const ComplexMatrix& basis,
                         const ComplexMatrix& t, const ExponentSet& xs,
                         const ToleranceConfig& tol) {
    require_square_finite(t, "main1_verify T");
    if (basis.rows() != n.dim() || basis.cols() != t.rows())
        fail(ErrorCode::ShapeMismatch, "main1_verify: frame shape mismatch");
    if (!sigma_condition(xs))
        fail(ErrorCode::SigmaViolation,
             "main1_verify: exponent set has no (p,q),(r,r) witness with p+q < 2r");

    Main1Report out;
    const double nn = std::max(1.0, op_norm(n.matrix));
    int maxdeg = 0;
    for (const auto& [m, q] : xs) {
        const ComplexMatrix lhs = mixed_power(t, m, q);
        const ComplexMatrix rhs = compression_moment(n, basis, m, q, tol);
        const double res = op_norm(ComplexMatrix(lhs - rhs));
        out.worst_hypothesis_residual = std::max(out.worst_hypothesis_residual, res);
        if (res > tol.gate(std::pow(nn, m + q))) out.hypothesis_met = false;
        maxdeg = std::max(maxdeg, std::max(m, q));
    }
    if (!out.hypothesis_met) return out;

    out.conclusions_hold = true;
    for (int k = 1; k <= maxdeg + 2; ++k) {
        const ComplexMatrix lhs = mixed_power(t, k, k);
        const ComplexMatrix rhs = compression_moment(n, basis, k, k, tol);
        const double res = op_norm(ComplexMatrix(lhs - rhs));
        out.diagonal_residuals.emplace_back(k, res);
        out.conclusions_hold =
            out.conclusions_hold && res <= tol.gate(std::pow(nn, 2 * k));
    }

    out.d = gcd_diffs(xs);
    const ComplexMatrix p = basis * basis.adjoint();
    const ComplexMatrix nd = func_calc(n, [&](Complex z) {
        return std::pow(z, out.d);
    });
    out.commute_power_residual = op_norm(ComplexMatrix(p * nd - nd * p));
    const PolarParts polar = polar_unitary(n);
    out.commute_modulus_residual =
        op_norm(ComplexMatrix(p * polar.modulus - polar.modulus * p));

    const double ker_tol = tol.gate(nn);
    const ComplexMatrix pker = func_calc(n, [&](Complex z) {
        return std::abs(z) <= ker_tol ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
    });
    out.kernel_split_residual = op_norm(ComplexMatrix(p * pker - pker * p));

    out.conclusions_hold = out.conclusions_hold &&
                           out.commute_power_residual <= tol.gate(std::pow(nn, out.d)) &&
                           out.commute_modulus_residual <= tol.gate(nn) &&
                           out.kernel_split_residual <= tol.gate(1.0);
    return out;
}

} // namespace hrlab
