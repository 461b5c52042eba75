#include "hrlab/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <tuple>

#include "hrlab/exponents.hpp"
#include "hrlab/rng.hpp"

namespace hrlab {

namespace {

void require_config(const SequenceConfig& cfg) {
    if (cfg.h_dim < 1 || cfg.tail_dim < 0)
        fail(ErrorCode::InvalidArgument, "sequence config: need h_dim >= 1 and tail_dim >= 0");
    if (cfg.n.dim() != cfg.h_dim + cfg.tail_dim)
        fail(ErrorCode::InvalidArgument, "sequence config: N must act on h_dim + tail_dim");
    if (cfg.n_max < 0) fail(ErrorCode::InvalidArgument, "sequence config: n_max must be >= 0");
}

int tail_degree(const SequenceConfig& cfg, const ComplexVector& v) {
    int deg = 0;
    for (Eigen::Index i = cfg.h_dim; i < v.size(); ++i)
        if (std::abs(v(i)) > 0.0) deg = static_cast<int>(i - cfg.h_dim) + 1;
    return deg;
}

} // namespace

ComplexMatrix shift_power(const SequenceConfig& cfg, int n) {
    require_config(cfg);
    if (n < 0) fail(ErrorCode::InvalidArgument, "shift_power: negative step");
    const Eigen::Index k = cfg.h_dim + cfg.tail_dim;
    ComplexMatrix v = ComplexMatrix::Zero(k, k);
    v.topLeftCorner(cfg.h_dim, cfg.h_dim) = ComplexMatrix::Identity(cfg.h_dim, cfg.h_dim);
    for (Eigen::Index i = 0; i + n < cfg.tail_dim; ++i)
        v(cfg.h_dim + i + n, cfg.h_dim + i) = 1.0;
    return v;
}

ComplexMatrix build_sequence(const SequenceConfig& cfg, int n) {
    require_config(cfg);
    if (n < 0 || n > cfg.n_max)
        fail(ErrorCode::IndexOverflow,
             "build_sequence: step " + std::to_string(n) + " outside [0, n_max]");
    const Eigen::Index k = cfg.h_dim + cfg.tail_dim;
    const ComplexMatrix vn = shift_power(cfg, n);
    const ComplexMatrix range_proj = vn * vn.adjoint();
    return vn * cfg.n.matrix * vn.adjoint() +
           cfg.lambda * (ComplexMatrix::Identity(k, k) - range_proj);
}

std::vector<Probe> default_probes(const SequenceConfig& cfg) {
    require_config(cfg);
    if (cfg.tail_dim < 5)
        fail(ErrorCode::InvalidArgument, "default_probes: tail must have at least 5 slots");
    const Eigen::Index k = cfg.h_dim + cfg.tail_dim;
    auto basis = [&](Eigen::Index i) {
        ComplexVector e = ComplexVector::Zero(k);
        e(i) = 1.0;
        return e;
    };
    const ComplexVector h0 = basis(0);
    const ComplexVector h1 = cfg.h_dim >= 2 ? basis(1) : basis(cfg.h_dim + 2);
    const ComplexVector t0 = basis(cfg.h_dim);
    const ComplexVector t1 = basis(cfg.h_dim + 1);
    const ComplexVector t2 = basis(cfg.h_dim + 2);
    const ComplexVector t3 = basis(cfg.h_dim + 3);
    const ComplexVector mix_plus = (h0 + t0) / std::sqrt(2.0);
    const ComplexVector mix_minus = (h0 - t0) / std::sqrt(2.0);
    const ComplexVector mix_i = (h0 + Complex(0.0, 1.0) * t0) / std::sqrt(2.0);
    const ComplexVector flat = (h0 + t0 + t1 + t2) / 2.0;

    std::vector<std::tuple<std::string, ComplexVector, ComplexVector>> raw = {
        {"h0/h0", h0, h0},           {"h1/h1", h1, h1},
        {"t0/t0", t0, t0},           {"t1/t1", t1, t1},
        {"t3/t3", t3, t3},           {"h0/t0", h0, t0},
        {"t0/h0", t0, h0},           {"h0/t1", h0, t1},
        {"mix+/mix+", mix_plus, mix_plus},
        {"mix-/mix-", mix_minus, mix_minus},
        {"mixi/mixi", mix_i, mix_i}, {"flat/flat", flat, flat},
    };
    std::vector<Probe> probes;
    for (auto& [label, u, v] : raw) {
        Probe p;
        p.label = label;
        p.u = u;
        p.v = v;
        p.degree = std::max(tail_degree(cfg, u), tail_degree(cfg, v));
        probes.push_back(std::move(p));
    }
    return probes;
}

StepFunctional monomial_functional(int m, int n) {
    StepFunctional out;
    out.label = "zbar^" + std::to_string(m) + " z^" + std::to_string(n);
    out.f = [m, n](Complex z) { return std::pow(std::conj(z), m) * std::pow(z, n); };
    return out;
}

ConvergenceReport convergence_gaps(const SequenceConfig& cfg,
                                   const std::vector<StepFunctional>& fs,
                                   const std::vector<Probe>& probes,
                                   const std::optional<ComplexMatrix>& comparison,
                                   const ToleranceConfig& tol) {
    require_config(cfg);
    if (fs.empty() || probes.empty())
        fail(ErrorCode::InvalidArgument, "convergence_gaps: need functionals and probes");
    const Eigen::Index k = cfg.h_dim + cfg.tail_dim;

    for (const auto& p : probes) {
        if (p.u.size() != k || p.v.size() != k)
            fail(ErrorCode::ShapeMismatch, "convergence_gaps: probe dimension mismatch");
        if (std::abs(p.u.norm() - 1.0) > tol.gate(1.0) || std::abs(p.v.norm() - 1.0) > tol.gate(1.0))
            fail(ErrorCode::InvalidArgument, "convergence_gaps: probes must be unit vectors");
        const int deg = std::max(tail_degree(cfg, p.u), tail_degree(cfg, p.v));
        if (cfg.tail_dim < cfg.n_max + deg + 1)
            fail(ErrorCode::ProbeUnsafe,
                 "convergence_gaps: probe '" + p.label + "' of degree " + std::to_string(deg) +
                     " can reach the truncation edge within n_max steps");
    }

    ComplexMatrix cmp;
    if (comparison) {
        cmp = *comparison;
        require_square_finite(cmp, "convergence_gaps comparison");
        if (cmp.rows() != k)
            fail(ErrorCode::ShapeMismatch, "convergence_gaps: comparison dimension mismatch");
    } else {
        cmp = cfg.lambda * ComplexMatrix::Identity(k, k);
        cmp.topLeftCorner(cfg.h_dim, cfg.h_dim) =
            cfg.n.matrix.topLeftCorner(cfg.h_dim, cfg.h_dim);
    }
    const NormalOperator cmp_op = spectral_decompose(cmp, tol);

    std::vector<ComplexMatrix> f_cmp;
    for (const auto& sf : fs) f_cmp.push_back(func_calc(cmp_op, sf.f));

    ConvergenceReport report;
    report.comparison_norm = op_norm(cmp);

    // pairings[f][probe][n]
    std::vector<std::vector<std::vector<Complex>>> pairings(
        fs.size(), std::vector<std::vector<Complex>>(probes.size()));
    std::vector<std::vector<double>> strong(fs.size()), weak(fs.size()), leak_per_n;

    for (int n = 0; n <= cfg.n_max; ++n) {
        const ComplexMatrix vn = shift_power(cfg, n);
        const ComplexMatrix range_proj = vn * vn.adjoint();
        const ComplexMatrix rest = ComplexMatrix::Identity(k, k) - range_proj;
        const Eigen::Index core = cfg.h_dim + cfg.tail_dim - n;

        double leak = 0.0;
        if (core < k) {
            leak = std::max(op_norm(ComplexMatrix(
                                cfg.n.matrix.bottomLeftCorner(k - core, core))),
                            op_norm(ComplexMatrix(
                                cfg.n.matrix.topRightCorner(core, k - core))));
        }
        NormalOperator core_op;
        try {
            core_op = spectral_decompose(cfg.n.matrix.topLeftCorner(core, core), tol);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NotNormal)
                fail(ErrorCode::NotNormal,
                     "convergence_gaps: compression at step " + std::to_string(n) +
                         " lost normality (edge leak " + std::to_string(leak) + ")");
            throw;
        }

        const ComplexMatrix tn = build_sequence(cfg, n);
        report.seq_norm_max = std::max(report.seq_norm_max, op_norm(tn));

        for (const auto& p : probes) {
            const ComplexVector lhs_vec = tn * p.u - cmp * p.u;
            const double lhs = lhs_vec.squaredNorm();
            const double rhs =
                std::real(p.u.dot((tn.adjoint() * tn) * p.u)) -
                2.0 * std::real(p.u.dot(cmp.adjoint() * (tn * p.u))) +
                std::real(p.u.dot((cmp.adjoint() * cmp) * p.u));
            report.identity_residual =
                std::max(report.identity_residual, std::abs(lhs - rhs));
        }

        for (std::size_t fi = 0; fi < fs.size(); ++fi) {
            const ComplexMatrix fc = func_calc(core_op, fs[fi].f);
            ComplexMatrix embedded = ComplexMatrix::Zero(k, k);
            embedded.topLeftCorner(core, core) = fc;
            const Complex f_lambda = fs[fi].f(cfg.lambda);
            const ComplexMatrix ftn = vn * embedded * vn.adjoint() + f_lambda * rest;
            const ComplexMatrix delta = ftn - f_cmp[fi];

            double wg = 0.0, sg = 0.0;
            for (std::size_t pi = 0; pi < probes.size(); ++pi) {
                const Complex pairing = probes[pi].v.dot(delta * probes[pi].u);
                pairings[fi][pi].push_back(probes[pi].v.dot(ftn * probes[pi].u));
                wg = std::max(wg, std::abs(pairing));
            }
            for (const auto& p : probes) sg = std::max(sg, (delta * p.u).norm());
            weak[fi].push_back(wg);
            strong[fi].push_back(sg);
        }
        leak_per_n.push_back({leak});
    }

    for (std::size_t fi = 0; fi < fs.size(); ++fi) {
        for (int n = 0; n <= cfg.n_max; ++n) {
            ConvergenceRow row;
            row.f_label = fs[fi].label;
            row.n = n;
            row.weak_gap = weak[fi][static_cast<std::size_t>(n)];
            row.strong_gap = strong[fi][static_cast<std::size_t>(n)];
            double shift = 0.0;
            for (std::size_t pi = 0; pi < probes.size(); ++pi)
                shift = std::max(shift,
                                 std::abs(pairings[fi][pi][static_cast<std::size_t>(n)] -
                                          pairings[fi][pi][static_cast<std::size_t>(cfg.n_max)]));
            row.weak_shift = shift;
            row.discarded_norm = leak_per_n[static_cast<std::size_t>(n)][0];
            report.rows.push_back(std::move(row));
        }
    }

    double spectral_radius = 0.0;
    for (Eigen::Index i = 0; i < cmp_op.dim(); ++i)
        spectral_radius = std::max(spectral_radius, std::abs(cmp_op.eigenvalues(i)));
    const double bound = report.seq_norm_max + tol.gate(report.seq_norm_max);
    report.norm_bound_ok = report.comparison_norm <= bound && spectral_radius <= bound;
    return report;
}

Main2Report main2_experiment(const PointSet& x, const MonomialSpace& m,
                             const ExactPoint& lambda0, const ExactPoint& lambda, int padding,
                             int n_max, const std::vector<Biexponent>& mismatch_candidates,
                             const ToleranceConfig& tol) {
    if (padding < 1) fail(ErrorCode::InvalidArgument, "main2_experiment: padding must be >= 1");
    if (!contains_point(x, lambda))
        fail(ErrorCode::InvalidArgument, "main2_experiment: lambda must be a point of X");

    const BoundaryResult boundary = boundary_membership(x, m, lambda0);
    if (boundary.in_boundary)
        fail(ErrorCode::BoundaryPoint,
             "main2_experiment: lambda0 is an extreme point, no spread-out witness exists");

    Main2Report out;
    out.witness = boundary.witness;
    out.lambda0 = lambda0.to_complex();
    out.lambda = lambda.to_complex();

    // Scalar witness measure as a rank-one-per-atom measure on H = C.
    Povm f;
    for (const auto& [pt, w] : boundary.witness.atoms) {
        if (w <= 0.0) continue;
        f.support.push_back(pt.to_complex());
        f.effects.push_back(ComplexMatrix::Constant(1, 1, Complex(w, 0.0)));
    }
    const Dilation dil = naimark_dilate(f, false, tol);
    const Eigen::Index kd = dil.big_dim;

    // Rotate the dilation so H sits in the first coordinate.
    ComplexMatrix w_rot = ComplexMatrix::Identity(kd, kd);
    {
        ComplexVector v = dil.isometry.col(0);
        ComplexVector e0 = ComplexVector::Zero(kd);
        e0(0) = 1.0;
        const ComplexVector diff = v - e0;
        if (diff.norm() > 1e-14)
            w_rot -= (2.0 / diff.squaredNorm()) * (diff * diff.adjoint());
    }
    const ComplexMatrix n_core = w_rot * dil.normal.matrix * w_rot.adjoint();

    SequenceConfig cfg;
    cfg.h_dim = 1;
    cfg.tail_dim = (kd - 1) + padding;
    cfg.lambda = lambda.to_complex();
    const Eigen::Index k = cfg.h_dim + cfg.tail_dim;
    ComplexMatrix n_full = cfg.lambda * ComplexMatrix::Identity(k, k);
    n_full.topLeftCorner(kd, kd) = n_core;
    cfg.n = spectral_decompose(n_full, tol);

    // The stationary range [probe degree, n_max] drives every flag; keep it
    // nonempty by demanding enough tail room on both sides.
    const int max_probe_degree = 4;
    const int n_cap = static_cast<int>(cfg.tail_dim) - max_probe_degree - 1;
    if (n_cap < max_probe_degree)
        fail(ErrorCode::InvalidArgument,
             "main2_experiment: padding too small for the default probe family, need tail >= " +
                 std::to_string(2 * max_probe_degree + 1));
    if (n_max > 0 && n_max < max_probe_degree)
        fail(ErrorCode::InvalidArgument,
             "main2_experiment: n_max below the largest probe degree leaves no stationary range");
    cfg.n_max = (n_max > 0) ? std::min(n_max, n_cap) : n_cap;
    out.n_max = cfg.n_max;

    ComplexMatrix cmp = cfg.lambda * ComplexMatrix::Identity(k, k);
    cmp(0, 0) = lambda0.to_complex();

    // Functional dictionary: all low-degree monomials plus M plus the
    // mismatch candidates, deduplicated.
    std::vector<Biexponent> dict = {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 2},
                                    {2, 0}, {1, 2}, {2, 1}, {2, 2}};
    for (const auto& mn : m) dict.push_back(mn);
    for (const auto& mn : mismatch_candidates) dict.push_back(mn);
    std::sort(dict.begin(), dict.end());
    dict.erase(std::unique(dict.begin(), dict.end()), dict.end());
    std::vector<StepFunctional> fs;
    for (const auto& [mm, nn] : dict) fs.push_back(monomial_functional(mm, nn));

    const std::vector<Probe> probes = default_probes(cfg);
    out.gaps = convergence_gaps(cfg, fs, probes, cmp, tol);

    // Flag evaluation over the stationary range n >= max probe degree.
    const int s0 = max_probe_degree;
    std::map<std::string, std::pair<double, double>> inf_strong_and_final_weak;
    std::map<std::string, double> max_shift, max_weak_late;
    for (const auto& row : out.gaps.rows) {
        if (row.n < s0) continue;
        auto& [inf_strong, final_weak] = inf_strong_and_final_weak.try_emplace(
            row.f_label, std::numeric_limits<double>::infinity(), 0.0).first->second;
        inf_strong = std::min(inf_strong, row.strong_gap);
        if (row.n == out.n_max) final_weak = row.weak_gap;
        auto& sh = max_shift.try_emplace(row.f_label, 0.0).first->second;
        sh = std::max(sh, row.weak_shift);
        auto& wl = max_weak_late.try_emplace(row.f_label, 0.0).first->second;
        wl = std::max(wl, row.weak_gap);
    }

    constexpr double kGapFloor = 1e-3;     // calibration: a gap this size counts as persistent
    constexpr double kFlatCeiling = 1e-10; // calibration: a gap this size counts as vanished

    for (const auto& [label, pair] : inf_strong_and_final_weak) {
        if (pair.first > out.sot_divergence_value) {
            out.sot_divergence_value = pair.first;
            out.sot_witness_label = label;
        }
    }
    out.sot_diverges = out.sot_divergence_value >= kGapFloor;

    out.weak_all_converge = true;
    for (const auto& [label, sh] : max_shift) {
        out.weak_stationarity_defect = std::max(out.weak_stationarity_defect, sh);
        out.weak_all_converge = out.weak_all_converge && sh <= kFlatCeiling;
    }

    out.weak_limit_matches_on_m = true;
    for (const auto& mn : m) {
        const std::string label = monomial_functional(mn.first, mn.second).label;
        const double wl = max_weak_late.at(label);
        out.weak_on_m_defect = std::max(out.weak_on_m_defect, wl);
        out.weak_limit_matches_on_m = out.weak_limit_matches_on_m && wl <= kFlatCeiling;
    }

    for (const auto& mn : mismatch_candidates) {
        const std::string label = monomial_functional(mn.first, mn.second).label;
        const double final_weak = inf_strong_and_final_weak.at(label).second;
        if (final_weak >= kGapFloor) {
            out.mismatch_found = true;
            out.mismatch_label = label;
            out.mismatch_value = final_weak;
            break;
        }
    }
    return out;
}

ScalarSearchResult scalar_counterexample_search(int p, int q, int r, double t, int budget,
                                                std::uint64_t seed) {
    if (p < 0 || q < 0 || r < 0)
        fail(ErrorCode::InvalidArgument, "scalar_counterexample_search: negative exponent");
    if (p == q)
        fail(ErrorCode::RegimeError,
             "scalar_counterexample_search: need an off-diagonal pair, got p == q");
    if (2 * r > p + q)
        fail(ErrorCode::RegimeError,
             "scalar_counterexample_search: with 2r > p + q matching moments force a point "
             "measure, search refused");
    if (budget < 1) fail(ErrorCode::InvalidArgument, "scalar_counterexample_search: budget < 1");

    const int a = p + q;   // off-diagonal moment exponent
    const int b = 2 * r;   // diagonal moment exponent
    ScalarSearchResult out;
    Rng rng(Rng::mix(seed, 0x5ca1a8));

    const double atom_floor = 1e-9;
    auto try_support3 = [&](double x0, double x1, double x2) {
        if (x0 == x1 || x0 == x2 || x1 == x2) return false;
        Eigen::Matrix3d mat;
        Eigen::Vector3d rhs;
        mat << 1.0, 1.0, 1.0, std::pow(x0, b), std::pow(x1, b), std::pow(x2, b),
            std::pow(x0, a), std::pow(x1, a), std::pow(x2, a);
        rhs << 1.0, std::pow(t, b), std::pow(t, a);
        Eigen::FullPivLU<Eigen::Matrix3d> lu(mat);
        if (!lu.isInvertible()) return false;
        Eigen::Vector3d w = lu.solve(rhs);
        int heavy = 0;
        for (int i = 0; i < 3; ++i) {
            if (w(i) < -1e-13) return false;
            if (w(i) < 0.0) w(i) = 0.0;
            if (w(i) > atom_floor) ++heavy;
        }
        if (heavy < 2) return false;
        double m_b = 0.0, m_a = 0.0, mass = 0.0;
        const double xs[3] = {x0, x1, x2};
        for (int i = 0; i < 3; ++i) {
            mass += w(i);
            m_b += w(i) * std::pow(xs[i], b);
            m_a += w(i) * std::pow(xs[i], a);
        }
        const double scale = std::max({1.0, std::abs(std::pow(t, a)), std::abs(std::pow(t, b))});
        if (std::abs(mass - 1.0) > 1e-12 || std::abs(m_b - std::pow(t, b)) > 1e-12 * scale ||
            std::abs(m_a - std::pow(t, a)) > 1e-12 * scale)
            return false;
        for (int i = 0; i < 3; ++i)
            if (w(i) > atom_floor) out.measure.atoms.emplace_back(ExactPoint::real(xs[i]), w(i));
        out.residual_low = std::abs(m_b - std::pow(t, b));
        out.residual_high = std::abs(m_a - std::pow(t, a));
        out.found = true;
        return true;
    };
    auto try_support2 = [&](double x0, double x1) {
        if (x0 == x1) return false;
        const double pa0 = std::pow(x0, a), pa1 = std::pow(x1, a);
        if (pa1 == pa0) return false;
        const double w1 = (std::pow(t, a) - pa0) / (pa1 - pa0);
        const double w0 = 1.0 - w1;
        if (!(w0 > atom_floor && w1 > atom_floor)) return false;
        const double scale = std::max(1.0, std::abs(std::pow(t, a)));
        const double res_a = std::abs(w0 * pa0 + w1 * pa1 - std::pow(t, a));
        if (res_a > 1e-12 * scale) return false;
        out.measure.atoms.emplace_back(ExactPoint::real(x0), w0);
        out.measure.atoms.emplace_back(ExactPoint::real(x1), w1);
        out.residual_low = 0.0;
        out.residual_high = res_a;
        out.found = true;
        return true;
    };

    // The b-moment constraint degenerates when it duplicates mass (b = 0) or
    // the a-moment row (b = a); a two-atom family then suffices.
    const bool degenerate = (b == 0) || (b == a);

    if (degenerate) {
        const double spans[] = {1.0, 0.5, 2.0, 0.25};
        for (double s : spans) {
            if (out.trials_used >= budget) break;
            ++out.trials_used;
            if (try_support2(t - s, t + s)) return out;
        }
        while (out.trials_used < budget) {
            ++out.trials_used;
            const double s = rng.uniform(0.1, 3.0);
            const double off = rng.uniform(-1.0, 1.0);
            if (try_support2(t + off - s, t + off + s)) return out;
        }
        return out;
    }

    const double canonical[][3] = {
        {t - 2.0, t - 1.0, t + 1.0}, {t - 1.0, t + 1.0, t + 2.0}, {t - 2.0, t + 1.0, t + 2.0},
        {t - 1.0, t - 0.5, t + 1.0}, {t - 3.0, t - 1.0, t + 1.0}, {t - 1.5, t - 0.5, t + 0.5},
    };
    for (const auto& c : canonical) {
        if (out.trials_used >= budget) break;
        ++out.trials_used;
        if (try_support3(c[0], c[1], c[2])) return out;
    }
    while (out.trials_used < budget) {
        ++out.trials_used;
        const double x0 = t + rng.uniform(-3.0, 3.0);
        const double x1 = t + rng.uniform(-3.0, 3.0);
        const double x2 = t + rng.uniform(-3.0, 3.0);
        if (try_support3(x0, x1, x2)) return out;
    }
    return out;
}

PovmSearchResult povm_perturbation_search(const NormalOperator& t, const ExponentSet& xs,
                                          const PovmSearchOptions& opts,
                                          const ToleranceConfig& tol) {
    if (xs.empty()) fail(ErrorCode::InvalidArgument, "povm_perturbation_search: empty exponents");
    if (opts.budget < 1)
        fail(ErrorCode::InvalidArgument, "povm_perturbation_search: budget < 1");
    const Eigen::Index d = t.dim();

    std::vector<ComplexMatrix> targets;
    for (const auto& [m, n] : xs) {
        ComplexMatrix g = ComplexMatrix::Identity(d, d);
        for (int i = 0; i < m; ++i) g = g * t.matrix.adjoint();
        for (int i = 0; i < n; ++i) g = g * t.matrix;
        targets.push_back(g);
    }
    auto residual_of = [&](const Povm& f) {
        double sum = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const ComplexMatrix diff = moment_operator(f, xs[i].first, xs[i].second) - targets[i];
            sum += diff.squaredNorm();
        }
        return std::sqrt(sum);
    };

    Rng rng(Rng::mix(opts.seed, 0x90f7));

    Povm current;
    if (opts.seed_candidate) {
        validate_povm(*opts.seed_candidate, tol);
        current = *opts.seed_candidate;
    } else {
        const Povm spectral = spectral_measure_of(t, tol);
        current = spectral;
        double top = 0.0;
        for (Eigen::Index i = 0; i < d; ++i) top = std::max(top, std::abs(t.eigenvalues(i)));
        for (int e = 0; e < opts.extra_support; ++e) {
            while (true) {
                const Complex cand = (top + 0.5) * rng.unit_disk();
                bool ok = true;
                for (const Complex& z : current.support) ok = ok && std::abs(cand - z) >= 0.25;
                if (ok) {
                    current.support.push_back(cand);
                    current.effects.push_back(ComplexMatrix::Zero(d, d));
                    break;
                }
            }
        }
        // Smear toward the flat measure so the start is clearly non-spectral.
        const double gamma = 0.3;
        const double c = gamma / static_cast<double>(current.effects.size());
        for (auto& e : current.effects)
            e = (1.0 - gamma) * e + c * ComplexMatrix::Identity(d, d);
    }

    auto project = [&](Povm f) {
        ComplexMatrix sum = ComplexMatrix::Zero(d, d);
        for (auto& e : f.effects) {
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (e + e.adjoint()));
            Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
            e = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
            sum += e;
        }
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (sum + sum.adjoint()));
        Eigen::VectorXd inv = es.eigenvalues();
        for (Eigen::Index i = 0; i < d; ++i)
            inv(i) = inv(i) > 1e-14 ? 1.0 / std::sqrt(inv(i)) : 0.0;
        const ComplexMatrix w =
            es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
        for (auto& e : f.effects) e = w * e * w;
        return f;
    };

    PovmSearchResult out;
    double cur_res = residual_of(current);
    double cur_def = spectrality_defect(current);
    out.best_residual = cur_res;
    out.best_defect = cur_def;
    Povm best = current;

    double step = 0.1;
    int rejects = 0;
    for (int it = 0; it < opts.budget; ++it) {
        ++out.steps_used;
        if (out.best_residual <= 0.1 * opts.witness_tol) break;

        Povm cand = current;
        const std::size_t j = static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<int>(cand.effects.size()) - 1));
        ComplexMatrix h = rng.gaussian_matrix(d, d);
        h = 0.5 * (h + h.adjoint());
        const double hn = op_norm(h);
        if (hn > 0.0) h /= hn;
        cand.effects[j] += step * h;
        cand = project(std::move(cand));

        const double cd = spectrality_defect(cand);
        if (cd < opts.non_spectral_floor) {
            ++rejects;
        } else {
            const double cr = residual_of(cand);
            if (cr < cur_res) {
                current = std::move(cand);
                cur_res = cr;
                cur_def = cd;
                rejects = 0;
                if (cr < out.best_residual) {
                    out.best_residual = cr;
                    out.best_defect = cd;
                    best = current;
                }
            } else {
                ++rejects;
            }
        }
        if (rejects >= 50) {
            step = std::max(step * 0.7, 1e-6);
            rejects = 0;
        }
    }

    if (out.best_residual <= opts.witness_tol) out.witness = best;
    return out;
}

} // namespace hrlab
