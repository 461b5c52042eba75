#include "hrlab/choquet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>

#include "hrlab/matrix_core.hpp"
#include "hrlab/simplex.hpp"

namespace hrlab {

namespace {

constexpr double kRowDropEps = 1e-12;

void require_monomials(const MonomialSpace& m, const char* who) {
    if (m.empty()) fail(ErrorCode::InvalidArgument, std::string(who) + ": empty monomial space");
    bool has_unit = false;
    for (const auto& [a, b] : m) {
        if (a < 0 || b < 0)
            fail(ErrorCode::InvalidArgument, std::string(who) + ": negative exponent");
        has_unit = has_unit || (a == 0 && b == 0);
    }
    if (!has_unit)
        fail(ErrorCode::InvalidArgument,
             std::string(who) + ": monomial space must contain the constants (0, 0)");
}

} // namespace

bool AtomicMeasure::is_dirac(double tol) const {
    int heavy = 0;
    for (const auto& [p, w] : atoms)
        if (w > tol) ++heavy;
    return heavy <= 1;
}

BoundaryResult boundary_membership(const PointSet& x, const MonomialSpace& m,
                                   const ExactPoint& lambda, const BoundaryOptions& opts) {
    require_monomials(m, "boundary_membership");
    if (x.empty()) fail(ErrorCode::InvalidArgument, "boundary_membership: empty point set");

    Eigen::Index lambda_idx = -1;
    for (std::size_t j = 0; j < x.size(); ++j) {
        for (std::size_t i = j + 1; i < x.size(); ++i)
            if (x[j] == x[i])
                fail(ErrorCode::InvalidArgument, "boundary_membership: duplicate point in X");
        if (x[j] == lambda) lambda_idx = static_cast<Eigen::Index>(j);
    }
    if (lambda_idx < 0)
        fail(ErrorCode::InvalidArgument, "boundary_membership: lambda must be a point of X");

    BoundaryResult out;
    out.separates = generates(m, x);
    if (!out.separates && opts.require_separation)
        fail(ErrorCode::NotSeparating,
             "boundary_membership: monomials do not separate X, extreme-point reading invalid");

    MonomialSpace sorted = m;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    const Eigen::Index nv = static_cast<Eigen::Index>(x.size());
    std::vector<Eigen::VectorXd> rows;
    std::vector<double> rhs;
    rows.push_back(Eigen::VectorXd::Ones(nv));
    rhs.push_back(1.0);
    for (const auto& [mm, nn] : sorted) {
        if (mm == 0 && nn == 0) continue;
        Eigen::VectorXd re(nv), im(nv);
        for (Eigen::Index j = 0; j < nv; ++j) {
            const Complex v = monomial_value(x[static_cast<std::size_t>(j)], mm, nn);
            re(j) = v.real();
            im(j) = v.imag();
        }
        const Complex target = monomial_value(lambda, mm, nn);
        const std::array<std::pair<const Eigen::VectorXd*, double>, 2> parts = {
            std::make_pair(&re, target.real()), std::make_pair(&im, target.imag())};
        for (const auto& [row, t] : parts) {
            const double row_norm = row->cwiseAbs().maxCoeff();
            if (row_norm <= kRowDropEps) {
                if (std::abs(t) > kRowDropEps)
                    fail(ErrorCode::LpInfeasible,
                         "boundary_membership: zero row with nonzero target");
                continue; // identically-zero row (e.g. imaginary part of real data)
            }
            rows.push_back(*row);
            rhs.push_back(t);
        }
    }

    LpProblem lp;
    lp.a.resize(static_cast<Eigen::Index>(rows.size()), nv);
    lp.b.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        lp.a.row(static_cast<Eigen::Index>(i)) = rows[i];
        lp.b(static_cast<Eigen::Index>(i)) = rhs[i];
    }
    lp.c = Eigen::VectorXd::Zero(nv);
    lp.c(lambda_idx) = 1.0;

    const LpSolution sol = solve_lp(lp);
    out.optimal_weight = sol.objective;
    out.duality_gap = sol.duality_gap;
    out.in_boundary = sol.objective >= 1.0 - opts.boundary_tol;
    for (Eigen::Index j = 0; j < nv; ++j)
        if (sol.x(j) > 0.0)
            out.witness.atoms.emplace_back(x[static_cast<std::size_t>(j)], sol.x(j));
    return out;
}

IsnytosInstance isnytos_instance(const IsnytosParams& params) {
    const std::size_t n = params.d.size();
    if (n < 2 || params.pairs.size() != n || params.beta.size() != n)
        fail(ErrorCode::InvalidArgument,
             "isnytos_instance: need at least two components with matching d, pairs, beta");
    for (std::size_t i = 0; i < n; ++i) {
        if (params.d[i] < 1)
            fail(ErrorCode::InvalidArgument, "isnytos_instance: d entries must be positive");
        if (!(params.beta[i] > 0.0 && params.beta[i] < 1.0))
            fail(ErrorCode::InvalidArgument, "isnytos_instance: beta entries must lie in (0, 1)");
        const auto& [p, q] = params.pairs[i];
        if (p < 0 || q < 0)
            fail(ErrorCode::InvalidArgument, "isnytos_instance: negative exponent");
        for (std::size_t j = i + 1; j < n; ++j)
            if (params.pairs[i] == params.pairs[j])
                fail(ErrorCode::InvalidArgument, "isnytos_instance: pairs must be distinct");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto& [p, q] = params.pairs[i];
        if (std::abs(q - p) != params.d[i])
            fail(ErrorCode::PairMismatch, "isnytos_instance: |q_" + std::to_string(i) + " - p_" +
                                              std::to_string(i) + "| differs from d");
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && params.d[j] % params.d[i] == 0)
                fail(ErrorCode::DividesViolation,
                     "isnytos_instance: d_" + std::to_string(i) + " divides d_" +
                         std::to_string(j));
    int g = 0;
    for (int di : params.d) g = std::gcd(g, di);
    if (g != 1) fail(ErrorCode::GcdViolation, "isnytos_instance: gcd of d is not 1");
    double beta_sum = 0.0;
    for (double b : params.beta) beta_sum += b;
    if (std::abs(beta_sum - 1.0) > 1e-12)
        fail(ErrorCode::BetaSumViolation,
             "isnytos_instance: beta sums to " + std::to_string(beta_sum));

    IsnytosInstance out;
    out.x.push_back(ExactPoint(1.0, Turn(0, 1)));
    out.monomials.push_back({0, 0});
    for (std::size_t j = 0; j < n; ++j) {
        const auto& [p, q] = params.pairs[j];
        const double r = std::pow(params.beta[j], -1.0 / static_cast<double>(p + q));
        const double alpha = params.beta[j] / static_cast<double>(params.d[j]);
        out.radii.push_back(r);
        out.alpha.push_back(alpha);
        out.monomials.push_back(params.pairs[j]);
        for (int k = 0; k < params.d[j]; ++k) {
            const ExactPoint pt(r, Turn(k, params.d[j]));
            if (!contains_point(out.x, pt)) out.x.push_back(pt);
            bool merged = false;
            for (auto& [ap, aw] : out.mu.atoms)
                if (ap == pt) {
                    aw += alpha;
                    merged = true;
                }
            if (!merged) out.mu.atoms.emplace_back(pt, alpha);
        }
    }
    return out;
}

RepresentingReport verify_representing(const AtomicMeasure& mu, const MonomialSpace& m,
                                       const ExactPoint& lambda, const ToleranceConfig& tol) {
    require_monomials(m, "verify_representing");
    if (mu.atoms.empty())
        fail(ErrorCode::InvalidArgument, "verify_representing: empty measure");
    for (const auto& [p, w] : mu.atoms)
        if (w < 0.0) fail(ErrorCode::InvalidArgument, "verify_representing: negative weight");

    RepresentingReport report;
    for (const auto& [mm, nn] : m) {
        const int s = nn - mm;

        // Merge atoms sharing modulus and scaled phase; detect whole-coset
        // cancellations, which are exact zeros.
        std::map<double, std::map<Turn, double, std::less<Turn>>> groups;
        for (const auto& [p, w] : mu.atoms) {
            if (p.modulus == 0.0 && mm + nn > 0) continue;
            groups[p.modulus][p.turn.scaled(s)] += w;
        }
        Complex total(0.0, 0.0);
        for (const auto& [radius, phases] : groups) {
            const double rp = (mm + nn == 0) ? 1.0 : std::pow(radius, mm + nn);
            const std::size_t gsize = phases.size();
            if (gsize >= 2) {
                bool coset = true;
                auto it = phases.begin();
                const double w0 = it->second;
                const Turn residue = it->first.scaled(static_cast<std::int64_t>(gsize));
                for (const auto& [ph, w] : phases)
                    coset = coset && w == w0 &&
                            ph.scaled(static_cast<std::int64_t>(gsize)) == residue;
                if (coset) continue; // equal weights around a full coset sum to zero
            }
            for (const auto& [ph, w] : phases) total += w * rp * ExactPoint::unit_phase(ph);
        }

        const Complex target = monomial_value(lambda, mm, nn);
        const double resid = std::abs(total - target);
        double scale = std::max(1.0, std::abs(target));
        for (const auto& [radius, phases] : groups)
            scale = std::max(scale, (mm + nn == 0) ? 1.0 : std::pow(radius, mm + nn));
        report.rows.push_back({mm, nn, resid});
        report.ok = report.ok && resid <= tol.gate(scale);
    }
    return report;
}

} // namespace hrlab
