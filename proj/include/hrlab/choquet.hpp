#pragma once

#include <vector>

#include "hrlab/exact_point.hpp"
#include "hrlab/exponents.hpp"
#include "hrlab/tolerance.hpp"

namespace hrlab {

// Finitely supported positive measure with exact-angle atoms.
struct AtomicMeasure {
    std::vector<std::pair<ExactPoint, double>> atoms;

    double total_mass() const {
        double s = 0.0;
        for (const auto& [p, w] : atoms) s += w;
        return s;
    }
    bool is_dirac(double tol = 1e-12) const;
};

// A monomial space is an exponent set required to contain (0, 0), i.e. the
// constants. Kept as a plain ExponentSet; the ops validate membership.
using MonomialSpace = ExponentSet;

struct BoundaryOptions {
    ToleranceConfig tol;
    double boundary_tol = 1e-8;    // in-boundary threshold on the optimal weight
    bool require_separation = false;
};

struct BoundaryResult {
    bool in_boundary = false;
    double optimal_weight = 0.0;   // least mass any representing measure puts at lambda
    AtomicMeasure witness;         // optimal vertex measure
    double duality_gap = 0.0;
    bool separates = true;         // do M's monomials separate X?
};

// Least w_lambda over probability measures on X matching lambda's moments for
// every monomial of M. lambda is extreme (in the boundary) exactly when no
// representing measure can avoid it, i.e. the minimum stays at 1. When M
// fails to separate X the LP semantics still stand and `separates` records
// the defect; require_separation upgrades that to a NotSeparating error.
BoundaryResult boundary_membership(const PointSet& x, const MonomialSpace& m,
                                   const ExactPoint& lambda, const BoundaryOptions& opts = {});

struct IsnytosParams {
    std::vector<int> d;              // pairwise non-dividing, gcd 1
    std::vector<Biexponent> pairs;   // |q_j - p_j| = d_j
    std::vector<double> beta;        // entries in (0, 1), summing to 1
};

struct IsnytosInstance {
    PointSet x;                      // {1} plus the scaled root-of-unity orbits
    AtomicMeasure mu;                // orbit measure representing 1
    MonomialSpace monomials;         // {(0,0)} plus the pairs
    std::vector<double> radii;       // beta_j^{-1/(p_j+q_j)}
    std::vector<double> alpha;       // beta_j / d_j
};

// Factory for the non-extreme-point family: mu spreads mass over scaled
// root-of-unity orbits yet reproduces the monomial values at 1, so 1 fails
// to be extreme even though the monomials generate.
IsnytosInstance isnytos_instance(const IsnytosParams& params);

struct RepresentingReport {
    bool ok = true;
    struct Row {
        int m = 0, n = 0;
        double residual = 0.0;
    };
    std::vector<Row> rows;
};

// Does mu reproduce lambda's monomial values on M? Angles are handled
// exactly: atoms sharing a modulus whose scaled phases fill a coset of a
// root-of-unity group with equal weights cancel to an exact zero; only
// modulus powers go through floating point.
RepresentingReport verify_representing(const AtomicMeasure& mu, const MonomialSpace& m,
                                       const ExactPoint& lambda,
                                       const ToleranceConfig& tol = {});

} // namespace hrlab
