#pragma once

#include <algorithm>

namespace hrlab {

// Mixed absolute/relative tolerance. A comparison at scale s passes when the
// residual is below abs_tol + rel_tol * s; callers pick s as the largest norm
// among the operands entering the comparison.
struct ToleranceConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;

    double gate(double scale) const { return abs_tol + rel_tol * std::max(scale, 0.0); }

    bool close(double residual, double scale) const { return residual <= gate(scale); }

    static ToleranceConfig defaults() { return {}; }

    static ToleranceConfig uniform(double t) { return {t, t}; }
};

} // namespace hrlab
