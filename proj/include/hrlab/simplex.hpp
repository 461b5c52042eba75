#pragma once

#include <Eigen/Dense>

#include "hrlab/errors.hpp"

namespace hrlab {

// Equality-form linear program: minimize c.x subject to A x = b, x >= 0.
struct LpProblem {
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    Eigen::VectorXd c;
};

struct LpSolution {
    Eigen::VectorXd x;        // basic optimal vertex; nonbasic entries are exact zeros
    double objective = 0.0;
    double duality_gap = 0.0; // |c.x - y.b| from the final basis
};

// Dense two-phase simplex with Bland's rule, so it cannot cycle and the
// returned vertex is deterministic. Throws LpInfeasible when phase one ends
// above tolerance. Redundant equality rows are detected and dropped.
LpSolution solve_lp(const LpProblem& p);

} // namespace hrlab
