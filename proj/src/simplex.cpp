#include "hrlab/simplex.hpp"

#include <cmath>
#include <vector>

namespace hrlab {

namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kFeasEps = 1e-9;
constexpr double kRatioTie = 1e-12;

struct Tableau {
    Eigen::MatrixXd t;              // rows x (n_total + 1), last column is the rhs
    std::vector<Eigen::Index> basis;
    std::vector<Eigen::Index> row_id; // original constraint index per surviving row
    Eigen::Index n_struct = 0;
    Eigen::Index n_total = 0;

    Eigen::Index rows() const { return t.rows(); }

    void pivot(Eigen::Index row, Eigen::Index col) {
        t.row(row) /= t(row, col);
        for (Eigen::Index i = 0; i < rows(); ++i) {
            if (i == row) continue;
            const double f = t(i, col);
            if (f != 0.0) t.row(i) -= f * t.row(row);
        }
        basis[static_cast<std::size_t>(row)] = col;
    }

    // One Bland step: entering = lowest eligible column with negative reduced
    // cost, leaving = lowest basis index among the minimum-ratio rows.
    bool step(const Eigen::VectorXd& cost, bool allow_artificial) {
        const Eigen::Index limit = allow_artificial ? n_total : n_struct;
        Eigen::Index enter = -1;
        for (Eigen::Index j = 0; j < limit && enter < 0; ++j) {
            bool basic = false;
            for (const auto bi : basis) basic = basic || (bi == j);
            if (basic) continue;
            double red = cost(j);
            for (Eigen::Index i = 0; i < rows(); ++i)
                red -= cost(basis[static_cast<std::size_t>(i)]) * t(i, j);
            if (red < -kPivotEps) enter = j;
        }
        if (enter < 0) return false;

        Eigen::Index leave = -1;
        double best = 0.0;
        for (Eigen::Index i = 0; i < rows(); ++i) {
            if (t(i, enter) <= kPivotEps) continue;
            const double ratio = t(i, n_total) / t(i, enter);
            const bool better =
                leave < 0 || ratio < best - kRatioTie ||
                (std::abs(ratio - best) <= kRatioTie &&
                 basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)]);
            if (better) {
                leave = i;
                best = ratio;
            }
        }
        if (leave < 0) fail(ErrorCode::LpInfeasible, "simplex: objective unbounded below");
        pivot(leave, enter);
        return true;
    }

    void drop_row(Eigen::Index row) {
        const Eigen::Index last = rows() - 1;
        if (row != last) {
            t.row(row) = t.row(last);
            basis[static_cast<std::size_t>(row)] = basis[static_cast<std::size_t>(last)];
            row_id[static_cast<std::size_t>(row)] = row_id[static_cast<std::size_t>(last)];
        }
        t.conservativeResize(last, Eigen::NoChange);
        basis.pop_back();
        row_id.pop_back();
    }
};

} // namespace

LpSolution solve_lp(const LpProblem& p) {
    const Eigen::Index m = p.a.rows();
    const Eigen::Index n = p.a.cols();
    if (p.b.size() != m || p.c.size() != n)
        fail(ErrorCode::InvalidArgument, "solve_lp: inconsistent problem shapes");

    // Sign-normalize so the rhs is nonnegative, then append artificials.
    Eigen::MatrixXd a = p.a;
    Eigen::VectorXd b = p.b;
    for (Eigen::Index i = 0; i < m; ++i) {
        if (b(i) < 0.0) {
            a.row(i) = -a.row(i);
            b(i) = -b(i);
        }
    }

    Tableau tb;
    tb.n_struct = n;
    tb.n_total = n + m;
    tb.t.resize(m, tb.n_total + 1);
    tb.t.leftCols(n) = a;
    tb.t.middleCols(n, m) = Eigen::MatrixXd::Identity(m, m);
    tb.t.col(tb.n_total) = b;
    for (Eigen::Index i = 0; i < m; ++i) {
        tb.basis.push_back(n + i);
        tb.row_id.push_back(i);
    }

    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(tb.n_total);
    phase1.tail(m).setOnes();
    while (tb.step(phase1, true)) {
    }

    double art_level = 0.0;
    for (Eigen::Index i = 0; i < tb.rows(); ++i)
        if (tb.basis[static_cast<std::size_t>(i)] >= n) art_level += tb.t(i, tb.n_total);
    if (art_level > kFeasEps)
        fail(ErrorCode::LpInfeasible,
             "simplex: phase one ended at level " + std::to_string(art_level));

    // Drive zero-level artificials out of the basis; rows without a structural
    // pivot are redundant equalities and are dropped.
    for (Eigen::Index i = 0; i < tb.rows();) {
        if (tb.basis[static_cast<std::size_t>(i)] < n) {
            ++i;
            continue;
        }
        Eigen::Index col = -1;
        for (Eigen::Index j = 0; j < n && col < 0; ++j)
            if (std::abs(tb.t(i, j)) > kPivotEps) col = j;
        if (col >= 0) {
            tb.pivot(i, col);
            ++i;
        } else {
            tb.drop_row(i);
        }
    }

    Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(tb.n_total);
    phase2.head(n) = p.c;
    while (tb.step(phase2, false)) {
    }

    LpSolution out;
    out.x = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < tb.rows(); ++i)
        if (tb.basis[static_cast<std::size_t>(i)] < n)
            out.x(tb.basis[static_cast<std::size_t>(i)]) = tb.t(i, tb.n_total);
    out.objective = p.c.dot(out.x);

    // Independent dual recovery from the original data: solve B^T y = c_B on
    // the surviving rows, then compare primal and dual objectives.
    const Eigen::Index mr = tb.rows();
    Eigen::MatrixXd bmat(mr, mr);
    Eigen::VectorXd cb(mr), bs(mr);
    for (Eigen::Index i = 0; i < mr; ++i) {
        bs(i) = b(tb.row_id[static_cast<std::size_t>(i)]);
        for (Eigen::Index k = 0; k < mr; ++k)
            bmat(k, i) = a(tb.row_id[static_cast<std::size_t>(k)],
                           tb.basis[static_cast<std::size_t>(i)]);
        cb(i) = phase2(tb.basis[static_cast<std::size_t>(i)]);
    }
    const Eigen::VectorXd y = bmat.transpose().fullPivLu().solve(cb);
    out.duality_gap = std::abs(out.objective - y.dot(bs));
    return out;
}

} // namespace hrlab
