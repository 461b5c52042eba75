#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>

#include "hrlab/choquet.hpp"
#include "hrlab/rng.hpp"
#include "hrlab/simplex.hpp"

using hrlab::AtomicMeasure;
using hrlab::BoundaryOptions;
using hrlab::Error;
using hrlab::ErrorCode;
using hrlab::ExactPoint;
using hrlab::IsnytosParams;
using hrlab::LpProblem;
using hrlab::PointSet;
using hrlab::Rng;
using hrlab::Turn;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an hrlab::Error");
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST_CASE("simplex solves a textbook program") {
    LpProblem p;
    p.a.resize(2, 4);
    p.a << 1, 1, 1, 0,
           1, 3, 0, 1;
    p.b.resize(2);
    p.b << 4, 6;
    p.c.resize(4);
    p.c << -1, -2, 0, 0;

    const auto sol = hrlab::solve_lp(p);
    CHECK(sol.objective == doctest::Approx(-5.0).epsilon(1e-12));
    CHECK(sol.x(0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(sol.x(1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol.x(2) == 0.0);
    CHECK(sol.x(3) == 0.0);
    CHECK(sol.duality_gap <= 1e-10);
}

TEST_CASE("simplex refuses infeasible data and drops redundant rows") {
    LpProblem bad;
    bad.a.resize(1, 2);
    bad.a << 1, 1;
    bad.b.resize(1);
    bad.b << -1;
    bad.c = Eigen::VectorXd::Zero(2);
    CHECK(code_of([&] { hrlab::solve_lp(bad); }) == ErrorCode::LpInfeasible);

    LpProblem dup;
    dup.a.resize(2, 2);
    dup.a << 1, 1,
             2, 2; // scalar multiple of row one
    dup.b.resize(2);
    dup.b << 2, 4;
    dup.c.resize(2);
    dup.c << 1, 0;
    const auto sol = hrlab::solve_lp(dup);
    CHECK(sol.objective == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sol.x(1) == doctest::Approx(2.0).epsilon(1e-12));

    // same rows but clashing right-hand sides
    dup.b << 2, 5;
    CHECK(code_of([&] { hrlab::solve_lp(dup); }) == ErrorCode::LpInfeasible);
}

TEST_CASE("simplex result beats every planted feasible point") {
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        Rng rng(Rng::mix(617, trial));
        const int m = 3, n = 6;
        LpProblem p;
        p.a.resize(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) p.a(i, j) = rng.gaussian();
        Eigen::VectorXd planted(n);
        for (int j = 0; j < n; ++j) planted(j) = std::abs(rng.gaussian());
        p.b = p.a * planted;
        p.c.resize(n);
        for (int j = 0; j < n; ++j) p.c(j) = std::abs(rng.gaussian()); // bounded below

        const auto sol = hrlab::solve_lp(p);
        CHECK((p.a * sol.x - p.b).lpNorm<Eigen::Infinity>() <= 1e-8);
        CHECK(sol.x.minCoeff() >= -1e-12);
        CHECK(sol.objective <= p.c.dot(planted) + 1e-8);
        CHECK(sol.duality_gap <= 1e-8);
    }
}

TEST_CASE("membership for the fold monomials on three real points") {
    const PointSet x = {ExactPoint::real(1.0), ExactPoint::real(-1.0), ExactPoint::real(0.0)};
    const hrlab::MonomialSpace m = {{0, 0}, {0, 2}, {2, 2}};

    // z^2 and |z|^4 cannot tell 1 from -1, so each endpoint is representable
    // by the point mass at its mirror image
    const auto at_one = hrlab::boundary_membership(x, m, ExactPoint::real(1.0));
    CHECK_FALSE(at_one.in_boundary);
    CHECK(at_one.optimal_weight <= 1e-10);
    CHECK(at_one.duality_gap <= 1e-8);
    CHECK_FALSE(at_one.separates);
    // witness keeps only the support: the single mirror atom
    REQUIRE(at_one.witness.atoms.size() == 1);
    double mass_at_minus = 0.0;
    for (const auto& [p, w] : at_one.witness.atoms)
        if (p == ExactPoint::real(-1.0)) mass_at_minus = w;
    CHECK(mass_at_minus == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(at_one.witness.total_mass() == doctest::Approx(1.0).epsilon(1e-10));

    const auto at_minus = hrlab::boundary_membership(x, m, ExactPoint::real(-1.0));
    CHECK_FALSE(at_minus.in_boundary);
    double mass_at_plus = 0.0;
    for (const auto& [p, w] : at_minus.witness.atoms)
        if (p == ExactPoint::real(1.0)) mass_at_plus = w;
    CHECK(mass_at_plus == doctest::Approx(1.0).epsilon(1e-10));

    // both monomials vanish at 0 and are nonnegative elsewhere on X, so any
    // representing measure is stuck at 0
    const auto at_zero = hrlab::boundary_membership(x, m, ExactPoint::real(0.0));
    CHECK(at_zero.in_boundary);
    CHECK(at_zero.optimal_weight == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(at_zero.duality_gap <= 1e-8);

    BoundaryOptions strict;
    strict.require_separation = true;
    CHECK(code_of([&] { hrlab::boundary_membership(x, m, ExactPoint::real(0.0), strict); }) ==
          ErrorCode::NotSeparating);
}

TEST_CASE("membership with a separating space") {
    const PointSet x = {ExactPoint::real(1.0), ExactPoint::real(-1.0), ExactPoint::real(0.0)};
    const hrlab::MonomialSpace m = {{0, 0}, {0, 1}};

    const auto at_one = hrlab::boundary_membership(x, m, ExactPoint::real(1.0));
    CHECK(at_one.in_boundary);
    CHECK(at_one.separates);
    CHECK(at_one.optimal_weight == doctest::Approx(1.0).epsilon(1e-8));

    const auto at_zero = hrlab::boundary_membership(x, m, ExactPoint::real(0.0));
    CHECK_FALSE(at_zero.in_boundary);
    double w_plus = 0.0, w_minus = 0.0;
    for (const auto& [p, w] : at_zero.witness.atoms) {
        if (p == ExactPoint::real(1.0)) w_plus = w;
        if (p == ExactPoint::real(-1.0)) w_minus = w;
    }
    CHECK(w_plus == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(w_minus == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("membership input validation") {
    const PointSet x = {ExactPoint::real(1.0), ExactPoint::real(-1.0)};
    CHECK(code_of([&] {
        hrlab::boundary_membership(x, {{0, 0}, {0, 1}}, ExactPoint::real(2.0));
    }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] {
        hrlab::boundary_membership(x, {{0, 1}}, ExactPoint::real(1.0)); // constants missing
    }) == ErrorCode::InvalidArgument);
    PointSet dup = x;
    dup.push_back(ExactPoint::real(1.0));
    CHECK(code_of([&] {
        hrlab::boundary_membership(dup, {{0, 0}, {0, 1}}, ExactPoint::real(1.0));
    }) == ErrorCode::InvalidArgument);
}

TEST_CASE("orbit instance over d = (2, 3)") {
    IsnytosParams params;
    params.d = {2, 3};
    params.pairs = {{0, 2}, {0, 3}};
    params.beta = {0.5, 0.5};

    const auto inst = hrlab::isnytos_instance(params);
    REQUIRE(inst.radii.size() == 2);
    CHECK(inst.radii[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(inst.radii[1] == doctest::Approx(std::cbrt(2.0)).epsilon(1e-14));
    CHECK(inst.alpha[0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(inst.alpha[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(inst.x.size() == 6); // the point 1 plus a 2-orbit and a 3-orbit
    CHECK(inst.mu.atoms.size() == 5);
    CHECK(inst.mu.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_FALSE(inst.mu.is_dirac());
    REQUIRE(inst.monomials.size() == 3);
    CHECK(inst.monomials[0] == hrlab::Biexponent{0, 0});

    // the orbit measure reproduces the values at 1...
    const auto rep = hrlab::verify_representing(inst.mu, inst.monomials, ExactPoint::real(1.0));
    CHECK(rep.ok);
    for (const auto& row : rep.rows) CHECK(row.residual <= 1e-12);

    // ...yet never touches 1, so 1 is not extreme
    const auto membership = hrlab::boundary_membership(inst.x, inst.monomials,
                                                       ExactPoint::real(1.0));
    CHECK_FALSE(membership.in_boundary);
    CHECK(membership.optimal_weight <= 1e-8);
    CHECK(membership.duality_gap <= 1e-8);
    CHECK(membership.separates);
    CHECK(hrlab::generates(inst.monomials, inst.x));
}

TEST_CASE("orbit instance rejects malformed parameters") {
    IsnytosParams p;
    p.d = {2, 4};
    p.pairs = {{0, 2}, {0, 4}};
    p.beta = {0.5, 0.5};
    CHECK(code_of([&] { hrlab::isnytos_instance(p); }) == ErrorCode::DividesViolation);

    p.d = {4, 6};
    p.pairs = {{0, 4}, {0, 6}};
    CHECK(code_of([&] { hrlab::isnytos_instance(p); }) == ErrorCode::GcdViolation);

    p.d = {2, 3};
    p.pairs = {{0, 2}, {0, 4}};
    CHECK(code_of([&] { hrlab::isnytos_instance(p); }) == ErrorCode::PairMismatch);

    p.pairs = {{0, 2}, {0, 3}};
    p.beta = {0.5, 0.3};
    CHECK(code_of([&] { hrlab::isnytos_instance(p); }) == ErrorCode::BetaSumViolation);

    p.beta = {0.5, 1.5};
    CHECK(code_of([&] { hrlab::isnytos_instance(p); }) == ErrorCode::InvalidArgument);

    p.d = {2};
    p.pairs = {{0, 2}};
    p.beta = {1.0};
    CHECK(code_of([&] { hrlab::isnytos_instance(p); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("full cosets cancel to exact zeros") {
    AtomicMeasure mu;
    const double r = 2.0;
    for (int k = 0; k < 3; ++k)
        mu.atoms.emplace_back(ExactPoint(r, Turn(k, 3)), 1.0 / 3.0);

    const auto rep = hrlab::verify_representing(mu, {{0, 0}, {0, 1}, {0, 2}},
                                                ExactPoint::real(0.0));
    // rows for z and z^2 are exact: the three cube-roots-of-unity phases are
    // cancelled symbolically, not summed in floating point
    bool saw_z = false, saw_z2 = false;
    for (const auto& row : rep.rows) {
        if (row.m == 0 && row.n == 1) {
            CHECK(row.residual == 0.0);
            saw_z = true;
        }
        if (row.m == 0 && row.n == 2) {
            CHECK(row.residual == 0.0);
            saw_z2 = true;
        }
    }
    CHECK(saw_z);
    CHECK(saw_z2);
    CHECK(rep.ok); // mass and both phase sums match the values at 0

    // dropping one atom breaks the cancellation
    AtomicMeasure partial;
    partial.atoms.emplace_back(ExactPoint(r, Turn(0, 3)), 0.5);
    partial.atoms.emplace_back(ExactPoint(r, Turn(1, 3)), 0.5);
    const auto rep2 = hrlab::verify_representing(partial, {{0, 0}, {0, 1}},
                                                 ExactPoint::real(1.0));
    CHECK_FALSE(rep2.ok);
    double z_residual = 0.0;
    for (const auto& row : rep2.rows)
        if (row.m == 0 && row.n == 1) z_residual = row.residual;
    CHECK(z_residual > 0.5);
}

TEST_CASE("dirac detection") {
    AtomicMeasure one;
    one.atoms.emplace_back(ExactPoint::real(1.0), 1.0);
    CHECK(one.is_dirac());

    one.atoms.emplace_back(ExactPoint::real(-1.0), 1e-15);
    CHECK(one.is_dirac()); // below the weight floor

    AtomicMeasure split;
    split.atoms.emplace_back(ExactPoint::real(1.0), 0.5);
    split.atoms.emplace_back(ExactPoint::real(-1.0), 0.5);
    CHECK_FALSE(split.is_dirac());
}
