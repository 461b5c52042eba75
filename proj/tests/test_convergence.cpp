#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>

#include "hrlab/convergence.hpp"

using hrlab::Complex;
using hrlab::ComplexMatrix;
using hrlab::ComplexVector;
using hrlab::Error;
using hrlab::ErrorCode;
using hrlab::ExactPoint;
using hrlab::MonomialSpace;
using hrlab::PointSet;
using hrlab::Povm;
using hrlab::Probe;
using hrlab::SequenceConfig;

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

SequenceConfig diagonal_config(const std::vector<Complex>& diag, Eigen::Index h_dim,
                               Complex lambda, int n_max) {
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(diag.size()),
                                          static_cast<Eigen::Index>(diag.size()));
    for (std::size_t i = 0; i < diag.size(); ++i)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag[i];
    SequenceConfig cfg;
    cfg.n = hrlab::spectral_decompose(m);
    cfg.h_dim = h_dim;
    cfg.tail_dim = static_cast<Eigen::Index>(diag.size()) - h_dim;
    cfg.lambda = lambda;
    cfg.n_max = n_max;
    return cfg;
}

Probe basis_probe(Eigen::Index k, Eigen::Index i, const std::string& label) {
    Probe p;
    p.u = ComplexVector::Zero(k);
    p.u(i) = 1.0;
    p.v = p.u;
    p.label = label;
    return p;
}

const PointSet kFoldPoints = {ExactPoint::real(1.0), ExactPoint::real(-1.0),
                              ExactPoint::real(0.0)};
const MonomialSpace kFoldMonomials = {{0, 0}, {0, 2}, {2, 2}};

} // namespace

TEST_CASE("shift powers have exact zero-one entries") {
    const auto cfg = diagonal_config({2.0, 1.0, 1.0, 1.0}, 1, 0.0, 3);

    const ComplexMatrix v0 = hrlab::shift_power(cfg, 0);
    CHECK((v0 - ComplexMatrix::Identity(4, 4)).norm() == 0.0);

    const ComplexMatrix v1 = hrlab::shift_power(cfg, 1);
    ComplexMatrix want = ComplexMatrix::Zero(4, 4);
    want(0, 0) = 1.0;
    want(2, 1) = 1.0;
    want(3, 2) = 1.0;
    CHECK((v1 - want).norm() == 0.0);

    const ComplexMatrix v3 = hrlab::shift_power(cfg, 3);
    ComplexMatrix deep = ComplexMatrix::Zero(4, 4);
    deep(0, 0) = 1.0; // the tail is exhausted, only H survives
    CHECK((v3 - deep).norm() == 0.0);

    CHECK(code_of([&] { hrlab::shift_power(cfg, -1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("sequence starts at N and refuses steps past n_max") {
    const auto cfg = diagonal_config({2.0, 1.0, -1.0, 0.5}, 1, Complex(0.0, 1.0), 2);
    CHECK((hrlab::build_sequence(cfg, 0) - cfg.n.matrix).norm() == 0.0);
    CHECK(code_of([&] { hrlab::build_sequence(cfg, 3); }) == ErrorCode::IndexOverflow);
    CHECK(code_of([&] { hrlab::build_sequence(cfg, -1); }) == ErrorCode::IndexOverflow);

    SequenceConfig bad = cfg;
    bad.h_dim = 3; // N no longer matches h_dim + tail_dim
    bad.tail_dim = 2;
    CHECK(code_of([&] { hrlab::build_sequence(bad, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("default probes are unit vectors with the advertised reach") {
    const auto cfg = diagonal_config(std::vector<Complex>(8, 1.0), 1, 0.0, 2);
    const auto probes = hrlab::default_probes(cfg);
    CHECK(probes.size() == 12);
    int max_degree = 0;
    for (const auto& p : probes) {
        CHECK(p.u.norm() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(p.v.norm() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK_FALSE(p.label.empty());
        max_degree = std::max(max_degree, p.degree);
    }
    CHECK(max_degree == 4); // the deepest default probe sits on tail slot 3

    const auto tiny = diagonal_config(std::vector<Complex>(4, 1.0), 1, 0.0, 0);
    CHECK(code_of([&] { hrlab::default_probes(tiny); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("monomial functionals evaluate mixed powers") {
    const auto f = hrlab::monomial_functional(1, 2);
    CHECK(f.label == "zbar^1 z^2");
    const Complex z(0.0, 2.0);
    CHECK(std::abs(f.f(z) - Complex(0.0, 8.0)) <= 1e-12);
    CHECK(std::abs(hrlab::monomial_functional(0, 0).f(z) - Complex(1.0, 0.0)) <= 1e-12);
}

TEST_CASE("a sequence already split along H is stationary") {
    std::vector<Complex> diag(10, 0.5);
    diag[0] = 3.0;
    const auto cfg = diagonal_config(diag, 1, 0.5, 4);
    const auto probes = hrlab::default_probes(cfg);
    const std::vector<hrlab::StepFunctional> fs = {hrlab::monomial_functional(0, 1),
                                                   hrlab::monomial_functional(0, 2)};

    const auto report = hrlab::convergence_gaps(cfg, fs, probes);
    for (const auto& row : report.rows) {
        CHECK(row.weak_gap <= 1e-12);
        CHECK(row.strong_gap <= 1e-12);
        CHECK(row.weak_shift <= 1e-12);
        CHECK(row.discarded_norm == 0.0);
    }
    CHECK(report.identity_residual <= 1e-12);
    CHECK(report.norm_bound_ok);
    CHECK(report.seq_norm_max == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(report.comparison_norm == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("truncation pushes the old tail past every probe") {
    // tail values 1 against lambda = 0: the probes see the difference until
    // the shift has moved it out of reach, exactly at their degree
    std::vector<Complex> diag(11, 1.0);
    diag[0] = 2.0;
    const auto cfg = diagonal_config(diag, 1, 0.0, 5);
    const auto probes = hrlab::default_probes(cfg);
    const std::vector<hrlab::StepFunctional> fs = {hrlab::monomial_functional(0, 1),
                                                   hrlab::monomial_functional(1, 1)};

    const auto report = hrlab::convergence_gaps(cfg, fs, probes);
    for (const auto& row : report.rows) {
        if (row.n == 0) CHECK(row.strong_gap == doctest::Approx(1.0).epsilon(1e-12));
        if (row.n >= 4) {
            CHECK(row.strong_gap == 0.0);
            CHECK(row.weak_gap == 0.0);
            CHECK(row.weak_shift == 0.0);
        }
        CHECK(row.discarded_norm == 0.0);
    }
    CHECK(report.identity_residual <= 1e-12);
    CHECK(report.norm_bound_ok);
}

TEST_CASE("losing normality under compression is reported, not absorbed") {
    // a cyclic permutation of the tail is normal, its truncated corner is not
    ComplexMatrix n = ComplexMatrix::Zero(4, 4);
    n(0, 0) = 5.0;
    n(1, 3) = 1.0;
    n(2, 1) = 1.0;
    n(3, 2) = 1.0;
    SequenceConfig cfg;
    cfg.n = hrlab::spectral_decompose(n);
    cfg.h_dim = 1;
    cfg.tail_dim = 3;
    cfg.lambda = 0.0;
    cfg.n_max = 1;

    const std::vector<Probe> probes = {basis_probe(4, 0, "h0/h0")};
    const std::vector<hrlab::StepFunctional> fs = {hrlab::monomial_functional(0, 1)};
    CHECK(code_of([&] { hrlab::convergence_gaps(cfg, fs, probes); }) == ErrorCode::NotNormal);
}

TEST_CASE("probe safety gates") {
    const auto cfg = diagonal_config(std::vector<Complex>(7, 1.0), 1, 0.0, 2);
    // deepest default probe has degree 4 and tail 6 < 2 + 4 + 1
    CHECK(code_of([&] {
        hrlab::convergence_gaps(cfg, {hrlab::monomial_functional(0, 1)},
                                hrlab::default_probes(cfg));
    }) == ErrorCode::ProbeUnsafe);

    Probe loud = basis_probe(7, 0, "loud");
    loud.u *= 2.0;
    CHECK(code_of([&] {
        hrlab::convergence_gaps(cfg, {hrlab::monomial_functional(0, 1)}, {loud});
    }) == ErrorCode::InvalidArgument);

    CHECK(code_of([&] {
        hrlab::convergence_gaps(cfg, {hrlab::monomial_functional(0, 1)},
                                {basis_probe(5, 0, "short")});
    }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("experiment: weak limits settle off the comparison while SOT diverges") {
    const auto rep = hrlab::main2_experiment(kFoldPoints, kFoldMonomials, ExactPoint::real(1.0),
                                             ExactPoint::real(0.0), 10, 5);
    CHECK(rep.n_max == 5);
    CHECK(rep.lambda0 == Complex(1.0, 0.0));
    CHECK(rep.lambda == Complex(0.0, 0.0));

    // the witness avoids lambda0 entirely: all mass at the mirror point
    double mass_at_minus = 0.0;
    for (const auto& [p, w] : rep.witness.atoms)
        if (p == ExactPoint::real(-1.0)) mass_at_minus = w;
    CHECK(mass_at_minus == doctest::Approx(1.0).epsilon(1e-10));

    CHECK(rep.sot_diverges);
    CHECK(rep.sot_divergence_value == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(rep.sot_witness_label == "zbar^0 z^1");

    CHECK(rep.weak_all_converge);
    CHECK(rep.weak_stationarity_defect <= 1e-12);
    CHECK(rep.weak_limit_matches_on_m);
    CHECK(rep.weak_on_m_defect <= 1e-12);

    CHECK(rep.mismatch_found);
    CHECK(rep.mismatch_label == "zbar^0 z^1");
    CHECK(rep.mismatch_value == doctest::Approx(2.0).epsilon(1e-9));

    CHECK(rep.gaps.identity_residual <= 1e-12);
    CHECK(rep.gaps.norm_bound_ok);
}

TEST_CASE("experiment rejects boundary points and cramped configs") {
    CHECK(code_of([&] {
        hrlab::main2_experiment(kFoldPoints, kFoldMonomials, ExactPoint::real(0.0),
                                ExactPoint::real(1.0), 10);
    }) == ErrorCode::BoundaryPoint);
    CHECK(code_of([&] {
        hrlab::main2_experiment(kFoldPoints, kFoldMonomials, ExactPoint::real(1.0),
                                ExactPoint::real(0.0), 3);
    }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] {
        hrlab::main2_experiment(kFoldPoints, kFoldMonomials, ExactPoint::real(1.0),
                                ExactPoint::real(0.0), 10, 3);
    }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] {
        hrlab::main2_experiment(kFoldPoints, kFoldMonomials, ExactPoint::real(1.0),
                                ExactPoint::real(5.0), 10);
    }) == ErrorCode::InvalidArgument);
}

TEST_CASE("scalar search finds the flat-regime spread measure") {
    const auto res = hrlab::scalar_counterexample_search(1, 2, 1, 1.0, 100);
    REQUIRE(res.found);
    CHECK(res.trials_used == 1); // first canonical support works
    REQUIRE(res.measure.atoms.size() == 3);
    CHECK_FALSE(res.measure.is_dirac());
    CHECK(res.measure.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.residual_low <= 1e-12);
    CHECK(res.residual_high <= 1e-12);

    const auto& atoms = res.measure.atoms;
    CHECK(atoms[0].first == ExactPoint::real(-1.0));
    CHECK(atoms[0].second == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(atoms[1].first == ExactPoint::real(0.0));
    CHECK(atoms[1].second == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(atoms[2].first == ExactPoint::real(2.0));
    CHECK(atoms[2].second == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("scalar search degenerate and impossible regimes") {
    const auto two = hrlab::scalar_counterexample_search(0, 1, 0, 1.0, 100);
    REQUIRE(two.found);
    CHECK(two.measure.atoms.size() == 2);
    CHECK_FALSE(two.measure.is_dirac());
    CHECK(two.residual_high <= 1e-12);

    // at t = 0 any matching measure is the point mass, which is excluded
    const auto stuck = hrlab::scalar_counterexample_search(1, 2, 1, 0.0, 50);
    CHECK_FALSE(stuck.found);
    CHECK(stuck.trials_used == 50);

    CHECK(code_of([&] { hrlab::scalar_counterexample_search(1, 1, 0, 1.0, 10); }) ==
          ErrorCode::RegimeError);
    CHECK(code_of([&] { hrlab::scalar_counterexample_search(1, 2, 2, 1.0, 10); }) ==
          ErrorCode::RegimeError);
    CHECK(code_of([&] { hrlab::scalar_counterexample_search(1, 2, 1, 1.0, 0); }) ==
          ErrorCode::InvalidArgument);
}

TEST_CASE("povm search plateaus in the rigid regime") {
    ComplexMatrix t = ComplexMatrix::Zero(2, 2);
    t(0, 0) = 1.0;
    t(1, 1) = -1.0;
    hrlab::PovmSearchOptions opts;
    opts.budget = 600;
    opts.seed = 7;

    const auto res = hrlab::povm_perturbation_search(hrlab::spectral_decompose(t),
                                                     {{0, 1}, {1, 1}}, opts);
    CHECK_FALSE(res.witness.has_value());
    CHECK(res.best_residual > 1e-6);
    CHECK(res.best_defect >= opts.non_spectral_floor);
    CHECK(res.steps_used == opts.budget);
}

TEST_CASE("povm search accepts a planted witness outside the rigid regime") {
    ComplexMatrix t = ComplexMatrix::Constant(1, 1, Complex(1.0, 0.0));
    Povm seed;
    seed.support = {Complex(1.0, 0.0), Complex(-1.0, 0.0)};
    seed.effects = {ComplexMatrix::Constant(1, 1, Complex(0.5, 0.0)),
                    ComplexMatrix::Constant(1, 1, Complex(0.5, 0.0))};
    hrlab::PovmSearchOptions opts;
    opts.budget = 100;
    opts.seed_candidate = seed;

    // gcd of |n - m| over {(0,2),(2,2)} is 2 and the seed moments match T
    const auto res = hrlab::povm_perturbation_search(hrlab::spectral_decompose(t),
                                                     {{0, 2}, {2, 2}}, opts);
    REQUIRE(res.witness.has_value());
    CHECK(res.best_residual <= 1e-12);
    CHECK(res.best_defect == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(res.steps_used == 1); // the seed already sits at zero residual
    CHECK(res.witness->support.size() == 2);

    CHECK(code_of([&] {
        hrlab::povm_perturbation_search(hrlab::spectral_decompose(t), {}, opts);
    }) == ErrorCode::InvalidArgument);
}
