#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "hrlab/matrix_core.hpp"
#include "hrlab/povm.hpp"
#include "hrlab/rng.hpp"

using hrlab::Complex;
using hrlab::ComplexMatrix;
using hrlab::Error;
using hrlab::ErrorCode;
using hrlab::NormalOperator;
using hrlab::Povm;
using hrlab::Rng;

namespace {

ComplexMatrix diag2(Complex a, Complex b) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

// scalar weights as a measure on C^1
Povm scalar_povm(std::initializer_list<std::pair<double, double>> atoms) {
    Povm f;
    for (const auto& [x, w] : atoms) {
        f.support.push_back(Complex(x, 0.0));
        f.effects.push_back(ComplexMatrix::Constant(1, 1, Complex(w, 0.0)));
    }
    return f;
}

} // namespace

TEST_CASE("validation accepts a projective measure and rejects broken ones") {
    Povm f;
    f.support = {Complex(1, 0), Complex(0, 1)};
    f.effects = {diag2(1.0, 0.0), diag2(0.0, 1.0)};
    CHECK_NOTHROW(hrlab::validate_povm(f));

    Povm dup = f;
    dup.support[1] = dup.support[0];
    CHECK_THROWS_AS(hrlab::validate_povm(dup), Error);

    Povm bad_sum = f;
    bad_sum.effects[1] = diag2(0.0, 0.5);
    CHECK_THROWS_AS(hrlab::validate_povm(bad_sum), Error);

    Povm not_psd = f;
    not_psd.effects[0] = diag2(1.5, 0.0);
    not_psd.effects[1] = diag2(-0.5, 1.0);
    CHECK_THROWS_AS(hrlab::validate_povm(not_psd), Error);
}

TEST_CASE("moment operator of a projective measure is the mixed power") {
    Povm f;
    f.support = {Complex(1, 0), Complex(0, 1)};
    f.effects = {diag2(1.0, 0.0), diag2(0.0, 1.0)};

    // conj(z)^1 z^2 at 1 and i: 1 and conj(i) i^2 = i
    const ComplexMatrix m12 = hrlab::moment_operator(f, 1, 2);
    CHECK(std::abs(m12(0, 0) - Complex(1, 0)) < 1e-15);
    CHECK(std::abs(m12(1, 1) - Complex(0, 1)) < 1e-15);
    CHECK(std::abs(m12(0, 1)) < 1e-15);

    const ComplexMatrix m22 = hrlab::moment_operator(f, 2, 2);
    CHECK(hrlab::op_norm(m22 - ComplexMatrix::Identity(2, 2)) < 1e-15);

    CHECK_THROWS_AS(hrlab::moment_operator(f, -1, 0), Error);
}

TEST_CASE("ucp image is unital, linear and positive") {
    Rng rng(Rng::mix(11, 0));
    const Povm f = rng.random_povm(3, 4);
    CHECK_NOTHROW(hrlab::validate_povm(f));

    const ComplexMatrix unit = hrlab::ucp_apply(f, [](Complex) { return Complex(1, 0); });
    CHECK(hrlab::op_norm(unit - ComplexMatrix::Identity(3, 3)) < 1e-12);

    auto g1 = [](Complex z) { return z; };
    auto g2 = [](Complex z) { return z * z; };
    const ComplexMatrix lhs =
        hrlab::ucp_apply(f, [&](Complex z) { return 2.0 * g1(z) - 3.0 * g2(z); });
    const ComplexMatrix rhs = 2.0 * hrlab::ucp_apply(f, g1) - 3.0 * hrlab::ucp_apply(f, g2);
    CHECK(hrlab::op_norm(lhs - rhs) < 1e-12);

    // nonnegative symbol, PSD image
    const ComplexMatrix pos = hrlab::ucp_apply(f, [](Complex z) { return Complex(std::norm(z), 0.0); });
    CHECK(hrlab::psd_gap(pos) > -1e-12);
}

TEST_CASE("schwarz inequality for the first moments") {
    for (std::uint64_t trial = 0; trial < 25; ++trial) {
        Rng rng(Rng::mix(23, trial));
        const Povm f = rng.random_povm(2 + trial % 3, 3 + static_cast<int>(trial % 3));
        const ComplexMatrix m01 = hrlab::moment_operator(f, 0, 1);
        const ComplexMatrix m11 = hrlab::moment_operator(f, 1, 1);
        CHECK(hrlab::psd_gap(m11 - m01.adjoint() * m01) > -1e-10);
    }
}

TEST_CASE("variance operator separates spectral from smeared, real support") {
    // projective measure: variance vanishes
    Povm spectral;
    spectral.support = {Complex(1, 0), Complex(-1, 0)};
    spectral.effects = {diag2(1.0, 0.0), diag2(0.0, 1.0)};
    const ComplexMatrix v_spec =
        hrlab::moment_operator(spectral, 1, 1) -
        hrlab::moment_operator(spectral, 0, 1).adjoint() * hrlab::moment_operator(spectral, 0, 1);
    CHECK(hrlab::op_norm(v_spec) < 1e-14);
    CHECK(hrlab::is_spectral(spectral));

    // scalar smeared measure: variance is the classical one, strictly positive
    const Povm smeared = scalar_povm({{-1.0, 1.0 / 3.0}, {0.0, 0.5}, {2.0, 1.0 / 6.0}});
    const ComplexMatrix v_sm =
        hrlab::moment_operator(smeared, 1, 1) -
        hrlab::moment_operator(smeared, 0, 1).adjoint() * hrlab::moment_operator(smeared, 0, 1);
    CHECK(std::abs(v_sm(0, 0) - Complex(1.0, 0.0)) < 1e-14); // second moment 1, mean 0
    CHECK_FALSE(hrlab::is_spectral(smeared));
    CHECK(hrlab::spectrality_defect(smeared) > 0.2);
}

TEST_CASE("spectral measure construction merges multiplicities") {
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    m(2, 2) = 2.0;
    const NormalOperator n = hrlab::spectral_decompose(m);
    const Povm f = hrlab::spectral_measure_of(n);

    REQUIRE(f.atoms() == 2);
    CHECK(hrlab::is_spectral(f));
    CHECK(hrlab::is_spectral_measure_of(f, n));
    // the multiplicity-2 effect has trace 2
    double traces[2] = {std::real(f.effects[0].trace()), std::real(f.effects[1].trace())};
    std::sort(traces, traces + 2);
    CHECK(traces[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(traces[1] == doctest::Approx(2.0).epsilon(1e-12));

    // moving one support point breaks the association
    Povm shifted = f;
    shifted.support[0] += Complex(0.1, 0.0);
    CHECK_FALSE(hrlab::is_spectral_measure_of(shifted, n));
}

TEST_CASE("eigenvalues in the dead zone refuse to cluster") {
    const NormalOperator n = hrlab::spectral_decompose(diag2(0.0, 5e-10));
    try {
        hrlab::spectral_measure_of(n);
        FAIL("expected ClusterAmbiguity");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ClusterAmbiguity);
    }
}

TEST_CASE("canonical dilation transports effects and moments exactly") {
    Rng rng(Rng::mix(31, 2));
    const Povm f = rng.random_povm(2, 3);
    const hrlab::Dilation dil = hrlab::naimark_dilate(f);

    CHECK(dil.big_dim == 6);
    CHECK(hrlab::op_norm(dil.isometry.adjoint() * dil.isometry -
                         ComplexMatrix::Identity(2, 2)) < 1e-12);
    for (std::size_t j = 0; j < f.atoms(); ++j)
        CHECK(hrlab::op_norm(dil.isometry.adjoint() * dil.projections[j] * dil.isometry -
                             f.effects[j]) < 1e-12);

    for (const auto& [m, p] : {std::pair{1, 2}, std::pair{2, 2}, std::pair{0, 3}}) {
        const ComplexMatrix big = hrlab::func_calc(dil.normal, [m = m, p = p](Complex z) {
            return std::pow(std::conj(z), m) * std::pow(z, p);
        });
        CHECK(hrlab::op_norm(dil.isometry.adjoint() * big * dil.isometry -
                             hrlab::moment_operator(f, m, p)) < 1e-11);
    }

    // P = V V* commutes with N exactly when the measure was spectral
    const ComplexMatrix pn = dil.projection_p * dil.normal.matrix;
    const ComplexMatrix np = dil.normal.matrix * dil.projection_p;
    CHECK(hrlab::op_norm(pn - np) > 1e-3);
}

TEST_CASE("minimal dilation of a spectral measure is no dilation at all") {
    Rng rng(Rng::mix(37, 5));
    const NormalOperator n = rng.random_normal(4);
    const Povm f = hrlab::spectral_measure_of(n);

    const hrlab::Dilation dil = hrlab::naimark_dilate(f, true);
    CHECK(dil.big_dim == 4);
    for (std::size_t j = 0; j < f.atoms(); ++j)
        CHECK(hrlab::op_norm(dil.isometry.adjoint() * dil.projections[j] * dil.isometry -
                             f.effects[j]) < 1e-11);
    const ComplexMatrix pn = dil.projection_p * dil.normal.matrix;
    const ComplexMatrix np = dil.normal.matrix * dil.projection_p;
    CHECK(hrlab::op_norm(pn - np) < 1e-11);
}
