#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "hrlab/rational.hpp"

namespace hrlab {

// Point of the complex plane in polar form with an exact rational angle.
// Zero modulus forces turn 0 so equality of points is plain field equality.
// Equal-modulus grouping throughout the library uses exact equality of the
// stored modulus; callers starting from float data must quantize first.
struct ExactPoint {
    double modulus = 0.0;
    Turn turn;

    ExactPoint() = default;
    ExactPoint(double mod, Turn t) : modulus(mod), turn(t) {
        if (!(mod >= 0.0)) fail(ErrorCode::InvalidArgument, "point modulus must be >= 0");
        if (mod == 0.0) turn = Turn();
    }

    static ExactPoint real(double x) {
        return x >= 0.0 ? ExactPoint(x, Turn(0, 1)) : ExactPoint(-x, Turn(1, 2));
    }

    bool operator==(const ExactPoint& o) const { return modulus == o.modulus && turn == o.turn; }
    bool operator!=(const ExactPoint& o) const { return !(*this == o); }

    std::complex<double> to_complex() const { return modulus * unit_phase(turn); }

    // Quarter turns map to exact axis points; everything else goes through libm.
    static std::complex<double> unit_phase(const Turn& t) {
        if (t.den() == 1) return {1.0, 0.0};
        if (t.den() == 2) return {-1.0, 0.0};
        if (t.den() == 4) return t.num() == 1 ? std::complex<double>{0.0, 1.0}
                                             : std::complex<double>{0.0, -1.0};
        const double a = 2.0 * M_PI * t.value();
        return {std::cos(a), std::sin(a)};
    }
};

using PointSet = std::vector<ExactPoint>;

// Value of the biexponent monomial conj(z)^m z^n at an exact point.
inline std::complex<double> monomial_value(const ExactPoint& z, int m, int n) {
    if (m + n == 0) return {1.0, 0.0};
    if (z.modulus == 0.0) return {0.0, 0.0};
    const double r = std::pow(z.modulus, m + n);
    return r * ExactPoint::unit_phase(z.turn.scaled(n - m));
}

inline bool contains_point(const PointSet& xs, const ExactPoint& p) {
    for (const auto& x : xs)
        if (x == p) return true;
    return false;
}

} // namespace hrlab
