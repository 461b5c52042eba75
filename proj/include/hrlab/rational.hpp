#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "hrlab/errors.hpp"

namespace hrlab {

// Angle stored as an exact fraction of a full revolution, reduced mod 1.
// Invariant: 0 <= num < den, gcd(num, den) == 1, den >= 1. All arithmetic is
// exact; overflow of the 64-bit reduced form is reported rather than wrapped.
class Turn {
public:
    Turn() = default;

    Turn(std::int64_t num, std::int64_t den) {
        if (den == 0) fail(ErrorCode::InvalidArgument, "turn denominator must be nonzero");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        num %= den;
        if (num < 0) num += den;
        const std::int64_t g = std::gcd(num, den);
        num_ = num / g;
        den_ = den / g;
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }

    // k * t mod 1, exact for any integer k.
    Turn scaled(std::int64_t k) const {
        __int128 n = static_cast<__int128>(k) * num_;
        __int128 d = den_;
        n %= d;
        if (n < 0) n += d;
        return from_reduced(n, d);
    }

    // True when k * t is an integer, i.e. the point's sign lies in the group
    // of k-th roots of unity relative to the reference ray.
    bool integer_multiple(std::int64_t k) const {
        return (static_cast<__int128>(k) * num_) % den_ == 0;
    }

    Turn operator+(const Turn& o) const {
        __int128 d = static_cast<__int128>(den_) * o.den_;
        __int128 n = static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_;
        n %= d;
        return from_reduced(n, d);
    }

    Turn operator-(const Turn& o) const {
        __int128 d = static_cast<__int128>(den_) * o.den_;
        __int128 n = static_cast<__int128>(num_) * o.den_ - static_cast<__int128>(o.num_) * den_;
        n %= d;
        if (n < 0) n += d;
        return from_reduced(n, d);
    }

    bool operator==(const Turn& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Turn& o) const { return !(*this == o); }
    bool operator<(const Turn& o) const {
        return static_cast<__int128>(num_) * o.den_ < static_cast<__int128>(o.num_) * den_;
    }

    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

private:
    static Turn from_reduced(__int128 n, __int128 d) {
        __int128 g = gcd128(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        if (n > INT64_MAX || d > INT64_MAX)
            fail(ErrorCode::InvalidArgument, "turn arithmetic overflow");
        Turn t;
        t.num_ = static_cast<std::int64_t>(n);
        t.den_ = static_cast<std::int64_t>(d);
        return t;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) {
            __int128 r = a % b;
            a = b;
            b = r;
        }
        return a < 0 ? -a : a;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

} // namespace hrlab
