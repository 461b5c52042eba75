#include "hrlab/exponents.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace hrlab {

namespace {

void require_valid(const ExponentSet& xs, const char* who) {
    if (xs.empty()) fail(ErrorCode::InvalidArgument, std::string(who) + ": empty exponent set");
    for (const auto& [m, n] : xs)
        if (m < 0 || n < 0)
            fail(ErrorCode::InvalidArgument, std::string(who) + ": negative exponent");
}

bool separates_pair(const ExponentSet& xs, const ExactPoint& a, const ExactPoint& b) {
    if (a.modulus != b.modulus) {
        for (const auto& [m, n] : xs)
            if (m + n >= 1) return true;
        return false;
    }
    const Turn dt = a.turn - b.turn;
    for (const auto& [m, n] : xs) {
        if (m == n) continue;
        if (!dt.integer_multiple(std::abs(n - m))) return true;
    }
    return false;
}

} // namespace

int gcd_diffs(const ExponentSet& xs) {
    require_valid(xs, "gcd_diffs");
    int g = 0;
    for (const auto& [m, n] : xs) g = std::gcd(g, std::abs(n - m));
    if (g == 0)
        fail(ErrorCode::AllDiagonal, "gcd_diffs: every pair is diagonal, gcd undefined");
    return g;
}

std::optional<SigmaTriple> sigma_condition(const ExponentSet& xs) {
    require_valid(xs, "sigma_condition");
    std::optional<SigmaTriple> best;
    for (const auto& [p, q] : xs) {
        if (p == q) continue;
        for (const auto& [r, r2] : xs) {
            if (r != r2) continue;
            if (p + q >= 2 * r) continue;
            SigmaTriple cand{p, q, r};
            if (!best || std::tie(cand.p, cand.q, cand.r) < std::tie(best->p, best->q, best->r))
                best = cand;
        }
    }
    return best;
}

bool generates(const ExponentSet& xs, const PointSet& x) {
    require_valid(xs, "generates");
    if (x.empty()) fail(ErrorCode::InvalidArgument, "generates: empty point set");
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            if (x[i] == x[j])
                fail(ErrorCode::InvalidArgument, "generates: duplicate point in X");
            if (!separates_pair(xs, x[i], x[j])) return false;
        }
    return true;
}

bool sector_condition(int p, int q, int r, const PointSet& x) {
    if (p == q || p + q >= 2 * r)
        fail(ErrorCode::InvalidArgument, "sector_condition: (p, q, r) is not a sigma triple");
    if (x.empty()) fail(ErrorCode::InvalidArgument, "sector_condition: empty point set");
    const int n = std::abs(q - p);
    for (const auto& z : x)
        if (z.modulus == 0.0) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            const Turn dt = x[i].turn - x[j].turn;
            if (!dt.is_zero() && dt.integer_multiple(n)) return false;
        }
    return true;
}

HyperrigidVerdict hyperrigid_sufficient(const ExponentSet& xs, const PointSet& x) {
    require_valid(xs, "hyperrigid_sufficient");
    HyperrigidVerdict out;
    const auto sigma = sigma_condition(xs);

    ExponentSet distinct = xs;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    if (sigma) {
        // sigma has p != q, so the off-diagonal part is nonempty and gcd_diffs
        // cannot refuse.
        if (gcd_diffs(xs) == 1) {
            out.kind = HyperrigidVerdict::Kind::ByGcd;
            out.witness = sigma;
            return out;
        }
        if (distinct.size() == 2 && sector_condition(sigma->p, sigma->q, sigma->r, x)) {
            out.kind = HyperrigidVerdict::Kind::BySector;
            out.witness = sigma;
            return out;
        }
    }

    out.kind = HyperrigidVerdict::Kind::Unknown;
    bool has_diagonal = false;
    for (const auto& [m, n] : xs) has_diagonal = has_diagonal || (m == n);
    if (!has_diagonal)
        out.warnings.push_back(
            {WarningCode::NoDiagonalPair,
             "no diagonal pair (r, r): purely off-diagonal families admit non-extreme "
             "representing measures and the sufficiency arguments do not apply"});
    bool low = false;
    for (const auto& [r, r2] : xs) {
        if (r != r2) continue;
        for (const auto& [m, n] : xs)
            if (m != n && 2 * r <= m + n) low = true;
    }
    if (low)
        out.warnings.push_back(
            {WarningCode::LowDiagonal,
             "a diagonal pair (r, r) sits on or below the line m + n = p + q of an "
             "off-diagonal pair: matching moments no longer force sharp measures, and "
             "self-adjoint counterexamples exist; for odd p + q the family still "
             "generates, while the even case is subtler and no verdict is drawn"});
    if (!generates(xs, x))
        out.warnings.push_back({WarningCode::NotGenerating,
                                "the monomials do not separate the points of X"});
    return out;
}

const char* warning_code_name(WarningCode c) {
    switch (c) {
        case WarningCode::NoDiagonalPair: return "NoDiagonalPair";
        case WarningCode::LowDiagonal: return "LowDiagonal";
        case WarningCode::NotGenerating: return "NotGenerating";
    }
    return "Unknown";
}

} // namespace hrlab
