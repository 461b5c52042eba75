#pragma once

#include <cstdint>
#include <random>

#include "hrlab/matrix_core.hpp"
#include "hrlab/povm.hpp"

namespace hrlab {

// Seeded generator for every randomized routine in the library. Trials are
// keyed as mix(seed, index) so fan-out order never changes the draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        while (u == 0.0) u = uniform();
        const double v = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        spare_ = r * std::sin(2.0 * M_PI * v);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * v);
    }

    Complex gaussian_complex() { return {gaussian(), gaussian()}; }

    Complex unit_disk() {
        while (true) {
            const Complex z(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
            if (std::abs(z) <= 1.0) return z;
        }
    }

    ComplexMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
        ComplexMatrix m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = gaussian_complex();
        return m;
    }

    ComplexMatrix random_unitary(Eigen::Index d) {
        const ComplexMatrix g = gaussian_matrix(d, d);
        Eigen::HouseholderQR<ComplexMatrix> qr(g);
        ComplexMatrix q = qr.householderQ();
        const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (Eigen::Index i = 0; i < d; ++i) {
            const Complex ri = r(i, i);
            q.col(i) *= (std::abs(ri) > 0.0) ? ri / std::abs(ri) : Complex(1.0, 0.0);
        }
        return q;
    }

    // Normal matrix with eigenvalues in the disk of the given radius and a
    // floor on their pairwise distances, so downstream clustering is stable.
    NormalOperator random_normal(Eigen::Index d, double radius = 1.0, double min_gap = 0.05) {
        ComplexVector ev(d);
        for (Eigen::Index i = 0; i < d;) {
            const Complex cand = radius * unit_disk();
            bool ok = true;
            for (Eigen::Index j = 0; j < i; ++j) ok = ok && std::abs(cand - ev(j)) >= min_gap;
            if (ok) ev(i++) = cand;
        }
        const ComplexMatrix q = random_unitary(d);
        NormalOperator out;
        out.matrix = q * ev.asDiagonal() * q.adjoint();
        out.eigenvalues = ev;
        out.eigenbasis = q;
        return out;
    }

    ComplexMatrix random_projection(Eigen::Index d, Eigen::Index rank) {
        const ComplexMatrix q = random_unitary(d);
        const ComplexMatrix b = q.leftCols(rank);
        return b * b.adjoint();
    }

    // Full-rank smeared measure: normalized random Gram effects over distinct
    // support points.
    Povm random_povm(Eigen::Index d, int k, double radius = 1.0, double min_spacing = 0.1) {
        Povm f;
        while (static_cast<int>(f.support.size()) < k) {
            const Complex cand = radius * unit_disk();
            bool ok = true;
            for (const Complex& z : f.support) ok = ok && std::abs(cand - z) >= min_spacing;
            if (ok) f.support.push_back(cand);
        }
        ComplexMatrix sum = ComplexMatrix::Zero(d, d);
        for (int j = 0; j < k; ++j) {
            const ComplexMatrix g = gaussian_matrix(d, d);
            f.effects.push_back(g * g.adjoint());
            sum += f.effects.back();
        }
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (sum + sum.adjoint()));
        Eigen::VectorXd inv = es.eigenvalues();
        for (Eigen::Index i = 0; i < d; ++i) inv(i) = 1.0 / std::sqrt(inv(i));
        const ComplexMatrix w = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
        for (auto& e : f.effects) e = w * e * w;
        return f;
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace hrlab
