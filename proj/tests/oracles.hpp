// Test-only oracles and generators. Nothing here calls into the code paths it
// is used to check.

#pragma once

#include "qtff/matcore.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace qtff::testing {

inline CMatrix random_complex(std::mt19937_64& rng, Eigen::Index d) {
    std::normal_distribution<double> n(0.0, 1.0);
    CMatrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(n(rng), n(rng));
    return m;
}

inline CMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index d) {
    const CMatrix a = random_complex(rng, d);
    return 0.5 * (a + a.adjoint());
}

inline CMatrix random_unitary(std::mt19937_64& rng, Eigen::Index d) {
    Eigen::HouseholderQR<CMatrix> qr(random_complex(rng, d));
    return qr.householderQ() * CMatrix::Identity(d, d);
}

// Full-rank density matrix with smallest eigenvalue at least `floor`.
inline CMatrix random_density(std::mt19937_64& rng, Eigen::Index d, double floor = 1e-3) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd w(d);
    for (Eigen::Index i = 0; i < d; ++i) w(i) = floor + u(rng);
    w /= w.sum();
    const CMatrix uu = random_unitary(rng, d);
    CMatrix rho = uu * w.cast<Complex>().asDiagonal() * uu.adjoint();
    return 0.5 * (rho + rho.adjoint());
}

// Taylor series exponential, independent of any eigendecomposition.
inline CMatrix expm_taylor(const CMatrix& a) {
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    while (norm / std::pow(2.0, squarings) > 0.5) ++squarings;
    const CMatrix x = a / std::pow(2.0, squarings);
    CMatrix term = CMatrix::Identity(a.rows(), a.cols());
    CMatrix sum = term;
    for (int k = 1; k < 30; ++k) {
        term = term * x / static_cast<double>(k);
        sum += term;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

// Random positive integer weights, `zeros` of them forced to 0.
inline std::vector<std::int64_t> random_weights(std::mt19937_64& rng, std::size_t n, int max_w = 20) {
    std::uniform_int_distribution<int> w(0, max_w);
    std::vector<std::int64_t> v(n);
    do {
        for (auto& x : v) x = w(rng);
    } while (std::accumulate(v.begin(), v.end(), std::int64_t{0}) == 0);
    return v;
}

// x ≻ y for x = wx / sum(wx), y = wy / sum(wy) via subset enumeration: for
// each k the largest k-subset sum of x must dominate that of y. Exact integer
// arithmetic by cross-multiplying the two denominators.
inline bool brute_force_majorizes(const std::vector<std::int64_t>& wx, const std::vector<std::int64_t>& wy) {
    std::vector<std::int64_t> x = wx, y = wy;
    const std::size_t n = std::max(x.size(), y.size());
    x.resize(n, 0);
    y.resize(n, 0);
    const std::int64_t sx = std::accumulate(x.begin(), x.end(), std::int64_t{0});
    const std::int64_t sy = std::accumulate(y.begin(), y.end(), std::int64_t{0});
    std::vector<std::int64_t> best_x(n + 1, 0), best_y(n + 1, 0);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::int64_t ax = 0, ay = 0;
        std::size_t k = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                ax += x[i];
                ay += y[i];
                ++k;
            }
        }
        best_x[k] = std::max(best_x[k], ax);
        best_y[k] = std::max(best_y[k], ay);
    }
    for (std::size_t k = 1; k <= n; ++k) {
        if (best_x[k] * sy < best_y[k] * sx) return false;
    }
    return true;
}

// Strict-interior y ≺ x pair from a doubly stochastic average of x, built with
// T-transforms: y = (1 - t) x + t P x on random coordinate pairs.
inline std::vector<double> t_transform_chain(std::mt19937_64& rng, std::vector<double> x, int steps) {
    std::uniform_int_distribution<std::size_t> idx(0, x.size() - 1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int s = 0; s < steps; ++s) {
        const std::size_t i = idx(rng);
        const std::size_t j = idx(rng);
        if (i == j) continue;
        const double t = u(rng);
        const double xi = x[i], xj = x[j];
        x[i] = (1 - t) * xi + t * xj;
        x[j] = (1 - t) * xj + t * xi;
    }
    return x;
}

}  // namespace qtff::testing
