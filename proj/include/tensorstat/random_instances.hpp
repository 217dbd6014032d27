#pragma once

// Seeded generators of random tensors for property checks.

#include "tensorstat/linalg.hpp"
#include "tensorstat/stats.hpp"
#include "tensorstat/tensor.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

namespace tensorstat::instances {

inline std::vector<double> uniform_entries(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                                           double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v)
        x = u(rng);
    return v;
}

inline DenseTensor tensor(std::mt19937_64& rng, const Shape& shape) {
    return DenseTensor(shape, uniform_entries(rng, shape.nstar()));
}

inline SquareTensor square(std::mt19937_64& rng, const Shape& row_shape) {
    const std::size_t n = row_shape.nstar();
    return SquareTensor(row_shape, uniform_entries(rng, n * n));
}

/// Diagonally dominant, so well conditioned: n* I + U(-1, 1) noise.
inline SquareTensor well_conditioned(std::mt19937_64& rng, const Shape& row_shape) {
    const std::size_t n = row_shape.nstar();
    auto data = uniform_entries(rng, n * n);
    for (std::size_t i = 0; i < n; ++i)
        data[i + n * i] += static_cast<double>(n);
    return SquareTensor(row_shape, std::move(data));
}

/// SPD with unit diagonal: D^{-1/2} (A A^T + n* I) D^{-1/2}.
inline Eigen::MatrixXd spd_matrix(std::mt19937_64& rng, std::size_t n) {
    const auto en = static_cast<Eigen::Index>(n);
    const auto entries = uniform_entries(rng, n * n);
    const Eigen::Map<const Eigen::MatrixXd> a(entries.data(), en, en);
    Eigen::MatrixXd m = a * a.transpose() + static_cast<double>(n) * Eigen::MatrixXd::Identity(en, en);
    const Eigen::VectorXd d = m.diagonal().array().rsqrt();
    m = d.asDiagonal() * m * d.asDiagonal();
    return 0.5 * (m + m.transpose());
}

inline SquareTensor spd(std::mt19937_64& rng, const Shape& row_shape) {
    return unmatricize(spd_matrix(rng, row_shape.nstar()), row_shape);
}

inline KroneckerFactors spd_factors(std::mt19937_64& rng, const Shape& shape) {
    std::vector<Eigen::MatrixXd> factors;
    for (std::size_t d : shape.dims())
        factors.push_back(spd_matrix(rng, d));
    return KroneckerFactors(std::move(factors));
}

/// N observations with entries U(lo, hi) plus a random per-cell offset.
inline SampleSet sample_set(std::mt19937_64& rng, const Shape& shape, std::size_t count) {
    const auto offset = uniform_entries(rng, shape.nstar(), -2.0, 2.0);
    std::vector<DenseTensor> obs;
    for (std::size_t k = 0; k < count; ++k) {
        auto v = uniform_entries(rng, shape.nstar());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] += offset[i];
        obs.emplace_back(shape, std::move(v));
    }
    return SampleSet(shape, std::move(obs));
}

}  // namespace tensorstat::instances
