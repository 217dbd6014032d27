#pragma once

#include "tensorstat/error.hpp"
#include "tensorstat/tensor.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace tensorstat {

/// Observations of a random tensor, all of one shape. May be empty (a
/// zero-count draw); the estimators state their own minimum size.
class SampleSet {
public:
    explicit SampleSet(Shape shape) : shape_(std::move(shape)) {}

    SampleSet(Shape shape, std::vector<DenseTensor> observations)
        : shape_(std::move(shape)), observations_(std::move(observations)) {
        for (std::size_t k = 0; k < observations_.size(); ++k)
            if (!(observations_[k].shape() == shape_))
                throw ShapeError("observation " + std::to_string(k) + " has shape " +
                                 observations_[k].shape().to_string() + ", expected " +
                                 shape_.to_string());
    }

    /// Shape taken from the first observation.
    static SampleSet from(std::vector<DenseTensor> observations) {
        if (observations.empty())
            throw ArgumentError("cannot infer the shape of an empty sample set");
        Shape shape = observations.front().shape();
        return SampleSet(std::move(shape), std::move(observations));
    }

    const Shape& shape() const noexcept { return shape_; }
    std::size_t size() const noexcept { return observations_.size(); }
    bool empty() const noexcept { return observations_.empty(); }
    const DenseTensor& operator[](std::size_t k) const { return observations_[k]; }
    const std::vector<DenseTensor>& observations() const noexcept { return observations_; }

    auto begin() const { return observations_.begin(); }
    auto end() const { return observations_.end(); }

private:
    Shape shape_;
    std::vector<DenseTensor> observations_;
};

enum class Normalization { unbiased, mle };

struct CovTensor {
    SquareTensor value;
    Normalization normalization;
};

/// Lengths n x m; entry (i, j) = cov(X_i, Y_j).
struct CrossCovTensor {
    DenseTensor value;
    Shape row_shape;
    Shape col_shape;
    Normalization normalization;

    double operator()(std::size_t row, std::size_t col) const {
        return value[row + row_shape.nstar() * col];
    }
};

struct CorrTensor {
    SquareTensor value;
    std::vector<double> stddev;  // per cell, column-major
};

struct CrossCorrTensor {
    DenseTensor value;
    Shape row_shape;
    Shape col_shape;
    std::vector<double> row_stddev;
    std::vector<double> col_stddev;

    double operator()(std::size_t row, std::size_t col) const {
        return value[row + row_shape.nstar() * col];
    }
};

/// What correlation does with a cell of zero sample variance.
enum class DegeneratePolicy {
    error,       ///< throw DegenerateVarianceError
    substitute,  ///< 1 on the self diagonal, 0 elsewhere
};

namespace detail {

inline double normalizer(std::size_t n, Normalization norm, const char* op) {
    if (n == 0)
        throw ArgumentError(std::string(op) + ": empty sample set");
    if (norm == Normalization::unbiased) {
        if (n < 2)
            throw ArgumentError(std::string(op) +
                                ": unbiased normalization needs at least 2 observations");
        return 1.0 / static_cast<double>(n - 1);
    }
    return 1.0 / static_cast<double>(n);
}

inline std::vector<double> deviations(const SampleSet& s, const DenseTensor& mean) {
    const std::size_t n = s.shape().nstar();
    std::vector<double> dev(s.size() * n);
    for (std::size_t k = 0; k < s.size(); ++k)
        for (std::size_t i = 0; i < n; ++i)
            dev[k * n + i] = s[k][i] - mean[i];
    return dev;
}

/// c * sum_k dx_k (outer) dy_k, accumulated in observation order.
inline std::vector<double> outer_sum(const std::vector<double>& dx, std::size_t nx,
                                     const std::vector<double>& dy, std::size_t ny,
                                     std::size_t count, double c) {
    std::vector<double> acc(nx * ny, 0.0);
    for (std::size_t k = 0; k < count; ++k) {
        const double* x = dx.data() + k * nx;
        const double* y = dy.data() + k * ny;
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i)
                acc[i + nx * j] += x[i] * y[j];
    }
    for (double& v : acc)
        v *= c;
    return acc;
}

inline std::string index_string(const std::vector<std::size_t>& index) {
    std::string s = "(";
    for (std::size_t k = 0; k < index.size(); ++k)
        s += (k ? "," : "") + std::to_string(index[k]);
    return s + ")";
}

/// Per-cell standard deviation (1/N normalization); negative marks a
/// degenerate cell whose variance is zero up to round-off.
inline std::vector<double> cell_stddev(const SampleSet& s, const DenseTensor& mean,
                                       const std::vector<double>& dev) {
    const std::size_t n = s.shape().nstar();
    std::vector<double> sd(n);
    for (std::size_t i = 0; i < n; ++i) {
        double ss = 0.0;
        double magnitude = 0.0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            ss += dev[k * n + i] * dev[k * n + i];
            magnitude = std::max(magnitude, std::abs(s[k][i]));
        }
        const double var = ss / static_cast<double>(s.size());
        const double floor = 64.0 * DBL_EPSILON * std::max(magnitude, std::abs(mean[i]));
        sd[i] = (var > floor * floor) ? std::sqrt(var) : -1.0;
    }
    return sd;
}

}  // namespace detail

inline DenseTensor mean_tensor(const SampleSet& s) {
    if (s.empty())
        throw ArgumentError("mean_tensor: empty sample set");
    const std::size_t n = s.shape().nstar();
    std::vector<double> acc(n, 0.0);
    for (const auto& x : s)
        for (std::size_t i = 0; i < n; ++i)
            acc[i] += x[i];
    const double inv = 1.0 / static_cast<double>(s.size());
    for (double& v : acc)
        v *= inv;
    return DenseTensor(s.shape(), std::move(acc));
}

/// Sample cross-covariance tensor, observations paired by position.
inline CrossCovTensor cross_covariance(const SampleSet& sx, const SampleSet& sy,
                                       Normalization norm = Normalization::unbiased) {
    if (sx.size() != sy.size())
        throw ArgumentError("cross_covariance: sample counts " + std::to_string(sx.size()) +
                            " and " + std::to_string(sy.size()) + " differ");
    const double c = detail::normalizer(sx.size(), norm, "cross_covariance");
    const auto dx = detail::deviations(sx, mean_tensor(sx));
    const auto dy = detail::deviations(sy, mean_tensor(sy));
    auto acc = detail::outer_sum(dx, sx.shape().nstar(), dy, sy.shape().nstar(), sx.size(), c);
    return CrossCovTensor{DenseTensor(sx.shape().concat(sy.shape()), std::move(acc)),
                          sx.shape(), sy.shape(), norm};
}

/// Sample covariance tensor. The result is symmetrized, so it is an exact
/// fixed point of transpose2d.
inline CovTensor covariance(const SampleSet& s, Normalization norm = Normalization::unbiased) {
    const double c = detail::normalizer(s.size(), norm, "covariance");
    const std::size_t n = s.shape().nstar();
    const auto dev = detail::deviations(s, mean_tensor(s));
    auto acc = detail::outer_sum(dev, n, dev, n, s.size(), c);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = j + 1; i < n; ++i) {
            const double avg = 0.5 * (acc[i + n * j] + acc[j + n * i]);
            acc[i + n * j] = avg;
            acc[j + n * i] = avg;
        }
    return CovTensor{SquareTensor(s.shape(), std::move(acc)), norm};
}

/// Covariance matrix of vec(X), computed directly in vector space.
inline Eigen::MatrixXd covariance_of_vec(const SampleSet& s,
                                         Normalization norm = Normalization::unbiased) {
    const double c = detail::normalizer(s.size(), norm, "covariance_of_vec");
    const auto rows = static_cast<Eigen::Index>(s.size());
    const auto cols = static_cast<Eigen::Index>(s.shape().nstar());
    Eigen::MatrixXd x(rows, cols);
    for (Eigen::Index k = 0; k < rows; ++k)
        x.row(k) = vec(s[static_cast<std::size_t>(k)]).transpose();
    const Eigen::RowVectorXd mu = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - mu;
    return c * (centered.transpose() * centered);
}

/// Correlation tensor: covariance of the cellwise-standardized variables.
/// The diagonal is set to exactly 1.
inline CorrTensor correlation(const SampleSet& s,
                              DegeneratePolicy policy = DegeneratePolicy::error) {
    if (s.empty())
        throw ArgumentError("correlation: empty sample set");
    const std::size_t n = s.shape().nstar();
    const DenseTensor mean = mean_tensor(s);
    const auto dev = detail::deviations(s, mean);
    const auto sd = detail::cell_stddev(s, mean, dev);
    if (policy == DegeneratePolicy::error)
        for (std::size_t i = 0; i < n; ++i)
            if (sd[i] < 0.0) {
                const auto index = s.shape().multi_index(i);
                throw DegenerateVarianceError(
                    "correlation: cell " + detail::index_string(index) + " has zero variance",
                    index);
            }
    auto acc = detail::outer_sum(dev, n, dev, n, s.size(), 1.0 / static_cast<double>(s.size()));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            double& r = acc[i + n * j];
            if (i == j)
                r = 1.0;
            else if (sd[i] < 0.0 || sd[j] < 0.0)
                r = 0.0;
            else
                r = std::clamp(r / (sd[i] * sd[j]), -1.0, 1.0);
        }
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = j + 1; i < n; ++i)
            acc[j + n * i] = acc[i + n * j];
    std::vector<double> stddev(sd);
    for (double& v : stddev)
        v = std::max(v, 0.0);
    return CorrTensor{SquareTensor(s.shape(), std::move(acc)), std::move(stddev)};
}

inline CrossCorrTensor cross_correlation(const SampleSet& sx, const SampleSet& sy,
                                         DegeneratePolicy policy = DegeneratePolicy::error) {
    if (sx.size() != sy.size())
        throw ArgumentError("cross_correlation: sample counts differ");
    if (sx.empty())
        throw ArgumentError("cross_correlation: empty sample set");
    const DenseTensor mx = mean_tensor(sx);
    const DenseTensor my = mean_tensor(sy);
    const auto dx = detail::deviations(sx, mx);
    const auto dy = detail::deviations(sy, my);
    auto sdx = detail::cell_stddev(sx, mx, dx);
    auto sdy = detail::cell_stddev(sy, my, dy);
    if (policy == DegeneratePolicy::error) {
        auto check = [](const SampleSet& s, const std::vector<double>& sd, const char* side) {
            for (std::size_t i = 0; i < sd.size(); ++i)
                if (sd[i] < 0.0) {
                    const auto index = s.shape().multi_index(i);
                    throw DegenerateVarianceError(std::string("cross_correlation: ") + side +
                                                      " cell " + detail::index_string(index) +
                                                      " has zero variance",
                                                  index);
                }
        };
        check(sx, sdx, "first");
        check(sy, sdy, "second");
    }
    const std::size_t nx = sx.shape().nstar();
    const std::size_t ny = sy.shape().nstar();
    auto acc = detail::outer_sum(dx, nx, dy, ny, sx.size(), 1.0 / static_cast<double>(sx.size()));
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            double& r = acc[i + nx * j];
            r = (sdx[i] < 0.0 || sdy[j] < 0.0) ? 0.0
                                               : std::clamp(r / (sdx[i] * sdy[j]), -1.0, 1.0);
        }
    for (double& v : sdx)
        v = std::max(v, 0.0);
    for (double& v : sdy)
        v = std::max(v, 0.0);
    return CrossCorrTensor{DenseTensor(sx.shape().concat(sy.shape()), std::move(acc)),
                           sx.shape(), sy.shape(), std::move(sdx), std::move(sdy)};
}

}  // namespace tensorstat
