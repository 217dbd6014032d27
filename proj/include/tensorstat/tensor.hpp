#pragma once

#include "tensorstat/error.hpp"
#include "tensorstat/shape.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tensorstat {

namespace detail {

inline void require_finite(std::span<const double> data, const char* what) {
    for (double v : data)
        if (!std::isfinite(v))
            throw ArgumentError(std::string(what) + " contains a non-finite entry");
}

}  // namespace detail

/// Dense real order-D tensor, column-major, immutable after construction.
class DenseTensor {
public:
    DenseTensor(Shape shape, std::vector<double> data)
        : shape_(std::move(shape)), data_(std::move(data)) {
        if (data_.size() != shape_.nstar())
            throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                             " does not match shape " + shape_.to_string());
        detail::require_finite(data_, "tensor");
    }

    static DenseTensor zeros(Shape shape) {
        std::vector<double> data(shape.nstar(), 0.0);
        return DenseTensor(std::move(shape), std::move(data));
    }

    /// Skips the finite-entry check. Test code only.
    static DenseTensor unchecked(Shape shape, std::vector<double> data) {
        DenseTensor t(std::move(shape));
        if (data.size() != t.shape_.nstar())
            throw ShapeError("tensor data length does not match shape");
        t.data_ = std::move(data);
        return t;
    }

    const Shape& shape() const noexcept { return shape_; }
    std::size_t size() const noexcept { return data_.size(); }
    std::span<const double> data() const noexcept { return data_; }

    double operator[](std::size_t offset) const { return data_[offset]; }
    double at(std::span<const std::size_t> index) const { return data_[shape_.offset(index)]; }
    double at(std::initializer_list<std::size_t> index) const {
        return at(std::span<const std::size_t>(index.begin(), index.size()));
    }

    friend bool operator==(const DenseTensor& a, const DenseTensor& b) {
        return a.shape_ == b.shape_ && a.data_ == b.data_;
    }

private:
    explicit DenseTensor(Shape shape) : shape_(std::move(shape)) {}

    Shape shape_;
    std::vector<double> data_;
};

/// Order-2D tensor with lengths n x n. Entry (i_1..i_D, j_1..j_D) lives at
/// offset(i) + nstar * offset(j), so the storage is exactly the column-major
/// nstar x nstar matricization.
class SquareTensor {
public:
    SquareTensor(Shape row_shape, std::vector<double> data)
        : row_shape_(std::move(row_shape)), data_(std::move(data)) {
        const std::size_t n = row_shape_.nstar();
        if (data_.size() != n * n)
            throw ShapeError("square tensor data length " + std::to_string(data_.size()) +
                             " does not match row shape " + row_shape_.to_string());
        detail::require_finite(data_, "square tensor");
    }

    static SquareTensor zeros(Shape row_shape) {
        const std::size_t n = row_shape.nstar();
        return SquareTensor(std::move(row_shape), std::vector<double>(n * n, 0.0));
    }

    static SquareTensor identity(Shape row_shape) {
        const std::size_t n = row_shape.nstar();
        std::vector<double> data(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            data[i + n * i] = 1.0;
        return SquareTensor(std::move(row_shape), std::move(data));
    }

    static SquareTensor unchecked(Shape row_shape, std::vector<double> data) {
        SquareTensor t(std::move(row_shape));
        const std::size_t n = t.row_shape_.nstar();
        if (data.size() != n * n)
            throw ShapeError("square tensor data length does not match row shape");
        t.data_ = std::move(data);
        return t;
    }

    /// Reinterprets an order-2D tensor whose two index blocks agree.
    static SquareTensor from_tensor(const DenseTensor& t) {
        const auto& dims = t.shape().dims();
        const std::size_t d = dims.size() / 2;
        if (dims.size() % 2 != 0 ||
            !std::equal(dims.begin(), dims.begin() + d, dims.begin() + d))
            throw ShapeError("tensor of shape " + t.shape().to_string() +
                             " is not n x n");
        return SquareTensor(Shape(std::vector<std::size_t>(dims.begin(), dims.begin() + d)),
                            std::vector<double>(t.data().begin(), t.data().end()));
    }

    const Shape& row_shape() const noexcept { return row_shape_; }
    /// nstar of the row shape; the matricization is extent() x extent().
    std::size_t extent() const noexcept { return row_shape_.nstar(); }
    std::span<const double> data() const noexcept { return data_; }

    double operator()(std::size_t row, std::size_t col) const {
        return data_[row + extent() * col];
    }
    double at(std::span<const std::size_t> row, std::span<const std::size_t> col) const {
        return (*this)(row_shape_.offset(row), row_shape_.offset(col));
    }

    DenseTensor as_tensor() const {
        return DenseTensor(row_shape_.concat(row_shape_), data_);
    }

    friend bool operator==(const SquareTensor& a, const SquareTensor& b) {
        return a.row_shape_ == b.row_shape_ && a.data_ == b.data_;
    }

private:
    explicit SquareTensor(Shape row_shape) : row_shape_(std::move(row_shape)) {}

    Shape row_shape_;
    std::vector<double> data_;
};

// ---------------------------------------------------------------------------
// vec / matricization

inline Eigen::VectorXd vec(const DenseTensor& t) {
    return Eigen::Map<const Eigen::VectorXd>(t.data().data(),
                                             static_cast<Eigen::Index>(t.size()));
}

inline DenseTensor unvec(const Eigen::VectorXd& v, Shape shape) {
    if (static_cast<std::size_t>(v.size()) != shape.nstar())
        throw ShapeError("vector length does not match shape " + shape.to_string());
    return DenseTensor(std::move(shape), std::vector<double>(v.data(), v.data() + v.size()));
}

inline Eigen::MatrixXd matricize(const SquareTensor& x) {
    const auto n = static_cast<Eigen::Index>(x.extent());
    return Eigen::Map<const Eigen::MatrixXd>(x.data().data(), n, n);
}

inline SquareTensor unmatricize(const Eigen::MatrixXd& m, Shape row_shape) {
    const auto n = static_cast<Eigen::Index>(row_shape.nstar());
    if (m.rows() != n || m.cols() != n)
        throw ShapeError("matrix of size " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + " does not match row shape " +
                         row_shape.to_string());
    return SquareTensor(std::move(row_shape),
                        std::vector<double>(m.data(), m.data() + m.size()));
}

inline SquareTensor transpose2d(const SquareTensor& x) {
    const std::size_t n = x.extent();
    std::vector<double> out(n * n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r)
            out[r + n * c] = x(c, r);
    return SquareTensor(x.row_shape(), std::move(out));
}

// ---------------------------------------------------------------------------
// entrywise arithmetic

namespace detail {

inline std::vector<double> axpy(double alpha, std::span<const double> x,
                                std::span<const double> y) {
    std::vector<double> out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        out[k] = alpha * x[k] + y[k];
    return out;
}

inline std::vector<double> scaled(double lambda, std::span<const double> x) {
    std::vector<double> out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        out[k] = lambda * x[k];
    return out;
}

}  // namespace detail

inline DenseTensor add(const DenseTensor& x, const DenseTensor& y) {
    if (!(x.shape() == y.shape()))
        throw ShapeError("add: shapes " + x.shape().to_string() + " and " +
                         y.shape().to_string() + " differ");
    return DenseTensor(x.shape(), detail::axpy(1.0, x.data(), y.data()));
}

inline SquareTensor add(const SquareTensor& x, const SquareTensor& y) {
    if (!(x.row_shape() == y.row_shape()))
        throw ShapeError("add: row shapes " + x.row_shape().to_string() + " and " +
                         y.row_shape().to_string() + " differ");
    return SquareTensor(x.row_shape(), detail::axpy(1.0, x.data(), y.data()));
}

inline DenseTensor subtract(const DenseTensor& x, const DenseTensor& y) {
    if (!(x.shape() == y.shape()))
        throw ShapeError("subtract: shapes " + x.shape().to_string() + " and " +
                         y.shape().to_string() + " differ");
    return DenseTensor(x.shape(), detail::axpy(-1.0, y.data(), x.data()));
}

inline DenseTensor scale(double lambda, const DenseTensor& x) {
    return DenseTensor(x.shape(), detail::scaled(lambda, x.data()));
}

inline SquareTensor scale(double lambda, const SquareTensor& x) {
    return SquareTensor(x.row_shape(), detail::scaled(lambda, x.data()));
}

inline DenseTensor operator+(const DenseTensor& x, const DenseTensor& y) { return add(x, y); }
inline SquareTensor operator+(const SquareTensor& x, const SquareTensor& y) { return add(x, y); }
inline DenseTensor operator-(const DenseTensor& x, const DenseTensor& y) { return subtract(x, y); }
inline DenseTensor operator*(double lambda, const DenseTensor& x) { return scale(lambda, x); }
inline SquareTensor operator*(double lambda, const SquareTensor& x) { return scale(lambda, x); }

// ---------------------------------------------------------------------------
// products

/// Outer product: entry (i, j) = a(i) * b(j), lengths a.shape x b.shape.
inline DenseTensor outer(const DenseTensor& a, const DenseTensor& b) {
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    std::vector<double> out(na * nb);
    for (std::size_t j = 0; j < nb; ++j)
        for (std::size_t i = 0; i < na; ++i)
            out[i + na * j] = a[i] * b[j];
    return DenseTensor(a.shape().concat(b.shape()), std::move(out));
}

/// outer() for conforming shapes, returned as a square tensor.
inline SquareTensor outer_square(const DenseTensor& a, const DenseTensor& b) {
    if (!(a.shape() == b.shape()))
        throw ShapeError("outer_square: shapes " + a.shape().to_string() + " and " +
                         b.shape().to_string() + " differ");
    return SquareTensor::from_tensor(outer(a, b));
}

/// Contraction over the shared index block:
/// result(i, k) = sum_j x(i, j) * y(j, k), with i, j, k full D-tuples.
inline SquareTensor contract_product(const SquareTensor& x, const SquareTensor& y) {
    if (!(x.row_shape() == y.row_shape()))
        throw ShapeError("contract_product: row shapes " + x.row_shape().to_string() +
                         " and " + y.row_shape().to_string() + " differ");
    const std::size_t n = x.extent();
    std::vector<double> out(n * n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) {
            const double yjk = y(j, k);
            for (std::size_t i = 0; i < n; ++i)
                out[i + n * k] += x(i, j) * yjk;
        }
    return SquareTensor(x.row_shape(), std::move(out));
}

/// a : s : b, i.e. sum over i, j of a(i) s(i, j) b(j).
inline double double_dot_quadratic(const DenseTensor& a, const SquareTensor& s,
                                   const DenseTensor& b) {
    if (!(a.shape() == s.row_shape()) || !(b.shape() == s.row_shape()))
        throw ShapeError("double_dot_quadratic: operands " + a.shape().to_string() + ", " +
                         s.row_shape().to_string() + ", " + b.shape().to_string() +
                         " do not conform");
    const std::size_t n = s.extent();
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double column = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            column += a[i] * s(i, j);
        total += column * b[j];
    }
    return total;
}

}  // namespace tensorstat
