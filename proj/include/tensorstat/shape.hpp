#pragma once

#include "tensorstat/error.hpp"

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace tensorstat {

/// Dimension lengths n_1 x ... x n_D of an order-D tensor.
///
/// Linear offsets are column-major: the first index varies fastest. Every
/// routine in the library (vec, matricize, Kronecker assembly, file I/O)
/// shares this convention.
class Shape {
public:
    Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
        if (dims_.empty())
            throw ShapeError("shape must have order >= 1");
        nstar_ = 1;
        for (std::size_t d : dims_) {
            if (d == 0)
                throw ShapeError("shape " + to_string() + " has a zero dimension");
            if (nstar_ > std::numeric_limits<std::size_t>::max() / d)
                throw ShapeError("shape " + to_string() + " overflows");
            nstar_ *= d;
        }
    }

    Shape(std::initializer_list<std::size_t> dims)
        : Shape(std::vector<std::size_t>(dims)) {}

    std::size_t order() const noexcept { return dims_.size(); }
    std::size_t nstar() const noexcept { return nstar_; }
    std::size_t dim(std::size_t mode) const { return dims_.at(mode); }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }

    /// Column-major offset of a multi-index.
    std::size_t offset(std::span<const std::size_t> index) const {
        if (index.size() != dims_.size())
            throw ShapeError("index order does not match shape " + to_string());
        std::size_t off = 0;
        std::size_t stride = 1;
        for (std::size_t k = 0; k < dims_.size(); ++k) {
            if (index[k] >= dims_[k])
                throw ShapeError("index out of range for shape " + to_string());
            off += index[k] * stride;
            stride *= dims_[k];
        }
        return off;
    }

    /// Inverse of offset().
    std::vector<std::size_t> multi_index(std::size_t offset) const {
        if (offset >= nstar_)
            throw ShapeError("offset out of range for shape " + to_string());
        std::vector<std::size_t> index(dims_.size());
        for (std::size_t k = 0; k < dims_.size(); ++k) {
            index[k] = offset % dims_[k];
            offset /= dims_[k];
        }
        return index;
    }

    /// Shape of the order-(D+E) tensor with lengths this x other.
    Shape concat(const Shape& other) const {
        std::vector<std::size_t> dims = dims_;
        dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
        return Shape(std::move(dims));
    }

    std::string to_string() const {
        std::ostringstream os;
        os << '(';
        for (std::size_t k = 0; k < dims_.size(); ++k)
            os << (k ? "," : "") << dims_[k];
        os << ')';
        return os.str();
    }

    friend bool operator==(const Shape& a, const Shape& b) { return a.dims_ == b.dims_; }

private:
    std::vector<std::size_t> dims_;
    std::size_t nstar_ = 0;
};

/// Parses "2x3x2" or "2,3,2".
inline Shape parse_shape(const std::string& text) {
    std::vector<std::size_t> dims;
    std::string token;
    auto flush = [&] {
        if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos)
            throw ArgumentError("invalid shape spec '" + text + "'");
        if (token.size() > 9)
            throw ArgumentError("invalid shape spec '" + text + "': dimension too large");
        dims.push_back(std::stoul(token));
        token.clear();
    };
    for (char c : text) {
        if (c == 'x' || c == 'X' || c == ',')
            flush();
        else
            token.push_back(c);
    }
    flush();
    try {
        return Shape(std::move(dims));
    } catch (const ShapeError& e) {
        throw ArgumentError("invalid shape spec '" + text + "': " + e.what());
    }
}

}  // namespace tensorstat
