#pragma once

#include "tensorstat/error.hpp"
#include "tensorstat/tensor.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace tensorstat {

inline constexpr double kDefaultSymmetryTol = 1e-10;
inline constexpr double kSingularRcond = 1e-12;

/// det(x) = det(mat(x)), via partially pivoted LU. Exact zero for a
/// structurally singular input; never -0.
inline double det(const SquareTensor& x) {
    const double d = Eigen::PartialPivLU<Eigen::MatrixXd>(matricize(x)).determinant();
    return d == 0.0 ? 0.0 : d;
}

/// Inverse tensor: contract_product(x, inverse(x)) = I.
/// Throws SingularityError when the reciprocal condition estimate of mat(x)
/// falls below kSingularRcond.
inline SquareTensor inverse(const SquareTensor& x) {
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(matricize(x));
    const double rcond = lu.rcond();
    if (!(rcond >= kSingularRcond))
        throw SingularityError("tensor is singular or ill-conditioned (rcond = " +
                                   std::to_string(rcond) + ")",
                               rcond);
    return unmatricize(lu.inverse(), x.row_shape());
}

/// Largest |x(i,j) - x(j,i)| over the matricization.
inline double symmetry_residual(const Eigen::MatrixXd& m) {
    return (m - m.transpose()).cwiseAbs().maxCoeff();
}

inline bool is_symmetric(const SquareTensor& x, double tol = kDefaultSymmetryTol) {
    return symmetry_residual(matricize(x)) <= tol;
}

namespace detail {

/// Lower Cholesky factor. Returns the index of the first non-positive pivot
/// through `failed_pivot` (and an empty matrix) when m is not PD.
inline Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& m, std::size_t& failed_pivot) {
    const Eigen::Index n = m.rows();
    Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double pivot = m(j, j);
        for (Eigen::Index k = 0; k < j; ++k)
            pivot -= lower(j, k) * lower(j, k);
        if (!(pivot > 0.0)) {
            failed_pivot = static_cast<std::size_t>(j);
            return {};
        }
        const double root = std::sqrt(pivot);
        lower(j, j) = root;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (Eigen::Index k = 0; k < j; ++k)
                s -= lower(i, k) * lower(j, k);
            lower(i, j) = s / root;
        }
    }
    return lower;
}

}  // namespace detail

/// Lower-triangular L with L L^T = mat(s).
class CholeskyFactor {
public:
    CholeskyFactor(Shape row_shape, Eigen::MatrixXd lower)
        : row_shape_(std::move(row_shape)), lower_(std::move(lower)) {}

    const Shape& row_shape() const noexcept { return row_shape_; }
    const Eigen::MatrixXd& lower() const noexcept { return lower_; }

    /// log det(mat(s)) = 2 sum log L_kk.
    double log_det() const { return 2.0 * lower_.diagonal().array().log().sum(); }

    /// Solves L y = v.
    Eigen::VectorXd whiten(const Eigen::VectorXd& v) const {
        return lower_.triangularView<Eigen::Lower>().solve(v);
    }

    /// L z.
    Eigen::VectorXd color(const Eigen::VectorXd& z) const {
        return lower_.triangularView<Eigen::Lower>() * z;
    }

    Eigen::MatrixXd reconstruct() const { return lower_ * lower_.transpose(); }

private:
    Shape row_shape_;
    Eigen::MatrixXd lower_;
};

/// Cholesky factorization of a symmetric positive definite matrix.
/// `what` names the operand in error messages.
inline Eigen::MatrixXd cholesky_matrix(const Eigen::MatrixXd& m, double sym_tol,
                                       const std::string& what = "matrix") {
    if (m.rows() != m.cols())
        throw ShapeError(what + " is not square");
    const double residual = m.size() ? symmetry_residual(m) : 0.0;
    if (!(residual <= sym_tol))
        throw SymmetryError(what + " is not symmetric (residual " + std::to_string(residual) +
                                ")",
                            residual);
    std::size_t pivot = 0;
    Eigen::MatrixXd lower = detail::cholesky_lower(m, pivot);
    if (lower.size() == 0 && m.size() != 0)
        throw DefinitenessError(what + " is not positive definite (pivot " +
                                    std::to_string(pivot) + ")",
                                pivot);
    return lower;
}

inline CholeskyFactor cholesky(const SquareTensor& s, double sym_tol = kDefaultSymmetryTol) {
    Eigen::MatrixXd lower;
    try {
        lower = cholesky_matrix(matricize(s), sym_tol, "scale tensor");
    } catch (const DefinitenessError& e) {
        const auto index = s.row_shape().multi_index(e.pivot());
        std::string where;
        for (std::size_t k = 0; k < index.size(); ++k)
            where += (k ? "," : "") + std::to_string(index[k]);
        throw DefinitenessError(std::string(e.what()) + " at cell (" + where + ")", e.pivot());
    }
    return CholeskyFactor(s.row_shape(), std::move(lower));
}

inline bool is_positive_definite(const SquareTensor& x, double tol = kDefaultSymmetryTol) {
    try {
        cholesky(x, tol);
        return true;
    } catch (const MathError&) {
        return false;
    }
}

/// log det(mat(s)) for symmetric positive definite s.
inline double log_det(const SquareTensor& s) { return cholesky(s).log_det(); }

/// Per-mode symmetric factors Sigma_1..Sigma_D of a Kronecker-structured
/// scale, Sigma_i of size n_i x n_i.
class KroneckerFactors {
public:
    explicit KroneckerFactors(std::vector<Eigen::MatrixXd> factors, double sym_tol = 1e-12)
        : factors_(std::move(factors)), shape_(dims_of(factors_)) {
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            const auto& f = factors_[i];
            if (!f.allFinite())
                throw ArgumentError("Kronecker factor " + std::to_string(i) +
                                    " has a non-finite entry");
            const double tol = sym_tol * std::max(1.0, f.cwiseAbs().maxCoeff());
            const double residual = symmetry_residual(f);
            if (!(residual <= tol))
                throw SymmetryError("Kronecker factor " + std::to_string(i) +
                                        " is not symmetric",
                                    residual);
        }
    }

    const std::vector<Eigen::MatrixXd>& factors() const noexcept { return factors_; }
    const Eigen::MatrixXd& factor(std::size_t mode) const { return factors_.at(mode); }
    const Shape& shape() const noexcept { return shape_; }

private:
    static Shape dims_of(const std::vector<Eigen::MatrixXd>& factors) {
        if (factors.empty())
            throw ShapeError("Kronecker form needs at least one factor");
        std::vector<std::size_t> dims;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (factors[i].rows() != factors[i].cols() || factors[i].rows() == 0)
                throw ShapeError("Kronecker factor " + std::to_string(i) +
                                 " is not a non-empty square matrix");
            dims.push_back(static_cast<std::size_t>(factors[i].rows()));
        }
        return Shape(std::move(dims));
    }

    std::vector<Eigen::MatrixXd> factors_;
    Shape shape_;
};

/// Assembled Kronecker product acting on column-major vec: entry (r, c) is
/// prod_i Sigma_i(r_i, c_i) where r_i, c_i are the mode-i digits of r and c.
/// In conventional notation this is Sigma_D (x) ... (x) Sigma_1, so Sigma_i
/// acts along mode i of the tensor.
inline Eigen::MatrixXd kronecker_assemble(const KroneckerFactors& f) {
    const Shape& shape = f.shape();
    const auto n = static_cast<Eigen::Index>(shape.nstar());
    Eigen::MatrixXd out(n, n);
    std::vector<std::vector<std::size_t>> digits(shape.nstar());
    for (std::size_t r = 0; r < shape.nstar(); ++r)
        digits[r] = shape.multi_index(r);
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < n; ++r) {
            double v = 1.0;
            for (std::size_t i = 0; i < shape.order(); ++i)
                v *= f.factor(i)(static_cast<Eigen::Index>(digits[r][i]),
                                 static_cast<Eigen::Index>(digits[c][i]));
            out(r, c) = v;
        }
    return out;
}

inline SquareTensor kronecker_tensor(const KroneckerFactors& f) {
    return unmatricize(kronecker_assemble(f), f.shape());
}

/// Applies `op` to every mode-`mode` fiber of a column-major tensor, in place.
/// op receives and returns an Eigen::VectorXd of length dims[mode].
template <class Op>
void apply_along_mode(std::vector<double>& data, const Shape& shape, std::size_t mode, Op&& op) {
    const std::size_t len = shape.dim(mode);
    std::size_t stride = 1;
    for (std::size_t k = 0; k < mode; ++k)
        stride *= shape.dim(k);
    const std::size_t block = stride * len;
    Eigen::VectorXd fiber(static_cast<Eigen::Index>(len));
    for (std::size_t outer = 0; outer < data.size(); outer += block)
        for (std::size_t inner = 0; inner < stride; ++inner) {
            const std::size_t base = outer + inner;
            for (std::size_t t = 0; t < len; ++t)
                fiber[static_cast<Eigen::Index>(t)] = data[base + t * stride];
            const Eigen::VectorXd mapped = op(fiber);
            for (std::size_t t = 0; t < len; ++t)
                data[base + t * stride] = mapped[static_cast<Eigen::Index>(t)];
        }
}

}  // namespace tensorstat
