#pragma once

#include "tensorstat/error.hpp"
#include "tensorstat/linalg.hpp"
#include "tensorstat/random.hpp"
#include "tensorstat/stats.hpp"
#include "tensorstat/tensor.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tensorstat {

/// ln(2 pi), correctly rounded.
inline constexpr double kLog2Pi = 1.8378770664093454835606594728112;

/// Scale parameter: a dense n x n tensor S, or Kronecker factors with
/// mat(S) = kronecker_assemble(factors).
using ScaleSpec = std::variant<SquareTensor, KroneckerFactors>;

/// Factorized scale. Construction validates symmetry and positive
/// definiteness and caches the Cholesky factor(s) and log det(mat(S)).
/// Kronecker scales are never assembled: every operation runs mode by mode
/// on the per-factor Cholesky factors.
class ScaleModel {
public:
    explicit ScaleModel(ScaleSpec spec, double sym_tol = kDefaultSymmetryTol)
        : spec_(std::move(spec)), shape_(shape_of(spec_)) {
        if (const auto* dense = std::get_if<SquareTensor>(&spec_)) {
            dense_.emplace(cholesky(*dense, sym_tol));
            log_det_ = dense_->log_det();
            return;
        }
        const auto& f = std::get<KroneckerFactors>(spec_);
        log_det_ = 0.0;
        for (std::size_t i = 0; i < f.factors().size(); ++i) {
            Eigen::MatrixXd lower = cholesky_matrix(
                f.factor(i), sym_tol, "Kronecker factor " + std::to_string(i));
            const double n_i = static_cast<double>(shape_.dim(i));
            log_det_ += static_cast<double>(shape_.nstar()) / n_i * 2.0 *
                        lower.diagonal().array().log().sum();
            factor_lower_.push_back(std::move(lower));
        }
    }

    const ScaleSpec& spec() const noexcept { return spec_; }
    const Shape& shape() const noexcept { return shape_; }
    bool structured() const noexcept { return !dense_.has_value(); }
    double log_det() const noexcept { return log_det_; }

    /// q = d : S^{-1} : d, via triangular solves (no explicit inverse).
    double mahalanobis(const DenseTensor& deviation) const {
        if (!(deviation.shape() == shape_))
            throw ShapeError("deviation shape " + deviation.shape().to_string() +
                             " does not match scale shape " + shape_.to_string());
        if (dense_)
            return dense_->whiten(vec(deviation)).squaredNorm();
        std::vector<double> w(deviation.data().begin(), deviation.data().end());
        for (std::size_t i = 0; i < factor_lower_.size(); ++i)
            apply_along_mode(w, shape_, i, [&](const Eigen::VectorXd& fiber) {
                return Eigen::VectorXd(
                    factor_lower_[i].triangularView<Eigen::Lower>().solve(fiber));
            });
        double q = 0.0;
        for (double v : w)
            q += v * v;
        return q;
    }

    /// L z, where L L^T = mat(S).
    Eigen::VectorXd color(const Eigen::VectorXd& z) const {
        if (dense_)
            return dense_->color(z);
        std::vector<double> w(z.data(), z.data() + z.size());
        for (std::size_t i = 0; i < factor_lower_.size(); ++i)
            apply_along_mode(w, shape_, i, [&](const Eigen::VectorXd& fiber) {
                return Eigen::VectorXd(factor_lower_[i].triangularView<Eigen::Lower>() * fiber);
            });
        return Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    }

    Eigen::MatrixXd dense_matrix() const {
        if (const auto* dense = std::get_if<SquareTensor>(&spec_))
            return matricize(*dense);
        return kronecker_assemble(std::get<KroneckerFactors>(spec_));
    }

    SquareTensor dense_tensor() const { return unmatricize(dense_matrix(), shape_); }

private:
    static Shape shape_of(const ScaleSpec& spec) {
        if (const auto* dense = std::get_if<SquareTensor>(&spec))
            return dense->row_shape();
        return std::get<KroneckerFactors>(spec).shape();
    }

    ScaleSpec spec_;
    Shape shape_;
    std::optional<CholeskyFactor> dense_;
    std::vector<Eigen::MatrixXd> factor_lower_;
    double log_det_ = 0.0;
};

/// Parameters of TN(M, S).
class TensorNormalParams {
public:
    TensorNormalParams(DenseTensor location, ScaleSpec scale)
        : location_(std::move(location)), scale_(std::move(scale)) {
        if (!(location_.shape() == scale_.shape()))
            throw ShapeError("location shape " + location_.shape().to_string() +
                             " does not match scale shape " + scale_.shape().to_string());
    }

    const DenseTensor& location() const noexcept { return location_; }
    const ScaleModel& scale() const noexcept { return scale_; }
    const Shape& shape() const noexcept { return location_.shape(); }

private:
    DenseTensor location_;
    ScaleModel scale_;
};

// ---------------------------------------------------------------------------
// tensor normal

/// ln f(X) = -(n*/2) ln 2pi - (1/2) ln det S - (1/2) (X-M) : S^{-1} : (X-M).
inline double normal_log_density(const TensorNormalParams& p, const DenseTensor& x) {
    if (!(x.shape() == p.shape()))
        throw ShapeError("point shape " + x.shape().to_string() + " does not match " +
                         p.shape().to_string());
    const double q = p.scale().mahalanobis(subtract(x, p.location()));
    const double n = static_cast<double>(p.shape().nstar());
    return (-0.5 * n * kLog2Pi - 0.5 * p.scale().log_det()) - 0.5 * q;
}

inline double normal_density(const TensorNormalParams& p, const DenseTensor& x) {
    return std::exp(normal_log_density(p, x));
}

/// Classical multivariate normal log density of vec(X) ~ N(vec(M), mat(S)),
/// evaluated from the assembled matrix with an LU inverse. Shares no
/// factorization with normal_log_density.
inline double normal_log_density_vec_oracle(const TensorNormalParams& p, const DenseTensor& x) {
    if (!(x.shape() == p.shape()))
        throw ShapeError("point shape " + x.shape().to_string() + " does not match " +
                         p.shape().to_string());
    const Eigen::MatrixXd sigma = p.scale().dense_matrix();
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(sigma);
    const Eigen::VectorXd d = vec(x) - vec(p.location());
    const double q = d.dot(lu.inverse() * d);
    const double logdet = lu.matrixLU().diagonal().array().abs().log().sum();
    const double n = static_cast<double>(d.size());
    return -0.5 * n * kLog2Pi - 0.5 * logdet - 0.5 * q;
}

/// Draws M + unvec(L z), z ~ N(0, I). Deterministic in (seed, count).
inline SampleSet normal_sample(const TensorNormalParams& p, RngSeed seed, std::size_t count,
                               std::size_t workers = 0) {
    const std::size_t n = p.shape().nstar();
    std::vector<std::vector<double>> draws(count);
    const Eigen::VectorXd mu = vec(p.location());
    for_each_draw(count, seed, workers, [&](std::mt19937_64& engine, std::size_t k) {
        std::normal_distribution<double> normal;
        Eigen::VectorXd z(static_cast<Eigen::Index>(n));
        for (auto& v : z)
            v = normal(engine);
        const Eigen::VectorXd x = mu + p.scale().color(z);
        draws[k].assign(x.data(), x.data() + x.size());
    });
    std::vector<DenseTensor> obs;
    obs.reserve(count);
    for (auto& d : draws)
        obs.emplace_back(p.shape(), std::move(d));
    return SampleSet(p.shape(), std::move(obs));
}

/// Moment fit: location = sample mean, scale = sample covariance (dense).
inline TensorNormalParams fit_normal(const SampleSet& s,
                                     Normalization norm = Normalization::unbiased) {
    if (s.size() < 2)
        throw ArgumentError("fit_normal: need at least 2 observations");
    CovTensor cov = covariance(s, norm);
    try {
        return TensorNormalParams(mean_tensor(s), cov.value);
    } catch (const DefinitenessError& e) {
        throw DefinitenessError(std::string("fit_normal: sample covariance is singular (") +
                                    e.what() +
                                    "); add a ridge eps * I to the covariance explicitly",
                                e.pivot());
    }
}

// ---------------------------------------------------------------------------
// elliptical family

/// Radial kernel of an elliptical density f(X) = c g(q). `log_c` excludes
/// the det(S)^{-1/2} factor, which the density adds itself.
struct RadialKernel {
    std::string name;
    std::function<double(double q, std::size_t nstar)> log_g;
    std::function<double(std::size_t nstar)> log_c;
    /// Draws R^2 of the radial-spherical representation; empty when the
    /// kernel has no registered sampler.
    std::function<double(std::mt19937_64&, std::size_t nstar)> radius_squared;
    /// Cov(X) = covariance_factor * S; +inf when the second moment does not exist.
    double covariance_factor = 1.0;
};

inline RadialKernel normal_kernel() {
    RadialKernel k;
    k.name = "normal";
    k.log_g = [](double q, std::size_t) { return -0.5 * q; };
    k.log_c = [](std::size_t n) { return -0.5 * static_cast<double>(n) * kLog2Pi; };
    k.radius_squared = [](std::mt19937_64& engine, std::size_t n) {
        return std::chi_squared_distribution<double>(static_cast<double>(n))(engine);
    };
    k.covariance_factor = 1.0;
    return k;
}

/// Multivariate t with nu degrees of freedom:
/// g(q) = (1 + q/nu)^{-(nu+n*)/2},
/// c = Gamma((nu+n*)/2) / (Gamma(nu/2) (nu pi)^{n*/2}).
inline RadialKernel student_kernel(double nu) {
    if (!(nu > 0.0) || !std::isfinite(nu))
        throw ArgumentError("student kernel needs finite nu > 0");
    RadialKernel k;
    k.name = "student:" + std::to_string(nu);
    k.log_g = [nu](double q, std::size_t n) {
        return -0.5 * (nu + static_cast<double>(n)) * std::log1p(q / nu);
    };
    k.log_c = [nu](std::size_t n) {
        const double nd = static_cast<double>(n);
        return std::lgamma(0.5 * (nu + nd)) - std::lgamma(0.5 * nu) -
               0.5 * nd * std::log(nu * std::numbers::pi);
    };
    k.radius_squared = [nu](std::mt19937_64& engine, std::size_t n) {
        const double nd = static_cast<double>(n);
        return nd * std::fisher_f_distribution<double>(nd, nu)(engine);
    };
    k.covariance_factor = nu > 2.0 ? nu / (nu - 2.0) : std::numeric_limits<double>::infinity();
    return k;
}

/// "normal" or "student:<nu>".
inline RadialKernel kernel_from_id(const std::string& id) {
    if (id == "normal")
        return normal_kernel();
    const std::string prefix = "student:";
    if (id.rfind(prefix, 0) == 0) {
        const std::string arg = id.substr(prefix.size());
        std::size_t used = 0;
        double nu = 0.0;
        try {
            nu = std::stod(arg, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (arg.empty() || used != arg.size())
            throw ArgumentError("invalid degrees of freedom in kernel '" + id + "'");
        return student_kernel(nu);
    }
    throw UnsupportedKernelError("unknown kernel '" + id + "'");
}

class EllipticalParams {
public:
    EllipticalParams(DenseTensor location, ScaleSpec scale, RadialKernel kernel)
        : location_(std::move(location)), scale_(std::move(scale)), kernel_(std::move(kernel)) {
        if (!(location_.shape() == scale_.shape()))
            throw ShapeError("location shape " + location_.shape().to_string() +
                             " does not match scale shape " + scale_.shape().to_string());
        if (!kernel_.log_g || !kernel_.log_c)
            throw UnsupportedKernelError("kernel '" + kernel_.name + "' has no density");
        log_normalizer_ = kernel_.log_c(shape().nstar()) - 0.5 * scale_.log_det();
        if (!std::isfinite(log_normalizer_))
            throw ArgumentError("kernel '" + kernel_.name + "' has a non-finite normalizer");
    }

    const DenseTensor& location() const noexcept { return location_; }
    const ScaleModel& scale() const noexcept { return scale_; }
    const RadialKernel& kernel() const noexcept { return kernel_; }
    const Shape& shape() const noexcept { return location_.shape(); }

    /// ln c_{n*}, including -(1/2) ln det(mat(S)).
    double log_normalizer() const noexcept { return log_normalizer_; }

private:
    DenseTensor location_;
    ScaleModel scale_;
    RadialKernel kernel_;
    double log_normalizer_ = 0.0;
};

/// ln f(X) = ln c_{n*} + ln g((X-M) : S^{-1} : (X-M)).
inline double elliptical_log_density(const EllipticalParams& p, const DenseTensor& x) {
    if (!(x.shape() == p.shape()))
        throw ShapeError("point shape " + x.shape().to_string() + " does not match " +
                         p.shape().to_string());
    const double q = p.scale().mahalanobis(subtract(x, p.location()));
    return p.log_normalizer() + p.kernel().log_g(q, p.shape().nstar());
}

/// Radial-spherical draws M + unvec(R L u), u uniform on the unit sphere.
inline SampleSet elliptical_sample(const EllipticalParams& p, RngSeed seed, std::size_t count,
                                   std::size_t workers = 0) {
    if (!p.kernel().radius_squared)
        throw UnsupportedKernelError("kernel '" + p.kernel().name + "' has no radial sampler");
    const std::size_t n = p.shape().nstar();
    const Eigen::VectorXd mu = vec(p.location());
    std::vector<std::vector<double>> draws(count);
    for_each_draw(count, seed, workers, [&](std::mt19937_64& engine, std::size_t k) {
        std::normal_distribution<double> normal;
        Eigen::VectorXd u(static_cast<Eigen::Index>(n));
        do {
            for (auto& v : u)
                v = normal(engine);
        } while (u.squaredNorm() == 0.0);
        u /= u.norm();
        const double r = std::sqrt(p.kernel().radius_squared(engine, n));
        const Eigen::VectorXd x = mu + p.scale().color(r * u);
        draws[k].assign(x.data(), x.data() + x.size());
    });
    std::vector<DenseTensor> obs;
    obs.reserve(count);
    for (auto& d : draws)
        obs.emplace_back(p.shape(), std::move(d));
    return SampleSet(p.shape(), std::move(obs));
}

// ---------------------------------------------------------------------------
// Kronecker (per-mode factor) equivalence

struct EquivalenceReport {
    std::size_t probes = 0;
    double max_deviation = 0.0;
    double tolerance = 1e-10;

    bool passed() const noexcept { return max_deviation <= tolerance; }
};

namespace detail {

template <class Params, class LogDensity>
EquivalenceReport equivalence(const Params& dense, const Params& structured,
                              const SampleSet& probes, double tol, LogDensity&& log_density) {
    if (!(dense.shape() == structured.shape()) || !(probes.shape() == dense.shape()))
        throw ShapeError("equivalence check: parameter and probe shapes differ");
    EquivalenceReport report;
    report.tolerance = tol;
    report.probes = probes.size();
    for (const auto& x : probes)
        report.max_deviation = std::max(
            report.max_deviation, std::abs(log_density(dense, x) - log_density(structured, x)));
    return report;
}

}  // namespace detail

/// Max |ln f_dense(x) - ln f_structured(x)| over the probes.
inline EquivalenceReport kronecker_equivalence_check(const TensorNormalParams& dense,
                                                     const TensorNormalParams& structured,
                                                     const SampleSet& probes,
                                                     double tol = 1e-10) {
    return detail::equivalence(dense, structured, probes, tol,
                               [](const auto& p, const auto& x) { return normal_log_density(p, x); });
}

inline EquivalenceReport kronecker_equivalence_check(const EllipticalParams& dense,
                                                     const EllipticalParams& structured,
                                                     const SampleSet& probes,
                                                     double tol = 1e-10) {
    return detail::equivalence(
        dense, structured, probes, tol,
        [](const auto& p, const auto& x) { return elliptical_log_density(p, x); });
}

/// Same check with `count` probes drawn from the dense parameters.
inline EquivalenceReport kronecker_equivalence_check(const TensorNormalParams& dense,
                                                     const TensorNormalParams& structured,
                                                     RngSeed seed, std::size_t count,
                                                     double tol = 1e-10) {
    return kronecker_equivalence_check(dense, structured, normal_sample(dense, seed, count, 1),
                                       tol);
}

}  // namespace tensorstat
