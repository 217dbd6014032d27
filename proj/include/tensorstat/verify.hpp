#pragma once

// Property and Monte-Carlo verification harness behind `tensorstat verify`.
// Every check reports an observed deviation against a fixed tolerance.

#include "tensorstat/distributions.hpp"
#include "tensorstat/linalg.hpp"
#include "tensorstat/random_instances.hpp"
#include "tensorstat/stats.hpp"
#include "tensorstat/tensor.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace tensorstat {

struct VerifyConfig {
    std::uint64_t seed = 20240601;
    std::size_t samples = 100000;
    Shape shape{2, 2};
    std::size_t trials = 50;  // random instances per algebraic property
    std::size_t workers = 0;
    /// Test hook: name of a check whose computation is deliberately broken.
    /// Only "det-product" is supported.
    std::string corrupt;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    double deviation = 0.0;
    double tolerance = 0.0;
    std::uint64_t seed = 0;
    std::size_t sample_size = 0;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(),
                           [](const CheckResult& c) { return c.passed; });
    }

    std::vector<std::string> failed() const {
        std::vector<std::string> names;
        for (const auto& c : checks)
            if (!c.passed)
                names.push_back(c.name);
        return names;
    }

    std::string to_text() const {
        std::ostringstream os;
        char line[256];
        for (const auto& c : checks) {
            std::snprintf(line, sizeof line, "%-4s %-28s deviation=%-12.4g tol=%-10.3g seed=%llu n=%zu\n",
                          c.passed ? "PASS" : "FAIL", c.name.c_str(), c.deviation, c.tolerance,
                          static_cast<unsigned long long>(c.seed), c.sample_size);
            os << line;
        }
        const auto bad = failed();
        os << (bad.empty() ? "all " : "") << checks.size() - bad.size() << "/" << checks.size()
           << " checks passed\n";
        return os.str();
    }
};

namespace detail {

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

inline double rel_frobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).norm() / std::max(b.norm(), 1e-300);
}

}  // namespace detail

inline VerifyReport run_verify(const VerifyConfig& cfg) {
    if (!cfg.corrupt.empty() && cfg.corrupt != "det-product")
        throw ArgumentError("unknown corruption target '" + cfg.corrupt + "'");
    if (cfg.samples < 2)
        throw ArgumentError("verify needs at least 2 samples");

    VerifyReport report;
    const Shape& shape = cfg.shape;
    const std::size_t n = shape.nstar();
    std::mt19937_64 rng(cfg.seed);

    auto record = [&](std::string name, double deviation, double tol, std::size_t size = 0) {
        report.checks.push_back(
            CheckResult{std::move(name), deviation <= tol, deviation, tol, cfg.seed, size});
    };
    auto worst = [&](auto&& per_trial) {
        double dev = 0.0;
        for (std::size_t t = 0; t < cfg.trials; ++t)
            dev = std::max(dev, per_trial());
        return dev;
    };
    const auto det_of = [&](const SquareTensor& x, bool corrupted) {
        return corrupted ? det(x) * (1.0 + 1e-6) : det(x);
    };

    // matricization
    record("mat-zero", detail::max_abs(matricize(SquareTensor::zeros(shape))), 0.0);
    record("mat-identity",
           detail::max_abs(matricize(SquareTensor::identity(shape)) -
                           Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                     static_cast<Eigen::Index>(n))),
           0.0);
    record("mat-linearity", worst([&] {
               const auto x = instances::square(rng, shape);
               const auto y = instances::square(rng, shape);
               const double a = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
               return detail::max_abs(matricize(add(scale(a, x), y)) -
                                      (a * matricize(x) + matricize(y)));
           }),
           0.0);
    record("mat-transpose", worst([&] {
               const auto x = instances::square(rng, shape);
               return detail::max_abs(matricize(transpose2d(x)) - matricize(x).transpose());
           }),
           0.0);
    record("mat-product", worst([&] {
               const auto x = instances::square(rng, shape);
               const auto y = instances::square(rng, shape);
               return detail::rel_frobenius(matricize(contract_product(x, y)),
                                            matricize(x) * matricize(y));
           }),
           1e-12);
    record("mat-inverse", worst([&] {
               const auto x = instances::well_conditioned(rng, shape);
               return detail::max_abs(matricize(inverse(x)) - matricize(x).inverse());
           }),
           1e-10);

    // determinant
    record("det-zero", std::abs(det(SquareTensor::zeros(shape))), 0.0);
    record("det-identity", std::abs(det(SquareTensor::identity(shape)) - 1.0), 0.0);
    record("det-scale", worst([&] {
               const auto x = instances::well_conditioned(rng, shape);
               const double a = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
               return detail::rel_diff(det(scale(a, x)),
                                       std::pow(a, static_cast<double>(n)) * det(x));
           }),
           1e-9);
    record("det-transpose", worst([&] {
               const auto x = instances::well_conditioned(rng, shape);
               return detail::rel_diff(det(transpose2d(x)), det(x));
           }),
           1e-9);
    record("det-product", worst([&] {
               const auto x = instances::well_conditioned(rng, shape);
               const auto y = instances::well_conditioned(rng, shape);
               return detail::rel_diff(det_of(contract_product(x, y), cfg.corrupt == "det-product"),
                                       det(x) * det(y));
           }),
           1e-9);
    record("det-inverse", worst([&] {
               const auto x = instances::well_conditioned(rng, shape);
               return detail::rel_diff(det(inverse(x)), 1.0 / det(x));
           }),
           1e-9);

    // covariance and correlation tensors on small random sample sets
    const std::size_t small_n = 20;
    record("cov-index-swap", worst([&] {
               const auto sx = instances::sample_set(rng, shape, small_n);
               const auto sy = instances::sample_set(rng, shape, small_n);
               const auto kxy = cross_covariance(sx, sy);
               const auto kyx = cross_covariance(sy, sx);
               double dev = 0.0;
               for (std::size_t i = 0; i < n; ++i)
                   for (std::size_t j = 0; j < n; ++j)
                       dev = std::max(dev, std::abs(kxy(i, j) - kyx(j, i)));
               return dev;
           }),
           0.0);
    const auto sum_sets = [&](const SampleSet& a, const SampleSet& b) {
        std::vector<DenseTensor> obs;
        for (std::size_t k = 0; k < a.size(); ++k)
            obs.push_back(add(a[k], b[k]));
        return SampleSet(a.shape(), std::move(obs));
    };
    record("cov-additivity", worst([&] {
               const auto sx = instances::sample_set(rng, shape, small_n);
               const auto sy = instances::sample_set(rng, shape, small_n);
               const auto sz = instances::sample_set(rng, shape, small_n);
               const auto lhs = cross_covariance(sum_sets(sx, sy), sz);
               const auto a = cross_covariance(sx, sz);
               const auto b = cross_covariance(sy, sz);
               double dev = 0.0;
               for (std::size_t k = 0; k < lhs.value.size(); ++k)
                   dev = std::max(dev, std::abs(lhs.value[k] - (a.value[k] + b.value[k])));
               return dev;
           }),
           1e-12);
    record("cov-symmetry", worst([&] {
               const auto k = covariance(instances::sample_set(rng, shape, small_n)).value;
               return detail::max_abs(matricize(k) - matricize(transpose2d(k)));
           }),
           0.0);
    record("cov-moment", worst([&] {
               const auto s = instances::sample_set(rng, shape, small_n);
               const auto k = matricize(covariance(s, Normalization::mle).value);
               Eigen::MatrixXd second = Eigen::MatrixXd::Zero(k.rows(), k.cols());
               for (const auto& x : s)
                   second += matricize(outer_square(x, x));
               second /= static_cast<double>(s.size());
               const DenseTensor mu = mean_tensor(s);
               return detail::max_abs(k - (second - matricize(outer_square(mu, mu))));
           }),
           1e-12);
    record("cov-sum-expansion", worst([&] {
               const auto sx = instances::sample_set(rng, shape, small_n);
               const auto sy = instances::sample_set(rng, shape, small_n);
               const auto lhs = matricize(covariance(sum_sets(sx, sy)).value);
               const auto kxy = cross_covariance(sx, sy);
               const auto kyx = cross_covariance(sy, sx);
               const auto as_mat = [&](const CrossCovTensor& c) {
                   return Eigen::MatrixXd(Eigen::Map<const Eigen::MatrixXd>(
                       c.value.data().data(), static_cast<Eigen::Index>(n),
                       static_cast<Eigen::Index>(n)));
               };
               const Eigen::MatrixXd rhs = matricize(covariance(sx).value) + as_mat(kxy) +
                                           as_mat(kyx) + matricize(covariance(sy).value);
               return detail::max_abs(lhs - rhs);
           }),
           1e-12);
    record("cov-mat-vec", worst([&] {
               const auto s = instances::sample_set(rng, shape, small_n);
               return detail::max_abs(matricize(covariance(s).value) - covariance_of_vec(s));
           }),
           1e-12);
    record("cov-psd", worst([&] {
               const auto k = matricize(covariance(instances::sample_set(rng, shape, small_n)).value);
               return std::max(0.0, -Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(k)
                                         .eigenvalues()
                                         .minCoeff());
           }),
           1e-10);
    record("corr-unit-diagonal", worst([&] {
               const auto r = correlation(instances::sample_set(rng, shape, small_n)).value;
               double dev = 0.0;
               for (std::size_t i = 0; i < n; ++i)
                   dev = std::max(dev, std::abs(r(i, i) - 1.0));
               return dev;
           }),
           0.0);
    record("corr-bounds", worst([&] {
               const auto r = correlation(instances::sample_set(rng, shape, small_n)).value;
               double dev = 0.0;
               for (double v : r.data())
                   dev = std::max(dev, std::abs(v) - 1.0);
               return dev;
           }),
           1e-12);
    {
        std::vector<DenseTensor> obs;
        for (std::size_t k = 0; k < small_n; ++k) {
            auto v = instances::uniform_entries(rng, n);
            v[n - 1] = 0.25;
            obs.emplace_back(shape, std::move(v));
        }
        double dev = 1.0;
        try {
            correlation(SampleSet(shape, std::move(obs)));
        } catch (const DegenerateVarianceError&) {
            dev = 0.0;
        }
        record("corr-degenerate-error", dev, 0.0);
    }

    // Monte-Carlo moments. Tolerances are the N = 1e5 values scaled at the
    // CLT rate for other sample sizes.
    const double clt = std::sqrt(1e5 / static_cast<double>(cfg.samples));
    const double mean_tol = 0.02 * std::max(1.0, clt);
    const double cov_tol = 0.05 * std::max(1.0, clt);
    const DenseTensor location = instances::tensor(rng, shape);
    const SquareTensor s_dense = instances::spd(rng, shape);
    const TensorNormalParams params(location, s_dense);
    const SampleSet draws = normal_sample(params, RngSeed{cfg.seed, 1}, cfg.samples, cfg.workers);
    record("normal-mean", detail::max_abs(vec(mean_tensor(draws)) - vec(location)), mean_tol,
           cfg.samples);
    record("normal-covariance",
           detail::max_abs(matricize(covariance(draws).value) - matricize(s_dense)), cov_tol,
           cfg.samples);
    {
        const TensorNormalParams standard(DenseTensor::zeros(shape), SquareTensor::identity(shape));
        const SampleSet other =
            normal_sample(standard, RngSeed{cfg.seed, 2}, cfg.samples, cfg.workers);
        const auto kxy = cross_covariance(draws, other);
        double dev = 0.0;
        for (double v : kxy.value.data())
            dev = std::max(dev, std::abs(v));
        record("cov-independence", dev, mean_tol, cfg.samples);
    }

    // densities
    record("density-equivalence", worst([&] {
               const TensorNormalParams p(instances::tensor(rng, shape), instances::spd(rng, shape));
               const auto x = instances::tensor(rng, shape);
               return std::abs(normal_log_density(p, x) - normal_log_density_vec_oracle(p, x));
           }),
           1e-10);
    record("elliptical-normal-kernel", worst([&] {
               const auto m = instances::tensor(rng, shape);
               const auto s = instances::spd(rng, shape);
               const auto x = instances::tensor(rng, shape);
               return std::abs(elliptical_log_density(EllipticalParams(m, s, normal_kernel()), x) -
                               normal_log_density(TensorNormalParams(m, s), x));
           }),
           1e-12);
    {
        const TensorNormalParams doubled(location, scale(2.0, s_dense));
        const double drop =
            normal_log_density(params, location) - normal_log_density(doubled, location);
        record("scale-doubling", std::abs(drop - 0.5 * static_cast<double>(n) * std::log(2.0)),
               1e-12);
    }

    // Kronecker structure
    record("kronecker-equivalence", worst([&] {
               const auto m = instances::tensor(rng, shape);
               const auto factors = instances::spd_factors(rng, shape);
               const TensorNormalParams structured(m, factors);
               const TensorNormalParams dense(m, kronecker_tensor(factors));
               double dev = 0.0;
               for (int probe = 0; probe < 4; ++probe) {
                   const auto x = instances::tensor(rng, shape);
                   dev = std::max(dev, std::abs(normal_log_density(dense, x) -
                                                normal_log_density(structured, x)));
               }
               return dev;
           }),
           1e-10);
    {
        // Sigma_1 = diag(1, 2, ...), others identity: the quadratic form of the
        // unit tensor at mode-1 index 1 must be 2.
        double dev = 0.0;
        if (shape.dim(0) >= 2) {
            std::vector<Eigen::MatrixXd> factors;
            for (std::size_t i = 0; i < shape.order(); ++i) {
                const auto d = static_cast<Eigen::Index>(shape.dim(i));
                Eigen::MatrixXd f = Eigen::MatrixXd::Identity(d, d);
                if (i == 0)
                    for (Eigen::Index k = 0; k < d; ++k)
                        f(k, k) = static_cast<double>(k + 1);
                factors.push_back(std::move(f));
            }
            const SquareTensor k = kronecker_tensor(KroneckerFactors(std::move(factors)));
            for (std::size_t off = 0; off < n; ++off) {
                std::vector<double> e(n, 0.0);
                e[off] = 1.0;
                const DenseTensor a(shape, std::move(e));
                const double expected = static_cast<double>(shape.multi_index(off)[0] + 1);
                dev = std::max(dev, std::abs(double_dot_quadratic(a, k, a) - expected));
            }
        }
        record("kronecker-mode-order", dev, 0.0);
    }
    return report;
}

}  // namespace tensorstat
