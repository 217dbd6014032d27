// tensorstat: command-line front end.
//
// Exit codes: 0 success, 1 verification failure, 2 input/format error,
// 3 mathematical precondition failure.

#include "tensorstat/tensorstat.hpp"

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace tensorstat;

constexpr int kExitVerifyFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitMath = 3;

void print_number(double v) { std::printf("%.17g\n", v); }

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
    if (flag)
        return *flag;
    if (const char* env = std::getenv("TENSORSTAT_SEED")) {
        try {
            std::size_t used = 0;
            const std::string text(env);
            const auto v = std::stoull(text, &used);
            if (used == text.size())
                return v;
        } catch (const std::exception&) {
        }
        throw ArgumentError(std::string("TENSORSTAT_SEED is not an unsigned integer: ") + env);
    }
    return fallback;
}

Normalization parse_normalization(const std::string& s) {
    return s == "mle" ? Normalization::mle : Normalization::unbiased;
}

void print_summary(const Shape& shape, const Eigen::MatrixXd& m, bool square) {
    std::fprintf(stderr, "shape: %s\n", shape.to_string().c_str());
    if (!square) {
        std::fprintf(stderr, "symmetry residual: n/a\nmin eigenvalue: n/a\n");
        return;
    }
    std::fprintf(stderr, "symmetry residual: %.17g\n", symmetry_residual(m));
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    std::fprintf(stderr, "min eigenvalue: %.17g\n",
                 Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly)
                     .eigenvalues()
                     .minCoeff());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random-tensor statistics: tensor linear algebra, covariance tensors, "
                 "tensor normal and elliptical distributions"};
    app.require_subcommand(1);

    // det / invert / matricize
    std::string in_path, out_path;
    auto* det_cmd = app.add_subcommand("det", "Print det(mat(X)) of a square2d tensor");
    det_cmd->add_option("input", in_path, "square2d tensor file")->required();

    auto* inv_cmd = app.add_subcommand("invert", "Write the inverse tensor");
    inv_cmd->add_option("input", in_path, "square2d tensor file")->required();
    inv_cmd->add_option("output", out_path, "output file")->required();

    auto* mat_cmd = app.add_subcommand("matricize", "Write mat(X) as an nstar x nstar tensor");
    mat_cmd->add_option("input", in_path, "square2d tensor file")->required();
    mat_cmd->add_option("output", out_path, "output file")->required();

    // estimate
    std::string kind = "cov", normalization = "unbiased", other_path;
    bool substitute = false;
    auto* est_cmd = app.add_subcommand("estimate", "Estimate a covariance/correlation tensor");
    est_cmd->add_option("samples", in_path, "sample file or directory of tensor files")
        ->required();
    est_cmd->add_option("--kind", kind, "cov | corr | crosscov | crosscorr")
        ->check(CLI::IsMember({"cov", "corr", "crosscov", "crosscorr"}));
    est_cmd->add_option("--normalization", normalization, "unbiased | mle")
        ->check(CLI::IsMember({"unbiased", "mle"}));
    est_cmd->add_option("--other", other_path, "second sample set for cross kinds");
    est_cmd->add_flag("--substitute-degenerate", substitute,
                      "correlation of zero-variance cells: 1 on the diagonal, 0 elsewhere");
    est_cmd->add_option("-o,--output", out_path, "output file")->required();

    // density
    std::string params_path, point_path, family = "normal";
    bool log_density = false;
    auto* den_cmd = app.add_subcommand("density", "Evaluate a tensor normal/elliptical density");
    den_cmd->add_option("params", params_path, "parameter file")->required();
    den_cmd->add_option("point", point_path, "tensor file")->required();
    den_cmd->add_option("--family", family, "normal | student:<nu>");
    den_cmd->add_flag("--log", log_density, "print the log density");

    // sample
    std::size_t count = 0;
    std::optional<std::uint64_t> seed_flag;
    std::uint64_t stream = 0;
    auto* smp_cmd = app.add_subcommand("sample", "Draw samples from a tensor distribution");
    smp_cmd->add_option("params", params_path, "parameter file")->required();
    smp_cmd->add_option("--count", count, "number of draws")->required();
    smp_cmd->add_option("--seed", seed_flag, "RNG seed (default: $TENSORSTAT_SEED, else 0)");
    smp_cmd->add_option("--stream", stream, "RNG substream");
    smp_cmd->add_option("--family", family, "normal | student:<nu>");
    smp_cmd->add_option("-o,--output", out_path, "output sample file")->required();

    // verify
    std::size_t n_samples = 100000, trials = 50;
    std::string shape_spec = "2x2", corrupt;
    auto* ver_cmd = app.add_subcommand("verify", "Run the property and Monte-Carlo checks");
    ver_cmd->add_option("--seed", seed_flag, "RNG seed (default: $TENSORSTAT_SEED)");
    ver_cmd->add_option("--n", n_samples, "Monte-Carlo sample size");
    ver_cmd->add_option("--shape", shape_spec, "tensor shape, e.g. 2x2 or 3x2x2");
    ver_cmd->add_option("--trials", trials, "random instances per algebraic check");
    ver_cmd->add_option("--corrupt", corrupt, "test hook: break the named check (det-product)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (*det_cmd) {
            print_number(det(io::as_square(io::read_tensor_file(in_path))));
        } else if (*inv_cmd) {
            io::write_tensor_file(out_path, inverse(io::as_square(io::read_tensor_file(in_path))));
        } else if (*mat_cmd) {
            const SquareTensor x = io::as_square(io::read_tensor_file(in_path));
            const std::size_t n = x.extent();
            io::write_tensor_file(out_path, DenseTensor(Shape{n, n}, std::vector<double>(
                                                                         x.data().begin(),
                                                                         x.data().end())));
        } else if (*est_cmd) {
            const SampleSet s = io::read_sample_file(in_path).samples;
            const Normalization norm = parse_normalization(normalization);
            const auto policy = substitute ? DegeneratePolicy::substitute : DegeneratePolicy::error;
            if (!other_path.empty() && (kind == "cov" || kind == "corr"))
                throw ArgumentError("--other applies only to crosscov and crosscorr");
            if (kind == "cov") {
                const auto k = covariance(s, norm).value;
                print_summary(k.row_shape().concat(k.row_shape()), matricize(k), true);
                io::write_tensor_file(out_path, k);
            } else if (kind == "corr") {
                const auto r = correlation(s, policy).value;
                print_summary(r.row_shape().concat(r.row_shape()), matricize(r), true);
                io::write_tensor_file(out_path, r);
            } else {
                const SampleSet t = other_path.empty() ? s : io::read_sample_file(other_path).samples;
                const DenseTensor value = kind == "crosscov"
                                              ? cross_covariance(s, t, norm).value
                                              : cross_correlation(s, t, policy).value;
                const auto rows = static_cast<Eigen::Index>(s.shape().nstar());
                const auto cols = static_cast<Eigen::Index>(t.shape().nstar());
                const Eigen::MatrixXd m =
                    Eigen::Map<const Eigen::MatrixXd>(value.data().data(), rows, cols);
                const bool square = s.shape() == t.shape();
                print_summary(value.shape(), m, square);
                if (square)
                    io::write_tensor_file(out_path, SquareTensor::from_tensor(value));
                else
                    io::write_tensor_file(out_path, value);
            }
        } else if (*den_cmd) {
            io::ParamsFile p = io::read_params_file(params_path);
            const DenseTensor x = io::as_dense(io::read_tensor_file(point_path));
            double value = 0.0;
            if (family == "normal") {
                value = normal_log_density(TensorNormalParams(p.location, p.scale), x);
            } else {
                const EllipticalParams e(p.location, p.scale, kernel_from_id(family));
                value = elliptical_log_density(e, x);
            }
            print_number(log_density ? value : std::exp(value));
        } else if (*smp_cmd) {
            io::ParamsFile p = io::read_params_file(params_path);
            const RngSeed seed{resolve_seed(seed_flag, 0), stream};
            const SampleSet s =
                family == "normal"
                    ? normal_sample(TensorNormalParams(p.location, p.scale), seed, count)
                    : elliptical_sample(EllipticalParams(p.location, p.scale, kernel_from_id(family)),
                                        seed, count);
            io::write_sample_file(out_path, s, seed.seed, seed.stream);
        } else if (*ver_cmd) {
            VerifyConfig cfg;
            cfg.seed = resolve_seed(seed_flag, cfg.seed);
            cfg.samples = n_samples;
            cfg.shape = parse_shape(shape_spec);
            cfg.trials = trials;
            cfg.corrupt = corrupt;
            const VerifyReport report = run_verify(cfg);
            std::cout << report.to_text();
            return report.all_passed() ? 0 : kExitVerifyFailed;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const MathError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMath;
    }
    return 0;
}
