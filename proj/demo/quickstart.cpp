// Fit a tensor normal to draws from a Kronecker-structured model and compare
// the fitted and true log densities at the true location.

#include "tensorstat/tensorstat.hpp"

#include <cstdio>

int main() {
    using namespace tensorstat;

    const Shape shape{2, 3};
    Eigen::MatrixXd rows(2, 2), cols(3, 3);
    rows << 1.0, 0.3, 0.3, 2.0;
    cols << 1.0, 0.2, 0.0, 0.2, 1.0, 0.2, 0.0, 0.2, 1.0;

    const TensorNormalParams truth(DenseTensor::zeros(shape), KroneckerFactors({rows, cols}));
    const SampleSet draws = normal_sample(truth, RngSeed{42, 0}, 50000);
    const TensorNormalParams fitted = fit_normal(draws);

    std::printf("det(mat(S))       true %.6f\n", det(truth.scale().dense_tensor()));
    std::printf("det(mat(S_hat))   fit  %.6f\n", det(fitted.scale().dense_tensor()));
    std::printf("log f(M)          true %.6f  fit %.6f\n",
                normal_log_density(truth, truth.location()),
                normal_log_density(fitted, truth.location()));
    return 0;
}
