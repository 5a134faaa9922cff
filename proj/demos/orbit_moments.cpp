// Mean and covariance of g v g^T for a uniformly random rotation g.

#include <array>
#include <cstdio>
#include <cstdlib>

#include "haar.hpp"

int main(int argc, char** argv) {
    using namespace haar;
    Eigen::Vector3d lambda(1, 2, 3);
    for (int i = 1; i < argc && i <= 3; ++i) lambda(i - 1) = std::atof(argv[i]);

    const OrbitSpec spec(GroupTag::so3, Representation::sym2,
                         Tensor::from_matrix(lambda.asDiagonal().toDenseMatrix()));
    const auto quad = GroupQuadrature::build(GroupTag::so3, 24);

    const Tensor m1 = moment(spec, 1, quad);
    std::printf("E[X] (expect Tr v / 3 = %.6f on the diagonal)\n", lambda.sum() / 3);
    const Matrix mean = m1.to_matrix();
    for (int i = 0; i < 3; ++i) std::printf("  %10.6f %10.6f %10.6f\n", mean(i, 0), mean(i, 1), mean(i, 2));

    const Tensor cov = covariance(spec, quad);
    std::printf("Cov[X] entries\n");
    for (auto [i, j, k, l] : {std::array{0, 0, 0, 0}, {0, 0, 1, 1}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 0, 1}})
        std::printf("  C_%d%d%d%d = %10.6f\n", i + 1, j + 1, k + 1, l + 1, cov(i, j, k, l));

    const auto mc = mc_moments(spec, 1, {GroupTag::so3, SamplerChart::quaternion, 42, 20000});
    std::printf("Monte Carlo E[X_11] = %.4f +- %.4f (20000 draws)\n", mc.mean(0, 0), mc.standard_error(0, 0));
}
