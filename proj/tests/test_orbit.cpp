#include <random>

#include <gtest/gtest.h>

#include "haar/orbit.hpp"

using namespace haar;

namespace {

const GroupQuadrature& so3() {
    static const GroupQuadrature q = GroupQuadrature::build(GroupTag::so3, 24);
    return q;
}

Tensor diag(double a, double b, double c) {
    return Tensor::from_matrix(Eigen::Vector3d(a, b, c).asDiagonal().toDenseMatrix());
}

double kron(int a, int b) { return a == b ? 1.0 : 0.0; }

// delta_ik delta_jl + delta_il delta_jk
Tensor pair_symmetrizer() {
    Tensor s(3, 4);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) s(i, j, k, l) = kron(i, k) * kron(j, l) + kron(i, l) * kron(j, k);
    return s;
}

// Second moment of g v g^T for symmetric v: an isotropic tensor with the
// symmetries of v (x) v, hence a J2 + b S. The contractions m_iikk and m_ikik give
//   t1^2 = 9a + 6b  and  t2 = 3a + 12b,
// so a = (2 t1^2 - t2)/15 and b = (3 t2 - t1^2)/30.
Tensor isotropic_m2(const Matrix3& v) {
    const double t1 = v.trace(), t2 = (v * v).trace();
    const double a = (2 * t1 * t1 - t2) / 15.0, b = (3 * t2 - t1 * t1) / 30.0;
    return j2() * a + pair_symmetrizer() * b;
}

Matrix3 random_symmetric(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2, 2);
    Matrix3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) m(i, j) = m(j, i) = u(rng);
    return m;
}

GroupElement random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0, 1);
    std::uniform_real_distribution<double> a(0, kPi);
    return rodrigues(Vector3(g(rng), g(rng), g(rng)).normalized(), a(rng));
}

double contract(const Tensor& t, bool crossed) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) s += crossed ? t(i, k, i, k) : t(i, i, k, k);
    return s;
}

} // namespace

TEST(OrbitSpecTest, Validation) {
    EXPECT_THROW(OrbitSpec(GroupTag::so3, Representation::natural, Tensor::identity(3)), DimensionError);
    EXPECT_THROW(OrbitSpec(GroupTag::so3, Representation::sym2, Tensor::from_vector(Vector3(1, 2, 3))), DimensionError);
    EXPECT_THROW(OrbitSpec(GroupTag::so2, Representation::sym2, diag(1, 2, 3)), DimensionError);
    Matrix skewed = Matrix::Identity(3, 3);
    skewed(0, 1) = 1e-6;
    EXPECT_THROW(OrbitSpec(GroupTag::so3, Representation::sym2, Tensor::from_matrix(skewed)), InvalidArgument);
    EXPECT_EQ(parse_representation("sym2"), Representation::sym2);
    EXPECT_THROW(parse_representation("spin"), UnknownTag);

    const OrbitSpec s(GroupTag::so3, Representation::sym2, diag(1, 2, 3));
    EXPECT_THROW(moment(s, 0, so3()), InvalidArgument);
    EXPECT_THROW(moment(s, 6, so3()), CapacityError);
}

TEST(FirstMoment, InvariantSeedIsFixed) {
    const OrbitSpec s(GroupTag::so3, Representation::sym2, Tensor::identity(3));
    EXPECT_LT(max_abs_diff(moment(s, 1, so3()), Tensor::identity(3)), 1e-10);
    EXPECT_LT(covariance(s, so3()).max_abs(), 1e-9);
}

TEST(FirstMoment, TraceOverThreeTimesIdentity) {
    for (auto [a, b, c] : {std::tuple{1.0, 2.0, 3.0}, {-1.0, 0.5, 4.0}, {0.0, 0.0, 1.0}}) {
        const OrbitSpec s(GroupTag::so3, Representation::sym2, diag(a, b, c));
        EXPECT_LT(max_abs_diff(moment(s, 1, so3()), Tensor::identity(3) * ((a + b + c) / 3)), 1e-8);
    }
    const OrbitSpec vec(GroupTag::so3, Representation::natural, Tensor::from_vector(Vector3(1, 2, 3)));
    EXPECT_LT(moment(vec, 1, so3()).max_abs(), 1e-10);
}

TEST(SecondMoment, IsotropicDecomposition) {
    const OrbitSpec s(GroupTag::so3, Representation::sym2, diag(1, 2, 3));
    const Tensor m2 = moment(s, 2, so3());
    EXPECT_LT(max_abs_diff(m2, isotropic_m2(Vector3(1, 2, 3).asDiagonal().toDenseMatrix())), 1e-8);
    EXPECT_NEAR(m2(0, 0, 0, 0), 64.0 / 15, 1e-8);
    EXPECT_NEAR(m2(0, 0, 1, 1), 58.0 / 15, 1e-8);
    EXPECT_NEAR(m2(0, 1, 0, 1), 0.2, 1e-8);

    std::mt19937_64 rng(5);
    for (int k = 0; k < 5; ++k) {
        const Matrix3 v = random_symmetric(rng);
        const OrbitSpec r(GroupTag::so3, Representation::sym2, Tensor::from_matrix(v));
        EXPECT_LT(max_abs_diff(moment(r, 2, so3()), isotropic_m2(v)), 1e-8);
    }
}

TEST(SecondMoment, CovarianceSignConventions) {
    const OrbitSpec s(GroupTag::so3, Representation::sym2, diag(1, 2, 3));
    const Tensor cov = covariance(s, so3());
    // m2 - m1 (x) m1 with m1 = 2I: b (S - 2/3 J2), b = (3 t2 - t1^2)/30 = 1/5
    const Tensor want = (pair_symmetrizer() - j2() * (2.0 / 3.0)) * 0.2;
    EXPECT_LT(max_abs_diff(cov, want), 1e-8);
    EXPECT_LT(max_abs_diff(covariance_reversed(s, so3()), want * -1.0), 1e-8);
}

TEST(SecondMoment, ClosedFormGetsContractionsButNotTheTensor) {
    // The (J1, J2) closed form reproduces the two full contractions E[(Tr v)^2]
    // and E[Tr v^2], but J1 is not isotropic, so the tensors differ.
    const Matrix3 v = Vector3(1, 2, 3).asDiagonal();
    const Tensor closed = sym2_m2_closed_form(v);
    const Tensor m2 = moment(OrbitSpec(GroupTag::so3, Representation::sym2, Tensor::from_matrix(v)), 2, so3());
    EXPECT_NEAR(contract(closed, false), 36.0, 1e-12);
    EXPECT_NEAR(contract(closed, true), 14.0, 1e-12);
    EXPECT_NEAR(contract(m2, false), 36.0, 1e-8);
    EXPECT_NEAR(contract(m2, true), 14.0, 1e-8);
    EXPECT_GT(max_abs_diff(closed, m2), 0.1);
    EXPECT_GT(decompose_j1_j2(m2).residual, 0.1);

    std::mt19937_64 rng(6);
    const auto g = random_rotation(rng);
    EXPECT_GT(max_abs_diff(act(g, j1()), j1()), 0.01);
}

TEST(SecondMoment, ProjectionOnTheCovarianceDirection) {
    const OrbitSpec s(GroupTag::so3, Representation::sym2, diag(1, 2, 3));
    const auto p = project_onto(covariance_reversed(s, so3()), sym2_covariance_direction());
    // <b (2/3 J2 - S), J2/3 - J1> / <J2/3 - J1, J2/3 - J1> with b = 1/5
    EXPECT_NEAR(p.coefficient, 0.4, 1e-8);
    EXPECT_GT(p.residual, 0.1);
}

TEST(Invariance, MomentsAreFixedByTheGroup) {
    std::mt19937_64 rng(7);
    const OrbitSpec s(GroupTag::so3, Representation::sym2, Tensor::from_matrix(random_symmetric(rng)));
    const Tensor m1 = moment(s, 1, so3()), m2 = moment(s, 2, so3());
    for (int k = 0; k < 20; ++k) {
        const auto g = random_rotation(rng);
        EXPECT_LT(max_abs_diff(act(g, m1), m1), 1e-7);
        EXPECT_LT(max_abs_diff(act(g, m2), m2), 1e-7);
    }
}

TEST(MonteCarlo, SingleDrawIsExact) {
    const OrbitSpec s(GroupTag::so3, Representation::sym2, diag(1, 2, 3));
    const SamplerConfig cfg{GroupTag::so3, SamplerChart::euler, 17, 1};
    const auto est = mc_moments(s, 1, cfg);
    Sampler sampler(cfg);
    EXPECT_EQ(max_abs_diff(est.mean, s.point(sampler.next().element)), 0.0);
    EXPECT_EQ(est.standard_error.max_abs(), 0.0);
    EXPECT_EQ(est.count, 1u);
    EXPECT_THROW(mc_moments(s, 1, {GroupTag::o3, SamplerChart::euler, 1, 1}), InvalidArgument);
}

TEST(MonteCarlo, AgreesWithQuadrature) {
    const OrbitSpec s(GroupTag::so3, Representation::sym2, diag(1, 2, 3));
    const SamplerConfig cfg{GroupTag::so3, SamplerChart::quaternion, 2025, 100000};
    for (int r : {1, 2}) {
        const auto est = mc_moments(s, r, cfg);
        const Tensor exact = moment(s, r, so3());
        for (std::size_t e = 0; e < exact.size(); ++e)
            EXPECT_LE(std::abs(est.mean[e] - exact[e]), 5 * est.standard_error[e] + 1e-12) << "r=" << r << " entry " << e;
    }
}
