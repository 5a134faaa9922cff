#include <random>

#include <gtest/gtest.h>

#include "haar/reynolds.hpp"

using namespace haar;

namespace {

const GroupQuadrature& quadrature(GroupTag g) {
    static const GroupQuadrature so3 = GroupQuadrature::build(GroupTag::so3, 24);
    static const GroupQuadrature o3 = GroupQuadrature::build(GroupTag::o3, 24);
    static const GroupQuadrature so2 = GroupQuadrature::build(GroupTag::so2, 32);
    static const GroupQuadrature o2 = GroupQuadrature::build(GroupTag::o2, 32);
    switch (g) {
    case GroupTag::so3: return so3;
    case GroupTag::o3: return o3;
    case GroupTag::so2: return so2;
    default: return o2;
    }
}

Tensor random_tensor(int dim, int order, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    Tensor t(dim, order);
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = u(rng);
    return t;
}

GroupElement random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0, 1);
    std::uniform_real_distribution<double> a(0, kPi);
    return rodrigues(Vector3(g(rng), g(rng), g(rng)).normalized(), a(rng));
}

Tensor vec(double a, double b, double c) { return Tensor::from_vector(Vector3(a, b, c)); }

} // namespace

TEST(Act, IdentityAndCompositionLaw) {
    std::mt19937_64 rng(1);
    const Tensor t = random_tensor(3, 3, rng);
    EXPECT_EQ(max_abs_diff(act(GroupElement::identity(3), t), t), 0.0);
    for (int k = 0; k < 20; ++k) {
        const auto g = random_rotation(rng), h = random_rotation(rng);
        EXPECT_LT(max_abs_diff(act(g, act(h, t)), act(g * h, t)), 1e-12);
    }
}

TEST(Act, RankOneTensorRotatesItsFactors) {
    const auto r = rodrigues(Vector3::UnitZ(), kPi / 2);
    const Tensor e1 = vec(1, 0, 0);
    const Tensor image = act(r, outer(e1, e1));
    const Tensor re1 = Tensor::from_vector(r.matrix() * Vector3::UnitX());
    EXPECT_LT(max_abs_diff(image, outer(re1, re1)), 1e-15);
    // the quarter turn sends e1 to -e2, so only the (2,2) entry survives
    EXPECT_NEAR(image(1, 1), 1.0, 1e-15);
}

TEST(Act, MatchesExplicitIndexSum) {
    std::mt19937_64 rng(2);
    const Tensor t = random_tensor(3, 3, rng);
    const Matrix g = random_rotation(rng).matrix();
    const Tensor image = act(g, t);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                double s = 0.0;
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b)
                        for (int c = 0; c < 3; ++c) s += g(i, a) * g(j, b) * g(k, c) * t(a, b, c);
                EXPECT_NEAR(image(i, j, k), s, 1e-13);
            }
    EXPECT_THROW(act(Matrix::Identity(2, 2), t), DimensionError);
}

TEST(FiniteGroup, Validation) {
    EXPECT_THROW(FiniteGroup::from_elements({}), InvalidArgument);
    EXPECT_THROW(FiniteGroup::from_elements({rodrigues(Vector3::UnitZ(), kPi)}), InvalidArgument);
    EXPECT_THROW(FiniteGroup::from_elements({GroupElement::identity(3), rodrigues(Vector3::UnitZ(), kPi / 2)}),
                 InvalidArgument);
    EXPECT_EQ(FiniteGroup::cyclic(Vector3::UnitX(), 6).order(), 6u);
}

TEST(FiniteGroup, HandComputedAverages) {
    const Tensor v = vec(1, 2, 3);
    const auto trivial = FiniteGroup::from_elements({GroupElement::identity(3)});
    EXPECT_EQ(max_abs_diff(reynolds_finite(trivial, v), v), 0.0);

    // (1,2,3) and its half-turn image (-1,-2,3) average to (0,0,3)
    const auto c2 = FiniteGroup::cyclic(Vector3::UnitZ(), 2);
    EXPECT_LT(max_abs_diff(reynolds_finite(c2, v), vec(0, 0, 3)), 1e-15);

    // images of e1 (x) e1 under the quarter turns: e1e1, e2e2, e1e1, e2e2
    const auto c4 = FiniteGroup::cyclic(Vector3::UnitZ(), 4);
    const Tensor e1 = vec(1, 0, 0), e2 = vec(0, 1, 0);
    const Tensor want = (outer(e1, e1) + outer(e2, e2)) * 0.5;
    const Tensor got = reynolds_finite(c4, outer(e1, e1));
    EXPECT_LT(max_abs_diff(got, want), 1e-15);
    EXPECT_LT(max_abs_diff(reynolds_finite(c4, got), got), 1e-15);
}

TEST(Continuous, KnownAverages) {
    const auto& so3 = quadrature(GroupTag::so3);
    EXPECT_LT(max_abs_diff(reynolds_continuous(so3, Tensor::identity(3)), Tensor::identity(3)), 1e-10);
    const Tensor d = Tensor::from_matrix(Eigen::Vector3d(1, 2, 3).asDiagonal().toDenseMatrix());
    EXPECT_LT(max_abs_diff(reynolds_continuous(so3, d), Tensor::identity(3) * 2.0), 1e-8);

    const Tensor e1 = vec(1, 0, 0);
    EXPECT_LT(reynolds_continuous(quadrature(GroupTag::o3), outer(outer(e1, e1), e1)).max_abs(), 1e-8);
    // the Levi-Civita symbol is hemitropic: fixed by SO(3), killed by O(3)
    Tensor eps(3, 3);
    for (int i = 0; i < 3; ++i) {
        eps[static_cast<std::size_t>(9 * i + 3 * ((i + 1) % 3) + (i + 2) % 3)] = 1.0;
        eps[static_cast<std::size_t>(9 * i + 3 * ((i + 2) % 3) + (i + 1) % 3)] = -1.0;
    }
    EXPECT_LT(max_abs_diff(reynolds_continuous(so3, eps), eps), 1e-8);
    EXPECT_LT(reynolds_continuous(quadrature(GroupTag::o3), eps).max_abs(), 1e-8);
}

TEST(Continuous, ProjectorIsIdempotentAndEquivariant) {
    std::mt19937_64 rng(4);
    const auto& so3 = quadrature(GroupTag::so3);
    for (int order = 1; order <= 4; ++order) {
        const Tensor r = reynolds_continuous(so3, random_tensor(3, order, rng));
        EXPECT_LT(max_abs_diff(reynolds_continuous(so3, r), r), 1e-7) << order;
        for (int k = 0; k < 20; ++k) EXPECT_LT(max_abs_diff(act(random_rotation(rng), r), r), 1e-7) << order;
    }
}

TEST(Rank, MatchesInvariantDimension) {
    const auto& so3 = quadrature(GroupTag::so3);
    for (int n : {2, 3, 4}) {
        const Matrix op = reynolds_operator(so3, n);
        EXPECT_EQ(numerical_rank(op), static_cast<int>(dim_invariants_closed(GroupTag::so3, n))) << n;
        EXPECT_LT((op * op - op).cwiseAbs().maxCoeff(), 1e-8) << n;
    }
    EXPECT_EQ(numerical_rank(reynolds_operator(quadrature(GroupTag::o3), 3)), 0);
    EXPECT_THROW(reynolds_operator(so3, 9), CapacityError);
}

TEST(Closed, DimensionTable) {
    const std::pair<int, long long> table[] = {{0, 1},  {1, 0},  {2, 1},      {3, 1},      {4, 3},       {5, 6},
                                              {6, 15}, {8, 91}, {15, 83097}, {16, 227475}, {20, 13393689}};
    for (auto [n, d] : table) {
        EXPECT_EQ(dim_invariants_closed(GroupTag::so3, n), BigInt(d)) << n;
        EXPECT_EQ(dim_invariants_closed(GroupTag::o3, n), n % 2 ? BigInt(0) : BigInt(d)) << n;
    }
    // central binomials for the plane rotations
    EXPECT_EQ(dim_invariants_closed(GroupTag::so2, 4), BigInt(6));
    EXPECT_EQ(dim_invariants_closed(GroupTag::o2, 4), BigInt(3));
    EXPECT_EQ(dim_invariants_closed(GroupTag::o2, 0), BigInt(1));
    // large orders need more than 64 bits
    EXPECT_GT(dim_invariants_closed(GroupTag::so3, 60), BigInt(std::numeric_limits<std::uint64_t>::max()));
    EXPECT_THROW(dim_invariants_closed(GroupTag::so3, -1), InvalidArgument);
}

TEST(Closed, RecurrenceOracle) {
    // Riordan-style count: number of ways the trivial representation appears in
    // the n-th tensor power, by iterating the Clebsch-Gordan rule on multiplicities.
    std::vector<BigInt> mult{1}; // mult[l] = multiplicity of spin l
    for (int n = 0; n <= 30; ++n) {
        EXPECT_EQ(dim_invariants_closed(GroupTag::so3, n), mult[0]) << n;
        std::vector<BigInt> next(mult.size() + 1, 0);
        for (std::size_t l = 0; l < mult.size(); ++l) {
            if (mult[l] == 0) continue;
            // spin l (x) spin 1 = spin l-1 + spin l + spin l+1, without spin l when l = 0
            if (l > 0) next[l - 1] += mult[l], next[l] += mult[l];
            next[l + 1] += mult[l];
        }
        mult = std::move(next);
    }
}

TEST(Reduced, AgreesWithClosedFormUpToTwelve) {
    for (auto g : {GroupTag::so2, GroupTag::o2, GroupTag::so3, GroupTag::o3})
        for (int n = 0; n <= 12; ++n) {
            const auto e = dim_invariants_reduced(g, n);
            EXPECT_TRUE(e.resolved) << to_string(g) << " " << n;
            EXPECT_NEAR(e.value, static_cast<double>(dim_invariants_closed(g, n)), 1e-6) << to_string(g) << " " << n;
        }
    EXPECT_NEAR(dim_invariants_reduced(GroupTag::so3, 20).value, 13393689.0, 1e-3);
}

TEST(Quadrature, TraceFormulaExamples) {
    EXPECT_NEAR(dim_invariants_quadrature(quadrature(GroupTag::so3), 6).value, 15.0, 1e-6);
    EXPECT_NEAR(dim_invariants_quadrature(quadrature(GroupTag::o3), 5).value, 0.0, 1e-8);
    // mean of (2 cos a)^2 over the circle is 2
    EXPECT_NEAR(dim_invariants_quadrature(quadrature(GroupTag::so2), 2).value, 2.0, 1e-10);
    for (int n = 0; n <= 8; ++n)
        EXPECT_EQ(dim_invariants_quadrature(quadrature(GroupTag::o3), n).nearest,
                  static_cast<long long>(dim_invariants_closed(GroupTag::o3, n)));
}

TEST(Quadrature, UnderResolutionIsFlagged) {
    const auto coarse = GroupQuadrature::build(GroupTag::so3, 3);
    EXPECT_FALSE(dim_invariants_quadrature(coarse, 12).resolved);
    EXPECT_FALSE(make_estimate(2.01).resolved);
    EXPECT_TRUE(make_estimate(2.0005).resolved);
}

TEST(Sym2, OneInvariantSymmetricMatrix) {
    const auto e = dim_invariants_sym2(quadrature(GroupTag::so3));
    EXPECT_NEAR(e.value, 1.0, 1e-10);
    // the naive squared trace counts the antisymmetric part too
    const double naive =
        quadrature(GroupTag::so3).integrate([](const GroupElement& g) { return std::pow(g.matrix().trace(), 2); });
    EXPECT_NEAR(naive, 1.0, 1e-10);
    const auto rho = sym2_representation(rodrigues(Vector3(0, 0.6, 0.8), 1.1));
    EXPECT_LT((rho * rho.transpose() - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_THROW(sym2_representation(rotation2(0.1)), DimensionError);
}

TEST(Tensor, CapacityGuard) {
    EXPECT_NO_THROW(Tensor(3, 10));
    EXPECT_THROW(Tensor(3, 11), CapacityError);
}
