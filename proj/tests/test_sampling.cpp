#include <random>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include "haar/sampling.hpp"

using namespace haar;

namespace {

struct Stat {
    double mean = 0.0;
    double se = 0.0;
};

template <class F>
Stat stat_of(const std::vector<GroupElement>& xs, F&& f) {
    double s = 0.0, s2 = 0.0;
    for (const auto& g : xs) {
        const double v = f(g);
        s += v;
        s2 += v * v;
    }
    const double n = static_cast<double>(xs.size());
    Stat out;
    out.mean = s / n;
    out.se = std::sqrt(std::max(s2 / n - out.mean * out.mean, 0.0) / n);
    return out;
}

// |a - b| within k combined standard errors (floor for constant statistics)
void expect_close(const Stat& a, const Stat& b, double k, const std::string& what) {
    const double se = std::hypot(a.se, b.se);
    EXPECT_LE(std::abs(a.mean - b.mean), k * se + 1e-12) << what << ": " << a.mean << " vs " << b.mean;
}

std::vector<GroupElement> draw(GroupTag g, SamplerChart c, std::uint64_t seed, std::size_t n) {
    return sample({g, c, seed, n});
}

double tr(const GroupElement& g) { return g.matrix().trace(); }

} // namespace

TEST(Config, Validation) {
    EXPECT_THROW(Sampler({GroupTag::so3, SamplerChart::angle, 1, 10}), InvalidArgument);
    EXPECT_THROW(Sampler({GroupTag::so2, SamplerChart::euler, 1, 10}), InvalidArgument);
    EXPECT_THROW(Sampler({GroupTag::so3, SamplerChart::euler, 1, 0}), InvalidArgument);
    EXPECT_EQ(parse_sampler_chart("quat"), SamplerChart::quaternion);
    EXPECT_THROW(parse_sampler_chart("cayley"), UnknownTag);
}

TEST(Determinism, SameSeedSameStream) {
    for (auto [g, c] : {std::pair{GroupTag::so2, SamplerChart::angle}, {GroupTag::o2, SamplerChart::angle},
                        {GroupTag::so3, SamplerChart::euler}, {GroupTag::o3, SamplerChart::polar},
                        {GroupTag::so3, SamplerChart::quaternion}}) {
        const auto a = draw(g, c, 12345, 2), b = draw(g, c, 12345, 50), other = draw(g, c, 12346, 2);
        EXPECT_EQ(a[0].matrix(), b[0].matrix());
        EXPECT_EQ(a[1].matrix(), b[1].matrix());
        EXPECT_NE(a[0].matrix(), other[0].matrix());
    }
}

TEST(InvertCdf, Examples) {
    const auto f = [](double a) { return (a - std::sin(a)) / kPi; };
    const double x = invert_cdf(f, 0.5, 0.0, kPi);
    EXPECT_NEAR(f(x), 0.5, 1e-12);
    EXPECT_EQ(invert_cdf(f, 0.0, 0.0, kPi), 0.0);
    EXPECT_EQ(invert_cdf(f, 1.0, 0.0, kPi), kPi);
    for (double t : {0.0, 1e-9, 0.25, 0.7, 1.0}) EXPECT_NEAR(invert_cdf([](double v) { return v; }, t, 0.0, 1.0), t, 1e-12);

    // bisection oracle on a flat-start CDF
    for (double t : {1e-10, 1e-6, 0.01, 0.3, 0.999999}) {
        double lo = 0.0, hi = kPi;
        for (int k = 0; k < 200; ++k) (f(0.5 * (lo + hi)) < t ? lo : hi) = 0.5 * (lo + hi);
        EXPECT_NEAR(f(invert_cdf(f, t, 0.0, kPi)), t, 1e-12);
        EXPECT_NEAR(invert_cdf(f, t, 0.0, kPi, detail::angle_pdf), lo, 1e-6);
    }
}

TEST(InvertCdf, Errors) {
    const auto f = [](double v) { return v; };
    EXPECT_THROW(invert_cdf(f, 1.5, 0.0, 1.0), InvalidArgument);
    EXPECT_THROW(invert_cdf(f, 0.5, 1.0, 1.0), InvalidArgument);
    // a step function has no x with |F(x) - 0.5| < 1e-12
    EXPECT_THROW(invert_cdf([](double v) { return v < 0.3 ? 0.0 : 1.0; }, 0.5, 0.0, 1.0), ConvergenceError);
}

TEST(Marginals, EulerAngles) {
    Sampler s({GroupTag::so3, SamplerChart::euler, 9, 1});
    constexpr int n = 50000;
    double mean_cos_beta = 0.0, mean_alpha = 0.0, mean_gamma2 = 0.0;
    for (int k = 0; k < n; ++k) {
        const auto d = s.next();
        mean_alpha += d.coordinates[0] / n;
        mean_cos_beta += std::cos(d.coordinates[1]) / n;
        mean_gamma2 += d.coordinates[2] * d.coordinates[2] / n;
        ASSERT_TRUE(d.coordinates[1] >= 0.0 && d.coordinates[1] <= kPi);
    }
    // cos(beta) is uniform on [-1, 1]; alpha, gamma uniform on [-pi, pi]
    EXPECT_NEAR(mean_cos_beta, 0.0, 5 * std::sqrt(1.0 / 3 / n));
    EXPECT_NEAR(mean_alpha, 0.0, 5 * kPi * std::sqrt(1.0 / 3 / n));
    EXPECT_NEAR(mean_gamma2, kPi * kPi / 3, 5 * kPi * kPi * std::sqrt(4.0 / 45 / n));
}

TEST(Marginals, HyperpolarTheta) {
    Sampler s({GroupTag::so3, SamplerChart::quaternion, 10, 1});
    constexpr int n = 50000;
    double mean_cos2 = 0.0;
    for (int k = 0; k < n; ++k) {
        const double t = s.next().coordinates[0];
        mean_cos2 += std::cos(t) * std::cos(t) / n;
    }
    // E[cos^2 theta] under (2/pi) sin^2 theta is 1/4; Var[cos^2] = 1/8 - 1/16
    EXPECT_NEAR(mean_cos2, 0.25, 5 * std::sqrt(1.0 / 16 / n));
}

TEST(Moments, TraceMeansOverEveryChart) {
    constexpr std::size_t n = 100000;
    for (auto c : {SamplerChart::euler, SamplerChart::polar, SamplerChart::quaternion}) {
        const auto xs = draw(GroupTag::so3, c, 2024, n);
        const Stat t1 = stat_of(xs, tr), t2 = stat_of(xs, [](const GroupElement& g) { return std::pow(tr(g), 2); });
        EXPECT_LE(std::abs(t1.mean), 4 * t1.se) << to_string(c);
        EXPECT_LE(std::abs(t2.mean - 1.0), 4 * t2.se) << to_string(c);
    }
    const auto planar = draw(GroupTag::so2, SamplerChart::angle, 3, n);
    const Stat p2 = stat_of(planar, [](const GroupElement& g) { return std::pow(tr(g), 2); });
    EXPECT_LE(std::abs(p2.mean - 2.0), 5 * p2.se);
}

TEST(Invariance, LeftShiftLeavesMomentsUnchanged) {
    constexpr std::size_t n = 100000;
    const auto xs = draw(GroupTag::so3, SamplerChart::euler, 77, n);
    const GroupElement h = rodrigues(Vector3(1, 2, 2).normalized(), 1.3);
    std::vector<GroupElement> shifted;
    for (const auto& g : xs) shifted.push_back(h * g);
    const auto ys = draw(GroupTag::so3, SamplerChart::euler, 78, n);
    for (int a = 0; a < 9; ++a) {
        const auto entry = [a](const GroupElement& g) { return g.matrix()(a / 3, a % 3); };
        expect_close(stat_of(shifted, entry), stat_of(ys, entry), 5, "entry " + std::to_string(a));
        for (int b = a; b < 9; ++b) {
            const auto mono = [a, b](const GroupElement& g) { return g.matrix()(a / 3, a % 3) * g.matrix()(b / 3, b % 3); };
            expect_close(stat_of(shifted, mono), stat_of(ys, mono), 5, "monomial " + std::to_string(a) + "," + std::to_string(b));
        }
    }
}

TEST(Invariance, EulerAndQuaternionChartsAgree) {
    constexpr std::size_t n = 100000;
    const auto e = draw(GroupTag::so3, SamplerChart::euler, 5, n), q = draw(GroupTag::so3, SamplerChart::quaternion, 6, n);
    for (int a = 0; a < 9; ++a) {
        const auto entry = [a](const GroupElement& g) { return g.matrix()(a / 3, a % 3); };
        expect_close(stat_of(e, entry), stat_of(q, entry), 5, "entry " + std::to_string(a));
    }
    expect_close(stat_of(e, tr), stat_of(q, tr), 5, "Tr");
    const auto tr2 = [](const GroupElement& g) { return std::pow(tr(g), 2); };
    expect_close(stat_of(e, tr2), stat_of(q, tr2), 5, "Tr^2");
}

TEST(AngleLaw, ChiSquaredOnFiftyBins) {
    constexpr int bins = 50;
    constexpr std::size_t n = 200000;
    const auto cdf = [](double a) { return (a - std::sin(a)) / kPi; };
    for (auto c : {SamplerChart::euler, SamplerChart::polar, SamplerChart::quaternion}) {
        std::vector<double> counts(bins, 0.0);
        for (const auto& g : draw(GroupTag::so3, c, 31, n)) {
            const double a = std::acos(std::clamp((tr(g) - 1.0) / 2.0, -1.0, 1.0));
            counts[std::min(bins - 1, static_cast<int>(a / kPi * bins))] += 1.0;
        }
        double chi2 = 0.0;
        for (int b = 0; b < bins; ++b) {
            const double expected = n * (cdf(kPi * (b + 1) / bins) - cdf(kPi * b / bins));
            chi2 += std::pow(counts[b] - expected, 2) / expected;
        }
        const double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(bins - 1), chi2));
        EXPECT_GT(p, 0.001) << to_string(c) << " chi2 = " << chi2;
    }
}

TEST(FullOrthogonal, DeterminantCoinIsFair) {
    constexpr std::size_t n = 100000;
    for (auto [g, c] : {std::pair{GroupTag::o3, SamplerChart::euler}, {GroupTag::o2, SamplerChart::angle}}) {
        std::size_t reflected = 0;
        for (const auto& x : draw(g, c, 8, n)) {
            const double det = x.matrix().determinant();
            ASSERT_NEAR(std::abs(det), 1.0, 1e-12);
            if (det < 0) ++reflected;
        }
        EXPECT_NEAR(static_cast<double>(reflected) / n, 0.5, 5 * std::sqrt(0.25 / n));
    }
}

TEST(Quaternions, MatchGaussianNormalizedOracle) {
    // uniform points on S^3 by normalizing standard Gaussian 4-vectors
    constexpr std::size_t n = 100000;
    std::mt19937_64 rng(99);
    std::normal_distribution<double> gauss(0, 1);
    std::vector<Eigen::Vector4d> oracle;
    for (std::size_t k = 0; k < n; ++k) {
        Eigen::Vector4d v(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
        oracle.push_back(v.normalized());
    }
    std::vector<Eigen::Vector4d> drawn;
    for (const auto& q : sample_quaternions(100, n)) {
        ASSERT_NEAR(q.norm(), 1.0, 1e-12);
        drawn.push_back(q.coeffs());
    }
    const auto stats = [](const std::vector<Eigen::Vector4d>& xs, auto f) {
        double s = 0.0, s2 = 0.0;
        for (const auto& x : xs) {
            const double v = f(x);
            s += v;
            s2 += v * v;
        }
        const double m = s / xs.size();
        return Stat{m, std::sqrt((s2 / xs.size() - m * m) / xs.size())};
    };
    for (int i = 0; i < 4; ++i) {
        expect_close(stats(drawn, [i](const Eigen::Vector4d& x) { return x(i); }),
                     stats(oracle, [i](const Eigen::Vector4d& x) { return x(i); }), 5, "q" + std::to_string(i));
        for (int j = i; j < 4; ++j) {
            expect_close(stats(drawn, [i, j](const Eigen::Vector4d& x) { return x(i) * x(i) * x(j) * x(j); }),
                         stats(oracle, [i, j](const Eigen::Vector4d& x) { return x(i) * x(i) * x(j) * x(j); }), 5,
                         "q" + std::to_string(i) + "^2 q" + std::to_string(j) + "^2");
        }
    }
}
