#pragma once

// Haar-uniform sampling by inverse CDF on each coordinate of a built-in chart.
// Every chart's normalized density factorizes over its coordinates, so the
// coordinates are drawn independently, each from its own RNG substream.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "haar/errors.hpp"
#include "haar/group.hpp"
#include "haar/parametrisations.hpp"

namespace haar {

enum class SamplerChart { angle, euler, polar, quaternion };

inline std::string_view to_string(SamplerChart c) {
    switch (c) {
    case SamplerChart::angle: return "angle";
    case SamplerChart::euler: return "euler";
    case SamplerChart::polar: return "polar";
    case SamplerChart::quaternion: return "quaternion";
    }
    return "?";
}

inline SamplerChart parse_sampler_chart(std::string_view s) {
    if (s == "angle") return SamplerChart::angle;
    if (s == "euler") return SamplerChart::euler;
    if (s == "polar") return SamplerChart::polar;
    if (s == "quaternion" || s == "quat") return SamplerChart::quaternion;
    throw UnknownTag("unknown sampler chart '" + std::string(s) + "' (expected angle, euler, polar or quaternion)");
}

struct SamplerConfig {
    GroupTag group = GroupTag::so3;
    SamplerChart chart = SamplerChart::euler;
    std::uint64_t seed = 0;
    std::size_t count = 1;

    void validate() const {
        const bool planar = group_dimension(group) == 2;
        if (planar != (chart == SamplerChart::angle))
            throw InvalidArgument("sampler chart '" + std::string(to_string(chart)) + "' is not a chart of " +
                                  std::string(to_string(group)));
        if (count == 0) throw InvalidArgument("sample count must be positive");
    }
};

/// x in [a, b] with |F(x) - target| < 1e-12. Newton steps on F' (central
/// differences if `dF` is empty); any step leaving the current bracket is
/// replaced by bisection.
inline double invert_cdf(const std::function<double(double)>& F, double target, double a, double b,
                         const std::function<double(double)>& dF = {}) {
    constexpr double tol = 1e-12;
    if (!(a < b)) throw InvalidArgument("invert_cdf: empty bracket");
    const double fa = F(a) - target, fb = F(b) - target;
    if (fa > tol || fb < -tol) throw InvalidArgument("invert_cdf: target is not bracketed by F(a), F(b)");
    if (std::abs(fa) < tol) return a;
    if (std::abs(fb) < tol) return b;
    const auto slope = [&](double x) {
        if (dF) return dF(x);
        const double h = 1e-7 * (b - a);
        return (F(std::min(x + h, b)) - F(std::max(x - h, a))) / (std::min(x + h, b) - std::max(x - h, a));
    };
    double lo = a, hi = b, x = 0.5 * (a + b);
    for (int iter = 0; iter < 64; ++iter) {
        const double fx = F(x) - target;
        if (std::abs(fx) < tol) return x;
        (fx < 0.0 ? lo : hi) = x;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)))
            throw ConvergenceError("invert_cdf: bracket collapsed with |F(x) - target| = " + std::to_string(std::abs(fx)));
        const double d = slope(x);
        double next = d > 0.0 ? x - fx / d : lo - 1.0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        x = next;
    }
    throw ConvergenceError("invert_cdf: no convergence after 64 iterations");
}

namespace detail {

/// (alpha - sin alpha)/pi on [0, pi]: law of the polar rotation angle.
inline double angle_cdf(double a) { return (a - std::sin(a)) / kPi; }
inline double angle_pdf(double a) { return (1.0 - std::cos(a)) / kPi; }

/// (2 theta - sin 2 theta)/(2 pi) on [0, pi]: law of the hyperpolar angle theta.
inline double theta_cdf(double t) { return (2.0 * t - std::sin(2.0 * t)) / (2.0 * kPi); }
inline double theta_pdf(double t) { return (1.0 - std::cos(2.0 * t)) / kPi; }

} // namespace detail

/// One Haar draw: the chart coordinates, the coset coin, and the element.
struct Draw {
    std::vector<double> coordinates;
    bool reflected = false;
    std::optional<Quaternion> quaternion; ///< quaternion chart only, before any reflection
    GroupElement element = GroupElement::identity(1);
};

/// Sampler with one mt19937_64 stream per coordinate axis (the coset coin uses
/// the stream after the last coordinate). Stream k is seeded from (seed, k).
class Sampler {
public:
    explicit Sampler(const SamplerConfig& config) : config_(config) {
        config_.validate();
        const int axes = group_dimension(config_.group) == 2 ? 1 : 3;
        for (int k = 0; k <= axes; ++k) {
            std::seed_seq seq{static_cast<std::uint32_t>(config_.seed & 0xffffffffu),
                              static_cast<std::uint32_t>(config_.seed >> 32), static_cast<std::uint32_t>(k)};
            streams_.emplace_back(seq);
        }
    }

    const SamplerConfig& config() const { return config_; }

    Draw next() {
        Draw d;
        switch (config_.chart) {
        case SamplerChart::angle: {
            const double a = 2.0 * kPi * uniform(0);
            d.coordinates = {a};
            d.element = rotation2(a);
            break;
        }
        case SamplerChart::euler: {
            const double alpha = kPi * (2.0 * uniform(0) - 1.0);
            const double beta = std::acos(1.0 - 2.0 * uniform(1));
            const double gamma = kPi * (2.0 * uniform(2) - 1.0);
            d.coordinates = {alpha, beta, gamma};
            d.element = euler_rotation(alpha, beta, gamma);
            break;
        }
        case SamplerChart::polar: {
            const double phi = 2.0 * kPi * uniform(0);
            const double psi = std::asin(2.0 * uniform(1) - 1.0);
            const double alpha = invert_cdf(detail::angle_cdf, uniform(2), 0.0, kPi, detail::angle_pdf);
            d.coordinates = {phi, psi, alpha};
            d.element = polar_rotation(phi, psi, alpha);
            break;
        }
        case SamplerChart::quaternion: {
            const double theta = invert_cdf(detail::theta_cdf, uniform(0), 0.0, kPi, detail::theta_pdf);
            const double psi = std::acos(1.0 - 2.0 * uniform(1));
            const double phi = 2.0 * kPi * uniform(2);
            d.coordinates = {theta, psi, phi};
            d.quaternion = hyperpolar_quaternion(theta, psi, phi);
            d.element = quat_to_rotation(*d.quaternion);
            break;
        }
        }
        if (!is_special(config_.group)) {
            d.reflected = (streams_.back()() >> 63) != 0;
            if (d.reflected) d.element = group_dimension(config_.group) == 2 ? sigma2() * d.element : -d.element;
        }
        return d;
    }

private:
    /// Uniform in [0, 1) with 53 random bits.
    double uniform(std::size_t axis) { return static_cast<double>(streams_[axis]() >> 11) * 0x1.0p-53; }

    SamplerConfig config_;
    std::vector<std::mt19937_64> streams_;
};

/// `config.count` Haar-uniform elements.
inline std::vector<GroupElement> sample(const SamplerConfig& config) {
    Sampler s(config);
    std::vector<GroupElement> out;
    out.reserve(config.count);
    for (std::size_t i = 0; i < config.count; ++i) out.push_back(s.next().element);
    return out;
}

/// Uniform unit quaternions (Haar measure of S^3) from the hyperpolar chart.
inline std::vector<Quaternion> sample_quaternions(std::uint64_t seed, std::size_t count) {
    Sampler s({GroupTag::so3, SamplerChart::quaternion, seed, count});
    std::vector<Quaternion> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(*s.next().quaternion);
    return out;
}

} // namespace haar
