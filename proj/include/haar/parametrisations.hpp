#pragma once

// Closed-form versions of the built-in charts and their inverses. The DSL
// charts stay the source of truth for density computations; these are used by
// the samplers and for locating a group element in a chart.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Geometry>

#include "haar/chart.hpp"

namespace haar {

using ChartMap = std::function<std::vector<double>(std::span<const double>)>;

inline GroupElement euler_rotation(double alpha, double beta, double gamma) {
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    const double cb = std::cos(beta), sb = std::sin(beta);
    const double cg = std::cos(gamma), sg = std::sin(gamma);
    Matrix r(3, 3);
    r << ca * cg - cb * sa * sg, -ca * sg - cb * cg * sa, sa * sb,
        cg * sa + ca * cb * sg, ca * cb * cg - sa * sg, -ca * sb,
        sb * sg, cg * sb, cb;
    return GroupElement::unchecked(std::move(r));
}

inline Vector3 spherical_axis(double phi, double psi) {
    return {std::cos(psi) * std::cos(phi), std::cos(psi) * std::sin(phi), std::sin(psi)};
}

/// rodrigues(n(phi, psi), alpha).
inline GroupElement polar_rotation(double phi, double psi, double alpha) {
    return rodrigues(spherical_axis(phi, psi), alpha);
}

inline Quaternion hyperpolar_quaternion(double theta, double psi, double phi) {
    const double st = std::sin(theta), sp = std::sin(psi);
    return {std::cos(theta), st * std::cos(psi), st * sp * std::cos(phi), st * sp * std::sin(phi)};
}

namespace detail {
inline double wrap_0_2pi(double a) {
    if (a < 0.0) a += 2.0 * kPi;
    return a >= 2.0 * kPi ? 0.0 : a;
}
} // namespace detail

/// (alpha, beta, gamma) with alpha, gamma in [-pi, pi], beta in [0, pi].
/// At beta = 0 or pi the split between alpha and gamma is fixed by gamma = 0.
inline std::array<double, 3> euler_coordinates(const GroupElement& g) {
    const Matrix& r = g.matrix();
    const double beta = std::acos(std::clamp(r(2, 2), -1.0, 1.0));
    if (std::sin(beta) < 1e-12) return {std::atan2(r(1, 0), r(0, 0)), beta, 0.0};
    return {std::atan2(r(0, 2), -r(1, 2)), beta, std::atan2(r(2, 0), r(2, 1))};
}

/// (phi, psi, alpha) for the axis-angle chart; phi in [0, 2pi), psi in
/// [-pi/2, pi/2], alpha in [0, pi].
inline std::array<double, 3> polar_coordinates(const GroupElement& g) {
    const Matrix3 r = g.matrix();
    const Vector3 v = vee(Matrix3((r - r.transpose()) / 2.0)); // sin(alpha) n
    const double c = (r.trace() - 1.0) / 2.0;
    const double s = v.norm();
    const double alpha = std::atan2(s, c);
    Vector3 n;
    if (s > 1e-6) {
        n = v / s;
    } else if (c > 0.0) {
        return {0.0, 0.0, 0.0};
    } else {
        // near alpha = pi the skew part vanishes; read n n^T off the symmetric part
        const Matrix3 nn = (Matrix3((r + r.transpose()) / 2.0) - c * Matrix3::Identity()) / (1.0 - c);
        int k = 0;
        nn.diagonal().maxCoeff(&k);
        n = nn.col(k) / std::sqrt(nn(k, k));
        n.normalize();
        if (n.dot(v) < 0.0) n = -n;
    }
    const double psi = std::asin(std::clamp(n(2), -1.0, 1.0));
    const double phi = detail::wrap_0_2pi(std::atan2(n(1), n(0)));
    return {phi, psi, alpha};
}

/// Unit quaternion with w >= 0 whose rotation is `g`.
inline Quaternion rotation_to_quaternion(const GroupElement& g) {
    const Matrix3 r = g.matrix();
    Eigen::Quaterniond q(r);
    q.normalize();
    Quaternion out{q.w(), q.x(), q.y(), q.z()};
    return out.w < 0.0 ? -out : out;
}

inline std::array<double, 3> hyperpolar_coordinates(const Quaternion& q) {
    const double theta = std::acos(std::clamp(q.w, -1.0, 1.0));
    const double psi = std::atan2(std::hypot(q.y, q.z), q.x);
    const double phi = detail::wrap_0_2pi(std::atan2(q.z, q.y));
    return {theta, psi, phi};
}

namespace detail {

/// Gauss-Newton on |realize(p(u)) - g|_F, started from the best node of a coarse grid.
inline std::vector<double> locate_by_matching(const Chart& chart, const GroupElement& g) {
    const int d = chart.parameter_count();
    const auto& dom = chart.domain();
    const auto residual = [&](std::span<const double> u) -> Vector {
        const Matrix diff = chart.realize(chart.evaluate_unchecked(u)).matrix() - g.matrix();
        return Eigen::Map<const Vector>(diff.data(), diff.size());
    };

    constexpr int grid = 9;
    std::vector<double> best(static_cast<std::size_t>(d)), u(static_cast<std::size_t>(d));
    double best_norm = std::numeric_limits<double>::infinity();
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    for (bool more = true; more;) {
        for (int i = 0; i < d; ++i)
            u[i] = dom[i].lower + (idx[i] + 0.5) / grid * dom[i].width();
        const double r = residual(u).norm();
        if (r < best_norm) {
            best_norm = r;
            best = u;
        }
        more = false;
        for (int i = 0; i < d; ++i) {
            if (++idx[i] < grid) {
                more = true;
                break;
            }
            idx[i] = 0;
        }
    }

    u = best;
    for (int iter = 0; iter < 100; ++iter) {
        const Vector r0 = residual(u);
        Matrix jac(r0.size(), d);
        for (int j = 0; j < d; ++j) {
            const double h = 1e-7 * std::max(1.0, std::abs(u[j]));
            auto up = u, dn = u;
            up[j] = std::min(u[j] + h, dom[j].upper);
            dn[j] = std::max(u[j] - h, dom[j].lower);
            jac.col(j) = (residual(up) - residual(dn)) / (up[j] - dn[j]);
        }
        const Vector step = jac.colPivHouseholderQr().solve(-r0);
        double max_step = 0.0;
        for (int j = 0; j < d; ++j) {
            u[j] = std::clamp(u[j] + step(j), dom[j].lower, dom[j].upper);
            max_step = std::max(max_step, std::abs(step(j)));
        }
        if (max_step < 1e-15) break;
    }
    if (residual(u).norm() > 1e-8)
        throw ConvergenceError("could not locate the group element in chart '" + chart.name() + "'");
    return u;
}

} // namespace detail

/// Coordinates of `g` in `chart`: closed-form inverses for the built-in charts,
/// matrix matching otherwise.
inline std::vector<double> chart_coordinates(const Chart& chart, const GroupElement& g) {
    const auto& tag = chart.builtin_tag();
    const auto as_vec = [](const std::array<double, 3>& a) { return std::vector<double>(a.begin(), a.end()); };
    if (tag == "so2-angle") return {detail::wrap_0_2pi(std::atan2(g(1, 0), g(0, 0)))};
    if (tag == "so2-shifted") return {std::atan2(g(1, 0), g(0, 0))};
    if (tag == "so3-euler") return as_vec(euler_coordinates(g));
    if (tag == "so3-polar") return as_vec(polar_coordinates(g));
    if (tag == "so3-quat") return as_vec(hyperpolar_coordinates(rotation_to_quaternion(g)));
    return detail::locate_by_matching(chart, g);
}

/// The change of chart p_to^{-1} o p_from, computed by locating p_from(u) in `to`.
inline ChartMap matrix_matching_map(Chart from, Chart to) {
    return [from = std::move(from), to = std::move(to)](std::span<const double> u) {
        return chart_coordinates(to, from.element(u));
    };
}

/// u -> u + offset.
inline ChartMap offset_map(std::vector<double> offset) {
    return [offset = std::move(offset)](std::span<const double> u) {
        if (u.size() != offset.size()) throw DimensionError("offset map: coordinate count mismatch");
        std::vector<double> out(u.begin(), u.end());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += offset[i];
        return out;
    };
}

} // namespace haar
