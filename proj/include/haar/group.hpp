#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

#include "haar/errors.hpp"

namespace haar {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

/// Orthogonality tolerance for elements built by the library.
inline constexpr double kConstructedTolerance = 1e-12;
/// Orthogonality / unit-norm tolerance for user-supplied values.
inline constexpr double kInputTolerance = 1e-9;

/// The four compact groups the library integrates and samples over.
enum class GroupTag { so2, o2, so3, o3 };

inline int group_dimension(GroupTag g) { return (g == GroupTag::so2 || g == GroupTag::o2) ? 2 : 3; }

inline bool is_special(GroupTag g) { return g == GroupTag::so2 || g == GroupTag::so3; }

/// Dimension of the group as a manifold.
inline int manifold_dimension(GroupTag g) { return group_dimension(g) == 2 ? 1 : 3; }

inline std::string_view to_string(GroupTag g) {
    switch (g) {
    case GroupTag::so2: return "so2";
    case GroupTag::o2: return "o2";
    case GroupTag::so3: return "so3";
    case GroupTag::o3: return "o3";
    }
    return "?";
}

/// Accepts both "so3" and "so(3)" spellings.
inline GroupTag parse_group_tag(std::string_view s) {
    if (s == "so2" || s == "so(2)") return GroupTag::so2;
    if (s == "o2" || s == "o(2)") return GroupTag::o2;
    if (s == "so3" || s == "so(3)") return GroupTag::so3;
    if (s == "o3" || s == "o(3)") return GroupTag::o3;
    throw UnknownTag("unknown group tag '" + std::string(s) + "' (expected so2, o2, so3 or o3)");
}

/// Largest entry of |Q Q^T - I| and |Q^T Q - I|.
inline double orthogonality_defect(const Matrix& q) {
    const auto id = Matrix::Identity(q.rows(), q.cols());
    return std::max((q * q.transpose() - id).cwiseAbs().maxCoeff(),
                    (q.transpose() * q - id).cwiseAbs().maxCoeff());
}

/// An element of O(D) stored as a dense matrix.
class GroupElement {
public:
    /// Validates orthogonality and |det| = 1 within `tol`.
    static GroupElement from_matrix(Matrix m, double tol = kInputTolerance) {
        if (m.rows() != m.cols() || m.rows() == 0)
            throw DimensionError("group element must be a non-empty square matrix");
        if (orthogonality_defect(m) > tol)
            throw InvalidArgument("matrix is not orthogonal within tolerance");
        const double det = m.determinant();
        if (std::abs(std::abs(det) - 1.0) > tol)
            throw InvalidArgument("matrix determinant is not +-1 within tolerance");
        return GroupElement(std::move(m), det > 0);
    }

    /// Skips validation; for matrices orthogonal by construction.
    static GroupElement unchecked(Matrix m) {
        const bool proper = m.determinant() > 0;
        return GroupElement(std::move(m), proper);
    }

    static GroupElement identity(int dim) { return GroupElement(Matrix::Identity(dim, dim), true); }

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

    /// det = +1.
    bool proper() const { return proper_; }

    GroupElement inverse() const { return GroupElement(m_.transpose(), proper_); }

    friend GroupElement operator*(const GroupElement& a, const GroupElement& b) {
        if (a.dim() != b.dim()) throw DimensionError("group element dimensions differ");
        return GroupElement(a.m_ * b.m_, a.proper_ == b.proper_);
    }

    friend GroupElement operator-(const GroupElement& a) {
        const bool flips = a.dim() % 2 == 1;
        return GroupElement(-a.m_, flips ? !a.proper_ : a.proper_);
    }

private:
    GroupElement(Matrix m, bool proper) : m_(std::move(m)), proper_(proper) {}

    Matrix m_;
    bool proper_;
};

/// Hat map R^3 -> so(3), using the layout
///   [  0   x3  -x2 ]
///   [ -x3   0   x1 ]
///   [  x2 -x1    0 ]
inline Matrix3 hat(const Vector3& x) {
    Matrix3 m;
    m << 0.0, x(2), -x(1),
        -x(2), 0.0, x(0),
        x(1), -x(0), 0.0;
    return m;
}

/// Inverse of hat on the skew part of `m`.
inline Vector3 vee(const Matrix3& m) {
    return Vector3((m(1, 2) - m(2, 1)) / 2.0, (m(2, 0) - m(0, 2)) / 2.0, (m(0, 1) - m(1, 0)) / 2.0);
}

namespace detail {
inline void require_unit(const Vector3& n, const char* what) {
    if (!n.allFinite() || std::abs(n.norm() - 1.0) > kInputTolerance)
        throw NormalizationError(std::string(what) + ": axis must be a unit vector (|n| = " +
                                 std::to_string(n.norm()) + ")");
}
} // namespace detail

/// I + sin(a) hat(n) + (1 - cos a) hat(n)^2. Rejects non-unit axes.
inline GroupElement rodrigues(const Vector3& n, double alpha) {
    detail::require_unit(n, "rodrigues");
    const Matrix3 k = hat(n);
    Matrix3 r = Matrix3::Identity() + std::sin(alpha) * k + (1.0 - std::cos(alpha)) * (k * k);
    return GroupElement::unchecked(Matrix(r));
}

/// Reflection through the plane normal to `n`: x -> x - 2<x,n>n.
inline GroupElement reflection(const Vector3& n) {
    detail::require_unit(n, "reflection");
    Matrix3 r = Matrix3::Identity() - 2.0 * n * n.transpose();
    return GroupElement::unchecked(Matrix(r));
}

/// The 2D reflection sigma = diag(-1, 1) used for the O(2) coset.
inline GroupElement sigma2() {
    Matrix s(2, 2);
    s << -1.0, 0.0, 0.0, 1.0;
    return GroupElement::unchecked(std::move(s));
}

inline GroupElement rotation2(double alpha) {
    Matrix r(2, 2);
    r << std::cos(alpha), -std::sin(alpha), std::sin(alpha), std::cos(alpha);
    return GroupElement::unchecked(std::move(r));
}

/// <A, B> = Tr(A B^T) / 2.
inline double frobenius(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("frobenius: matrix dimensions differ");
    return 0.5 * a.cwiseProduct(b).sum();
}

/// Real quaternion w + xi + yj + zk.
struct Quaternion {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    static Quaternion pure(const Vector3& v) { return {0.0, v(0), v(1), v(2)}; }

    Vector3 imaginary() const { return {x, y, z}; }
    Eigen::Vector4d coeffs() const { return {w, x, y, z}; }

    double norm_squared() const { return w * w + x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm_squared()); }
    bool is_unit(double tol = kConstructedTolerance) const { return std::abs(norm_squared() - 1.0) <= tol; }

    Quaternion conjugate() const { return {w, -x, -y, -z}; }
    Quaternion normalized() const {
        const double n = norm();
        return {w / n, x / n, y / n, z / n};
    }

    Quaternion operator-() const { return {-w, -x, -y, -z}; }
    Quaternion operator+(const Quaternion& o) const { return {w + o.w, x + o.x, y + o.y, z + o.z}; }
    Quaternion operator*(double s) const { return {w * s, x * s, y * s, z * s}; }

    // Hamilton product.
    Quaternion operator*(const Quaternion& o) const {
        return {w * o.w - x * o.x - y * o.y - z * o.z,
                w * o.x + x * o.w + y * o.z - z * o.y,
                w * o.y - x * o.z + y * o.w + z * o.x,
                w * o.z + x * o.y - y * o.x + z * o.w};
    }

    /// 4x4 matrix of p -> q p, acting on (w, x, y, z) columns.
    Eigen::Matrix4d left_matrix() const {
        Eigen::Matrix4d m;
        m << w, -x, -y, -z,
            x, w, -z, y,
            y, z, w, -x,
            z, -y, x, w;
        return m;
    }

    static Quaternion from_coeffs(const Eigen::Ref<const Eigen::VectorXd>& c) { return {c(0), c(1), c(2), c(3)}; }
};

/// Rotation v -> q v conj(q) for a unit quaternion. q and -q give the same matrix;
/// q = +-1 gives the identity.
inline GroupElement quat_to_rotation(const Quaternion& q) {
    if (std::abs(q.norm() - 1.0) > kInputTolerance)
        throw NormalizationError("quat_to_rotation: quaternion must have unit norm");
    const double w = q.w, x = q.x, y = q.y, z = q.z;
    Matrix r(3, 3);
    r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
        2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
        2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
    return GroupElement::unchecked(std::move(r));
}

/// Rotation angle in [0, pi] of an element of SO(3).
inline double rotation_angle(const GroupElement& r) {
    const double c = (r.matrix().trace() - 1.0) / 2.0;
    return std::acos(std::clamp(c, -1.0, 1.0));
}

} // namespace haar
