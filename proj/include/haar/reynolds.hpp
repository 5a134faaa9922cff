#pragma once

// Group averaging of tensors and dimensions of invariant tensor spaces.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/SVD>
#include <boost/multiprecision/cpp_int.hpp>

#include "haar/engine.hpp"
#include "haar/quadrature.hpp"
#include "haar/tensor.hpp"

namespace haar {

using BigInt = boost::multiprecision::cpp_int;

/// A finite subgroup of O(D), checked for identity, closure and inverses.
class FiniteGroup {
public:
    static FiniteGroup from_elements(std::vector<GroupElement> elements, double tol = kInputTolerance) {
        if (elements.empty()) throw InvalidArgument("finite group must have at least one element");
        const int d = elements.front().dim();
        for (const auto& g : elements)
            if (g.dim() != d) throw DimensionError("finite group elements have different dimensions");
        FiniteGroup group;
        group.elements_ = std::move(elements);
        if (!group.contains(GroupElement::identity(d), tol)) throw InvalidArgument("finite group lacks the identity");
        for (const auto& g : group.elements_) {
            if (!group.contains(g.inverse(), tol)) throw InvalidArgument("finite group is not closed under inverses");
            for (const auto& h : group.elements_)
                if (!group.contains(g * h, tol)) throw InvalidArgument("finite group is not closed under products");
        }
        return group;
    }

    /// Rotations about `axis` by 2 pi k / order.
    static FiniteGroup cyclic(const Vector3& axis, int order) {
        if (order < 1) throw InvalidArgument("cyclic group order must be positive");
        std::vector<GroupElement> els;
        for (int k = 0; k < order; ++k) els.push_back(rodrigues(axis, 2.0 * kPi * k / order));
        return from_elements(std::move(els));
    }

    const std::vector<GroupElement>& elements() const { return elements_; }
    std::size_t order() const { return elements_.size(); }
    int dim() const { return elements_.front().dim(); }

private:
    bool contains(const GroupElement& g, double tol) const {
        for (const auto& h : elements_)
            if ((h.matrix() - g.matrix()).cwiseAbs().maxCoeff() <= tol) return true;
        return false;
    }

    std::vector<GroupElement> elements_;
};

/// (1/|G|) sum_g g * T.
inline Tensor reynolds_finite(const FiniteGroup& group, const Tensor& t) {
    if (group.dim() != t.dim()) throw DimensionError("reynolds: group and tensor dimensions differ");
    Tensor sum(t.dim(), t.order());
    for (const auto& g : group.elements()) sum += act(g, t);
    return sum * (1.0 / static_cast<double>(group.order()));
}

/// Integral of g * T over the group.
inline Tensor reynolds_continuous(const GroupQuadrature& quadrature, const Tensor& t) {
    if (quadrature.size() && quadrature.elements().front().dim() != t.dim())
        throw DimensionError("reynolds: group and tensor dimensions differ");
    return quadrature.integrate_tensor([&](const GroupElement& g) { return act(g, t); });
}

inline Tensor reynolds_continuous(GroupTag group, const HaarDensity& density, const QuadratureRule& rule,
                                  const Tensor& t) {
    return reynolds_continuous(GroupQuadrature::build(density, rule, group), t);
}

/// Matrix of the Reynolds operator on the order-n tensors over R^D, i.e. the
/// integral of the n-fold Kronecker power of g. Column k is the image of the
/// k-th canonical basis tensor.
inline Matrix reynolds_operator(const GroupQuadrature& quadrature, int n) {
    if (quadrature.size() == 0) throw NumericalError("empty quadrature");
    const int d = quadrature.elements().front().dim();
    const auto size = static_cast<Eigen::Index>(Tensor::entry_count(d, n));
    if (size > 6561) throw CapacityError("Reynolds operator matrix is limited to 6561 x 6561");
    Matrix total = Matrix::Zero(size, size);
    Matrix kron;
    for (std::size_t q = 0; q < quadrature.size(); ++q) {
        const Matrix& g = quadrature.elements()[q].matrix();
        kron = Matrix::Ones(1, 1);
        for (int k = 0; k < n; ++k) {
            Matrix next(kron.rows() * d, kron.cols() * d);
            for (int i = 0; i < kron.rows(); ++i)
                for (int j = 0; j < kron.cols(); ++j) next.block(i * d, j * d, d, d) = kron(i, j) * g;
            kron = std::move(next);
        }
        total += quadrature.weights()[q] * kron;
    }
    return total;
}

/// Number of singular values above `threshold`.
inline int numerical_rank(const Matrix& m, double threshold = 1e-6) {
    const Eigen::JacobiSVD<Matrix> svd(m);
    int r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > threshold) ++r;
    return r;
}

/// A dimension obtained by integration; `resolved` is false when the value sits
/// more than 1e-3 from an integer, a sign of an under-resolved quadrature.
struct DimensionEstimate {
    double value = 0.0;
    long long nearest = 0;
    bool resolved = false;
};

inline DimensionEstimate make_estimate(double value) {
    DimensionEstimate e;
    e.value = value;
    e.nearest = std::llround(value);
    e.resolved = std::abs(value - static_cast<double>(e.nearest)) <= 1e-3;
    return e;
}

/// dim of the invariant order-n tensors as the integral of Tr(g)^n.
inline DimensionEstimate dim_invariants_quadrature(const GroupQuadrature& quadrature, int n) {
    if (n < 0) throw InvalidArgument("tensor order must be nonnegative");
    return make_estimate(quadrature.integrate([n](const GroupElement& g) { return std::pow(g.matrix().trace(), n); }));
}

inline DimensionEstimate dim_invariants_quadrature(GroupTag group, int n, const HaarDensity& density,
                                                   const QuadratureRule& rule) {
    return dim_invariants_quadrature(GroupQuadrature::build(density, rule, group), n);
}

/// Same integral reduced to the rotation angle: the other coordinates of the
/// class function Tr(g)^n integrate out in closed form. For SO(3) the angle
/// density is (2/pi) sin^2(alpha/2) on [0, pi] and Tr = 1 + 2 cos(alpha); for
/// SO(2) it is 1/(2 pi) on [0, 2 pi] with Tr = 2 cos(alpha). The reflected
/// coset has Tr(-g) = -Tr(g) in 3D and Tr(sigma g) = 0 in 2D.
inline DimensionEstimate dim_invariants_reduced(GroupTag group, int n, int nodes = 256) {
    if (n < 0) throw InvalidArgument("tensor order must be nonnegative");
    const bool planar = group_dimension(group) == 2;
    const Rule1D rule = gauss_legendre(nodes, 0.0, planar ? 2.0 * kPi : kPi);
    CompensatedSum s;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double a = rule.nodes[i];
        double f;
        if (planar) {
            f = std::pow(2.0 * std::cos(a), n) / (2.0 * kPi);
        } else {
            const double h = std::sin(a / 2.0);
            f = std::pow(1.0 + 2.0 * std::cos(a), n) * (2.0 / kPi) * h * h;
        }
        s.add(rule.weights[i] * f);
    }
    double value = s.value();
    if (!is_special(group)) {
        if (planar)
            value = 0.5 * (value + (n == 0 ? 1.0 : 0.0));
        else
            value = n % 2 == 0 ? value : 0.0;
    }
    return make_estimate(value);
}

namespace detail {
inline BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}
} // namespace detail

/// Exact dimension of the invariant order-n tensors. For SO(3) the parity split
///   D_2m   = sum_k C(2k,k) [3/2 C(2m,2k)   - 1/2 C(2m+1,2k)]
///   D_2m+1 = sum_k C(2k,k) [3/2 C(2m+1,2k) - 1/2 C(2m+2,2k)] - 1/2 C(2m+2,m+1)
/// with k = 0..m; O(3) keeps the even orders only. SO(2) gives C(n, n/2) for
/// even n, and O(2) the average of that and 0^n.
inline BigInt dim_invariants_closed(GroupTag group, int n) {
    using detail::binomial;
    if (n < 0) throw InvalidArgument("tensor order must be nonnegative");
    if (group_dimension(group) == 2) {
        const BigInt so2 = n % 2 == 0 ? binomial(n, n / 2) : BigInt(0);
        if (group == GroupTag::so2) return so2;
        return (so2 + (n == 0 ? 1 : 0)) / 2;
    }
    if (group == GroupTag::o3 && n % 2 == 1) return 0;
    const int m = n / 2;
    BigInt twice = 0;
    if (n % 2 == 0) {
        for (int k = 0; k <= m; ++k)
            twice += binomial(2 * k, k) * (3 * binomial(2 * m, 2 * k) - binomial(2 * m + 1, 2 * k));
    } else {
        for (int k = 0; k <= m; ++k)
            twice += binomial(2 * k, k) * (3 * binomial(2 * m + 1, 2 * k) - binomial(2 * m + 2, 2 * k));
        twice -= binomial(2 * m + 2, m + 1);
    }
    return twice / 2;
}

/// Orthonormal basis of the symmetric 3x3 matrices under Tr(A^T B).
inline std::array<Matrix3, 6> sym2_basis() {
    std::array<Matrix3, 6> b;
    const auto unit = [](int i, int j) {
        Matrix3 e = Matrix3::Zero();
        e(i, j) = 1.0;
        return e;
    };
    int k = 0;
    for (int i = 0; i < 3; ++i) b[k++] = unit(i, i);
    const double r = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) b[k++] = r * (unit(i, j) + unit(j, i));
    return b;
}

/// 6x6 matrix of v -> g v g^T restricted to the symmetric matrices, in sym2_basis().
inline Matrix sym2_representation(const GroupElement& g) {
    if (g.dim() != 3) throw DimensionError("sym2 representation needs a 3x3 group element");
    const auto basis = sym2_basis();
    const Matrix3 m = g.matrix();
    Matrix rho(6, 6);
    for (int b = 0; b < 6; ++b) {
        const Matrix3 image = m * basis[b] * m.transpose();
        for (int a = 0; a < 6; ++a) rho(a, b) = (basis[a].transpose() * image).trace();
    }
    return rho;
}

/// dim of the invariant symmetric matrices: integral of the restricted trace.
inline DimensionEstimate dim_invariants_sym2(const GroupQuadrature& quadrature) {
    return make_estimate(quadrature.integrate([](const GroupElement& g) { return sym2_representation(g).trace(); }));
}

} // namespace haar
