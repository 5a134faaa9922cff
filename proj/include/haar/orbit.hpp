#pragma once

// Moments of the orbit random variable X(g) = rho(g) v under Haar-uniform g.

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "haar/engine.hpp"
#include "haar/reynolds.hpp"
#include "haar/sampling.hpp"
#include "haar/tensor.hpp"

namespace haar {

enum class Representation {
    natural, ///< g v on R^D
    tensor,  ///< g * T on order-n tensors
    sym2,    ///< g v g^T on symmetric matrices
};

inline std::string_view to_string(Representation r) {
    switch (r) {
    case Representation::natural: return "natural";
    case Representation::tensor: return "tensor";
    case Representation::sym2: return "sym2";
    }
    return "?";
}

inline Representation parse_representation(std::string_view s) {
    if (s == "natural") return Representation::natural;
    if (s == "tensor") return Representation::tensor;
    if (s == "sym2") return Representation::sym2;
    throw UnknownTag("unknown representation '" + std::string(s) + "' (expected natural, tensor or sym2)");
}

class OrbitSpec {
public:
    OrbitSpec(GroupTag group, Representation rep, Tensor v) : group_(group), rep_(rep), v_(std::move(v)) {
        if (v_.dim() != group_dimension(group_))
            throw DimensionError("orbit seed dimension differs from the group's");
        if (rep_ == Representation::natural && v_.order() != 1)
            throw DimensionError("natural representation needs a vector");
        if (rep_ == Representation::sym2) {
            if (v_.order() != 2) throw DimensionError("sym2 representation needs a matrix");
            const Matrix m = v_.to_matrix();
            if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12)
                throw InvalidArgument("sym2 representation needs a symmetric matrix");
        }
    }

    GroupTag group() const { return group_; }
    Representation representation() const { return rep_; }
    const Tensor& seed() const { return v_; }

    /// rho(g) v. On vectors and matrices this is g v and g v g^T, the tensor action of orders 1 and 2.
    Tensor point(const GroupElement& g) const { return act(g, v_); }

private:
    GroupTag group_;
    Representation rep_;
    Tensor v_;
};

/// m_r(X): the integral of the r-th tensor power of rho(g) v.
inline Tensor moment(const OrbitSpec& spec, int r, const GroupQuadrature& quadrature) {
    if (r < 1) throw InvalidArgument("moment order must be positive");
    Tensor::entry_count(spec.seed().dim(), spec.seed().order() * r);
    return quadrature.integrate_tensor([&](const GroupElement& g) { return tensor_power(spec.point(g), r); });
}

inline Tensor moment(const OrbitSpec& spec, int r, const HaarDensity& density, const QuadratureRule& rule) {
    return moment(spec, r, GroupQuadrature::build(density, rule, spec.group()));
}

/// m2 - m1 (x) m1.
inline Tensor covariance(const OrbitSpec& spec, const GroupQuadrature& quadrature) {
    const Tensor m1 = moment(spec, 1, quadrature);
    return moment(spec, 2, quadrature) - outer(m1, m1);
}

/// m1 (x) m1 - m2, the opposite sign convention.
inline Tensor covariance_reversed(const OrbitSpec& spec, const GroupQuadrature& quadrature) {
    return covariance(spec, quadrature) * -1.0;
}

struct MomentEstimate {
    Tensor mean;
    Tensor standard_error; ///< entry-wise; zero when only one sample was drawn
    std::size_t count = 0;
};

/// Empirical mean of the r-th tensor power of rho(g_i) v over sampled g_i.
inline MomentEstimate mc_moments(const OrbitSpec& spec, int r, const SamplerConfig& config) {
    if (r < 1) throw InvalidArgument("moment order must be positive");
    if (config.group != spec.group()) throw InvalidArgument("sampler group differs from the orbit's group");
    Sampler sampler(config);
    const std::size_t n = config.count;
    Tensor mean(spec.seed().dim(), spec.seed().order() * r);
    Tensor m2 = mean;
    // Welford updates, entry-wise
    for (std::size_t i = 0; i < n; ++i) {
        const Tensor x = tensor_power(spec.point(sampler.next().element), r);
        const double k = static_cast<double>(i + 1);
        for (std::size_t e = 0; e < x.size(); ++e) {
            const double delta = x[e] - mean[e];
            mean[e] += delta / k;
            m2[e] += delta * (x[e] - mean[e]);
        }
    }
    Tensor se(mean.dim(), mean.order());
    if (n > 1)
        for (std::size_t e = 0; e < se.size(); ++e)
            se[e] = std::sqrt(m2[e] / static_cast<double>(n - 1) / static_cast<double>(n));
    return {std::move(mean), std::move(se), n};
}

/// delta_ijkl: one when all four indices agree.
inline Tensor j1(int dim = 3) {
    Tensor t(dim, 4);
    for (int i = 0; i < dim; ++i) t(i, i, i, i) = 1.0;
    return t;
}

/// delta_ij delta_kl = I (x) I.
inline Tensor j2(int dim = 3) { return outer(Tensor::identity(dim), Tensor::identity(dim)); }

/// Least-squares fit T ~ c1 J1 + c2 J2; `residual` is the max-abs misfit.
struct PairDecomposition {
    double c1 = 0.0;
    double c2 = 0.0;
    double residual = 0.0;
};

inline PairDecomposition decompose_j1_j2(const Tensor& t) {
    const Tensor a = j1(t.dim()), b = j2(t.dim());
    Eigen::Matrix2d gram;
    gram << dot(a, a), dot(a, b), dot(a, b), dot(b, b);
    const Eigen::Vector2d c = gram.ldlt().solve(Eigen::Vector2d(dot(a, t), dot(b, t)));
    return {c(0), c(1), max_abs_diff(t, a * c(0) + b * c(1))};
}

/// Projection of T on a single direction: coefficient and max-abs misfit.
struct LineProjection {
    double coefficient = 0.0;
    double residual = 0.0;
};

inline LineProjection project_onto(const Tensor& t, const Tensor& direction) {
    const double c = dot(t, direction) / dot(direction, direction);
    return {c, max_abs_diff(t, direction * c)};
}

/// J2/3 - J1.
inline Tensor sym2_covariance_direction() { return j2() * (1.0 / 3.0) - j1(); }

/// Closed forms for v a symmetric 3x3 matrix with t1 = Tr v, t2 = Tr v^2:
///   m2  = (3 t2 - t1^2)/6 J1 + (t1^2 - t2)/6 J2
///   cov = (3 t2 - t1^2)/6 (J2/3 - J1)   in the m1 (x) m1 - m2 convention.
/// They are written in the basis (J1, J2); the quadrature moments live in
/// span{J2, delta_ik delta_jl + delta_il delta_jk} and disagree with them.
inline Tensor sym2_m2_closed_form(const Matrix3& v) {
    const double t1 = v.trace(), t2 = (v * v).trace();
    return j1() * ((3.0 * t2 - t1 * t1) / 6.0) + j2() * ((t1 * t1 - t2) / 6.0);
}

inline Tensor sym2_covariance_closed_form(const Matrix3& v) {
    const double t1 = v.trace(), t2 = (v * v).trace();
    return sym2_covariance_direction() * ((3.0 * t2 - t1 * t1) / 6.0);
}

} // namespace haar
