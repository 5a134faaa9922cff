#pragma once

// Haar densities in arbitrary charts and integration over SO/O(2), SO/O(3).
//
// For a chart p: U -> G and an orthonormal basis (xi_i) of the Lie algebra
// (orthonormal for <A,B> = Tr(A B^T)/2), the unnormalized density is
//
//     k~(u) = | det M(u) |,    M_ij = < p(u)^{-1} dp/du^j , xi_i >,
//
// and k = k~ / C with C the integral of k~ over U. The sign of det M depends on
// the orientation of the basis and of the coordinates only, so it is dropped.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "haar/chart.hpp"
#include "haar/parametrisations.hpp"
#include "haar/quadrature.hpp"
#include "haar/tensor.hpp"

namespace haar {

/// Orthonormal Lie algebra basis used by the density formula. For quaternion
/// charts the density is taken in the quaternion algebra with basis (i, j, k)
/// and `elements` is empty.
struct AlgebraBasis {
    enum class Kind { matrices, quaternion };
    Kind kind = Kind::matrices;
    std::vector<Matrix> elements;
};

/// xi_1 = [[0, -1], [1, 0]].
inline AlgebraBasis so2_basis() {
    Matrix xi(2, 2);
    xi << 0.0, -1.0, 1.0, 0.0;
    return {AlgebraBasis::Kind::matrices, {xi}};
}

/// xi_i = hat(e_i).
inline AlgebraBasis so3_basis() {
    AlgebraBasis b;
    for (int i = 0; i < 3; ++i) b.elements.emplace_back(hat(Vector3::Unit(i)));
    return b;
}

namespace detail {

inline Matrix chart_inverse(const Chart& chart, const Matrix& p) {
    if (chart.is_rotation_chart()) return p.transpose();
    Eigen::FullPivLU<Matrix> lu(p);
    if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-12)
        throw SingularChartError("chart '" + chart.name() + "' matrix is singular at the requested point");
    return lu.inverse();
}

/// Gram-Schmidt of p^{-1} dp/du^j at the domain centre under the 1/2-Frobenius product.
inline AlgebraBasis derived_basis(const Chart& chart, double step) {
    std::vector<double> centre;
    for (const auto& iv : chart.domain()) centre.push_back(iv.midpoint());
    const Matrix p = chart.evaluate(centre);
    const Matrix inv = chart_inverse(chart, p);
    AlgebraBasis basis;
    for (const Matrix& dp : chart.jacobian_unchecked(centre, std::min(step, 0.5 * chart.boundary_distance(centre)))) {
        Matrix t = inv * dp;
        for (const Matrix& e : basis.elements) t -= frobenius(t, e) * e;
        const double n = std::sqrt(frobenius(t, t));
        if (n < 1e-8)
            throw DegenerateChartError("chart '" + chart.name() + "' has linearly dependent tangent directions at its centre");
        basis.elements.push_back(t / n);
    }
    return basis;
}

} // namespace detail

/// Basis for a chart: the standard one for declared so/o groups, (i, j, k) for
/// quaternion charts, and one derived from the chart's own tangent vectors otherwise.
inline AlgebraBasis algebra_basis(const Chart& chart, double step = kDefaultStep) {
    if (chart.realization() == Realization::unit_quaternion) return {AlgebraBasis::Kind::quaternion, {}};
    if (const auto g = chart.declared_group()) return group_dimension(*g) == 2 ? so2_basis() : so3_basis();
    return detail::derived_basis(chart, step);
}

namespace detail {

inline double density_at(const Chart& chart, std::span<const double> u, const AlgebraBasis& basis, double step) {
    const Matrix p = chart.evaluate_unchecked(u);
    // Richardson: (4 D(h/2) - D(h)) / 3 cancels the h^2 term of the central difference
    std::vector<Matrix> dp = chart.jacobian_unchecked(u, 0.5 * step);
    const std::vector<Matrix> coarse = chart.jacobian_unchecked(u, step);
    for (std::size_t j = 0; j < dp.size(); ++j) dp[j] = (4.0 * dp[j] - coarse[j]) / 3.0;
    const int d = static_cast<int>(dp.size());
    Matrix m(d, d);
    if (basis.kind == AlgebraBasis::Kind::quaternion) {
        const Quaternion qbar = Quaternion::from_coeffs(p.col(0)).conjugate();
        for (int j = 0; j < d; ++j) {
            const Quaternion tau = qbar * Quaternion::from_coeffs(dp[j].col(0));
            m(0, j) = tau.x;
            m(1, j) = tau.y;
            m(2, j) = tau.z;
        }
    } else {
        if (static_cast<int>(basis.elements.size()) != d)
            throw DimensionError("algebra basis size differs from the chart's parameter count");
        const Matrix inv = chart_inverse(chart, p);
        for (int j = 0; j < d; ++j) {
            const Matrix tau = inv * dp[j];
            for (int i = 0; i < d; ++i) m(i, j) = frobenius(tau, basis.elements[i]);
        }
    }
    return std::abs(m.determinant());
}

} // namespace detail

/// Unnormalized |k~(u)|. `u` must be strictly inside the domain; the stencil
/// step shrinks near the boundary.
inline double density_numeric(const Chart& chart, std::span<const double> u, const AlgebraBasis& basis,
                              double step = kDefaultStep) {
    if (u.size() != chart.domain().size()) throw DimensionError("density: wrong number of coordinates");
    if (!chart.contains(u)) throw DomainError("density: point lies outside the domain of chart '" + chart.name() + "'");
    const double dist = chart.boundary_distance(u);
    if (!(dist > 0.0)) throw DomainError("density: point lies on the boundary of chart '" + chart.name() + "'");
    return detail::density_at(chart, u, basis, std::min(step, 0.5 * dist));
}

inline double density_numeric(const Chart& chart, std::span<const double> u, double step = kDefaultStep) {
    return density_numeric(chart, u, algebra_basis(chart, step), step);
}

/// Normalized densities from the closed-form expressions, by chart tag:
/// so2-angle 1/(2pi); so3-euler sin(beta)/(8pi^2);
/// so3-polar cos(psi) sin^2(alpha/2)/(2pi^2); so3-quat sin^2(theta) sin(psi)/(2pi^2).
inline double closed_form_density(std::string_view tag, std::span<const double> u) {
    const auto need = [&](std::size_t n) {
        if (u.size() != n) throw DimensionError("closed_form_density: '" + std::string(tag) + "' takes " + std::to_string(n) + " coordinates");
    };
    if (tag == "so2-angle") {
        need(1);
        return 1.0 / (2.0 * kPi);
    }
    if (tag == "so3-euler") {
        need(3);
        return std::sin(u[1]) / (8.0 * kPi * kPi);
    }
    if (tag == "so3-polar") {
        need(3);
        const double s = std::sin(u[2] / 2.0);
        return std::cos(u[1]) * s * s / (2.0 * kPi * kPi);
    }
    if (tag == "so3-quat") {
        need(3);
        const double s = std::sin(u[0]);
        return s * s * std::sin(u[1]) / (2.0 * kPi * kPi);
    }
    throw UnknownTag("no closed-form density for chart tag '" + std::string(tag) + "'");
}

/// Normalized Haar density in a chart. Immutable once built.
class HaarDensity {
public:
    enum class Mode { numeric, closed_form };

    /// C = integral of |k~| over the chart domain by `rule`.
    static HaarDensity normalize(Chart chart, AlgebraBasis basis, const QuadratureRule& rule,
                                 double step = kDefaultStep) {
        if (rule.dimension() != chart.domain().size())
            throw DimensionError("normalize: quadrature rule dimension differs from the chart's");
        CompensatedSum c;
        rule.for_each([&](std::span<const double> u, double w) {
            const double k = density_numeric(chart, u, basis, step);
            if (!std::isfinite(k))
                throw NumericalError("density of chart '" + chart.name() + "' is not finite at a quadrature node");
            c.add(w * k);
        });
        const double total = c.value();
        if (total < 1e-12)
            throw DegenerateChartError("normalization constant of chart '" + chart.name() + "' vanishes");
        HaarDensity h(std::move(chart), std::move(basis), total, Mode::numeric, step);
        h.nodes_per_axis_ = rule.nodes_per_axis();
        return h;
    }

    static HaarDensity normalize(const Chart& chart, int nodes_per_axis = 32, double step = kDefaultStep) {
        return normalize(chart, algebra_basis(chart, step), QuadratureRule::gauss_legendre(chart.domain(), nodes_per_axis),
                         step);
    }

    /// Uses closed_form_density for a built-in chart.
    static HaarDensity closed_form(Chart chart) {
        const std::string tag = chart.builtin_tag();
        if (tag == "so2-angle") return HaarDensity(std::move(chart), so2_basis(), 2.0 * kPi, Mode::closed_form, kDefaultStep);
        if (tag == "so3-euler") return HaarDensity(std::move(chart), so3_basis(), 8.0 * kPi * kPi, Mode::closed_form, kDefaultStep);
        if (tag == "so3-polar" || tag == "so3-quat") {
            // the polar constant belongs to the unnormalized k~ = 4 cos(psi) sin^2(alpha/2)
            const double c = tag == "so3-polar" ? 8.0 * kPi * kPi : 2.0 * kPi * kPi;
            auto basis = tag == "so3-quat" ? AlgebraBasis{AlgebraBasis::Kind::quaternion, {}} : so3_basis();
            return HaarDensity(std::move(chart), std::move(basis), c, Mode::closed_form, kDefaultStep);
        }
        throw UnknownTag("no closed-form density for chart '" + chart.name() + "'");
    }

    /// k(u), integrating to one over the chart domain.
    double operator()(std::span<const double> u) const {
        if (mode_ == Mode::closed_form) {
            if (!chart_.contains(u)) throw DomainError("density: point lies outside the domain of chart '" + chart_.name() + "'");
            return closed_form_density(chart_.builtin_tag(), u);
        }
        return density_numeric(chart_, u, basis_, step_) / normalization_;
    }

    double normalization() const { return normalization_; }
    Mode mode() const { return mode_; }
    const Chart& chart() const { return chart_; }
    const AlgebraBasis& basis() const { return basis_; }
    double step() const { return step_; }
    /// Node counts of the rule that produced C; empty in closed-form mode.
    const std::vector<int>& nodes_per_axis() const { return nodes_per_axis_; }

private:
    HaarDensity(Chart chart, AlgebraBasis basis, double c, Mode mode, double step)
        : chart_(std::move(chart)), basis_(std::move(basis)), normalization_(c), mode_(mode), step_(step) {}

    Chart chart_;
    AlgebraBasis basis_;
    double normalization_;
    Mode mode_;
    double step_;
    std::vector<int> nodes_per_axis_;
};

struct ChartChangeReport {
    double residual = 0.0;          ///< |k1(u) - |J(u)| k2(phi(u))|
    std::vector<double> mapped;     ///< phi(u)
    double jacobian_determinant = 0.0;
    double density_from = 0.0;      ///< k1(u)
    double density_to = 0.0;        ///< k2(phi(u))
};

/// Checks k1(u) = J_phi(u) k2(phi(u)) for normalized densities, with J_phi by
/// central differences.
inline ChartChangeReport chart_change_check(const HaarDensity& from, const HaarDensity& to, const ChartMap& phi,
                                            std::span<const double> u, double step = kDefaultStep) {
    const Chart& c2 = to.chart();
    ChartChangeReport r;
    r.mapped = phi(u);
    if (!c2.contains(r.mapped))
        throw DomainError("chart change: phi(u) lies outside the domain of chart '" + c2.name() + "'");
    const std::size_t d = u.size();
    if (r.mapped.size() != d) throw DimensionError("chart change: charts have different parameter counts");
    Matrix jac(static_cast<int>(d), static_cast<int>(d));
    std::vector<double> probe(u.begin(), u.end());
    for (std::size_t j = 0; j < d; ++j) {
        probe[j] = u[j] + step;
        const auto plus = phi(probe);
        probe[j] = u[j] - step;
        const auto minus = phi(probe);
        probe[j] = u[j];
        for (std::size_t i = 0; i < d; ++i)
            jac(static_cast<int>(i), static_cast<int>(j)) = (plus[i] - minus[i]) / (2.0 * step);
    }
    r.jacobian_determinant = jac.determinant();
    r.density_from = from(u);
    r.density_to = to(r.mapped);
    r.residual = std::abs(r.density_from - std::abs(r.jacobian_determinant) * r.density_to);
    return r;
}

/// Weighted group elements approximating the Haar measure of a group. O(2) and
/// O(3) are built from an SO(D) rule by the coset split, each half weighted 1/2.
class GroupQuadrature {
public:
    static GroupQuadrature build(const HaarDensity& density, const QuadratureRule& rule,
                                 std::optional<GroupTag> group = std::nullopt) {
        const Chart& chart = density.chart();
        const auto realized = chart.realized_group();
        if (group) {
            const bool dims_match = chart.realization() == Realization::unit_quaternion
                                        ? group_dimension(*group) == 3
                                        : chart.matrix_dim() == group_dimension(*group);
            if (!dims_match)
                throw DimensionError("chart '" + chart.name() + "' does not parametrise " + std::string(to_string(*group)));
            if (realized && !is_special(*realized))
                throw InvalidArgument("integration over " + std::string(to_string(*group)) +
                                      " needs a chart of the rotation subgroup");
        }
        GroupQuadrature q;
        q.group_ = group;
        q.nodes_per_axis_ = rule.nodes_per_axis();
        rule.for_each([&](std::span<const double> u, double w) {
            const double k = density(u);
            if (k == 0.0) return;
            q.elements_.push_back(chart.realize(chart.evaluate_unchecked(u)));
            q.weights_.push_back(w * k);
        });
        if (group && !is_special(*group)) {
            const std::size_t n = q.elements_.size();
            const GroupElement s = group_dimension(*group) == 2 ? sigma2() : -GroupElement::identity(3);
            for (std::size_t i = 0; i < n; ++i) {
                q.weights_[i] *= 0.5;
                q.elements_.push_back(s * q.elements_[i]);
                q.weights_.push_back(q.weights_[i]);
            }
        }
        return q;
    }

    /// Numeric density on the group's default chart (angle for 2D, Euler angles for 3D).
    static GroupQuadrature build(GroupTag group, int nodes_per_axis = 32) {
        const Chart& chart = default_chart(group);
        const auto rule = QuadratureRule::gauss_legendre(chart.domain(), nodes_per_axis);
        return build(HaarDensity::normalize(chart, algebra_basis(chart), rule), rule, group);
    }

    const std::vector<GroupElement>& elements() const { return elements_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t size() const { return elements_.size(); }
    std::optional<GroupTag> group() const { return group_; }
    const std::vector<int>& nodes_per_axis() const { return nodes_per_axis_; }

    template <class F>
    double integrate(F&& f) const {
        CompensatedSum s;
        for (std::size_t i = 0; i < elements_.size(); ++i) s.add(weights_[i] * f(elements_[i]));
        return s.value();
    }

    /// Entry-wise integral of a tensor-valued function.
    template <class F>
    Tensor integrate_tensor(F&& f) const {
        if (elements_.empty()) throw NumericalError("empty quadrature");
        Tensor first = f(elements_.front());
        std::vector<CompensatedSum> sums(first.size());
        const auto accumulate = [&](const Tensor& t, double w) {
            if (!t.same_shape(first)) throw DimensionError("integrand changed shape between nodes");
            for (std::size_t k = 0; k < t.size(); ++k) sums[k].add(w * t[k]);
        };
        accumulate(first, weights_.front());
        for (std::size_t i = 1; i < elements_.size(); ++i) accumulate(f(elements_[i]), weights_[i]);
        for (std::size_t k = 0; k < first.size(); ++k) first[k] = sums[k].value();
        return first;
    }

private:
    std::vector<GroupElement> elements_;
    std::vector<double> weights_;
    std::optional<GroupTag> group_;
    std::vector<int> nodes_per_axis_;
};

/// Largest deviations of the left-shifted, right-shifted and inverted integrals
/// of the degree <= 2 entry monomials from the unshifted ones.
struct InvarianceReport {
    double left = 0.0;
    double right = 0.0;
    double inversion = 0.0;
    double total_mass = 0.0; ///< integral of 1
    std::size_t monomials = 0;

    double worst() const { return std::max({left, right, inversion}); }
};

inline InvarianceReport invariance_battery(const GroupQuadrature& quadrature, std::span<const GroupElement> shifts) {
    if (quadrature.size() == 0) throw NumericalError("empty quadrature");
    const int d = quadrature.elements().front().dim();
    const int n = d * d;
    // monomials as pairs of flat entry indices; n stands for the constant factor 1
    std::vector<std::pair<int, int>> monomials{{n, n}};
    for (int a = 0; a < n; ++a) monomials.emplace_back(a, n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) monomials.emplace_back(a, b);

    // integrals of every monomial of transform(g)
    const auto integrals = [&](const auto& transform) {
        std::vector<CompensatedSum> sums(monomials.size());
        std::vector<double> entries(static_cast<std::size_t>(n) + 1, 1.0);
        for (std::size_t q = 0; q < quadrature.size(); ++q) {
            const Matrix g = transform(quadrature.elements()[q].matrix());
            for (int k = 0; k < n; ++k) entries[static_cast<std::size_t>(k)] = g(k / d, k % d);
            for (std::size_t m = 0; m < monomials.size(); ++m)
                sums[m].add(quadrature.weights()[q] * entries[monomials[m].first] * entries[monomials[m].second]);
        }
        std::vector<double> out;
        for (const auto& s : sums) out.push_back(s.value());
        return out;
    };
    const auto deviation = [](const std::vector<double>& a, const std::vector<double>& b) {
        double m = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
        return m;
    };

    InvarianceReport r;
    r.monomials = monomials.size();
    const auto base = integrals([](const Matrix& g) { return g; });
    r.total_mass = base.front();
    r.inversion = deviation(base, integrals([](const Matrix& g) { return Matrix(g.transpose()); }));
    for (const auto& h : shifts) {
        const Matrix& hm = h.matrix();
        r.left = std::max(r.left, deviation(base, integrals([&](const Matrix& g) { return Matrix(hm * g); })));
        r.right = std::max(r.right, deviation(base, integrals([&](const Matrix& g) { return Matrix(g * hm); })));
    }
    return r;
}

/// Integral of f over `group` with respect to its Haar measure.
inline double integrate_scalar(const std::function<double(const GroupElement&)>& f, GroupTag group,
                               const HaarDensity& density, const QuadratureRule& rule) {
    return GroupQuadrature::build(density, rule, group).integrate(f);
}

inline Tensor integrate_tensor(const std::function<Tensor(const GroupElement&)>& f, GroupTag group,
                               const HaarDensity& density, const QuadratureRule& rule) {
    return GroupQuadrature::build(density, rule, group).integrate_tensor(f);
}

} // namespace haar
