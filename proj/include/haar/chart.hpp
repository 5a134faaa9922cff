#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "haar/builtin_chart_sources.hpp"
#include "haar/chart_dsl.hpp"
#include "haar/group.hpp"

namespace haar {

inline constexpr double kDefaultStep = 1e-5;

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
    double width() const { return upper - lower; }
    double midpoint() const { return 0.5 * (lower + upper); }
};

/// How the chart's matrix becomes a group element.
enum class Realization {
    matrix,          ///< the evaluated matrix is the element
    unit_quaternion, ///< first column is a unit quaternion, realized in SO(3)
};

/// A parametrisation p: U -> M_D(R) over a closed box U. Immutable.
class Chart {
public:
    /// Runs the load-time checks: declared group dimensions, and orthogonality
    /// (plus det = +1 for so(D)) at 100 random points of the domain.
    static Chart from_ast(dsl::ChartAst ast, Realization realization = Realization::matrix,
                          std::string builtin_tag = {}) {
        Chart c;
        c.ast_ = std::make_shared<const dsl::ChartAst>(std::move(ast));
        c.realization_ = realization;
        c.builtin_tag_ = std::move(builtin_tag);
        for (const auto& p : c.ast_->params) c.domain_.push_back({p.lower_value, p.upper_value});
        c.check_group();
        return c;
    }

    static Chart parse(std::string_view source) { return from_ast(dsl::parse_chart(source)); }

    const dsl::ChartAst& ast() const { return *ast_; }
    const std::string& name() const { return ast_->name; }
    int parameter_count() const { return ast_->parameter_count(); }
    int matrix_dim() const { return ast_->dim(); }
    const std::vector<Interval>& domain() const { return domain_; }
    Realization realization() const { return realization_; }
    /// Empty for user charts.
    const std::string& builtin_tag() const { return builtin_tag_; }

    /// Declared group, if the chart names one of so/o(2/3).
    std::optional<GroupTag> declared_group() const {
        switch (ast_->group) {
        case dsl::DeclaredGroup::so2: return GroupTag::so2;
        case dsl::DeclaredGroup::so3: return GroupTag::so3;
        case dsl::DeclaredGroup::o2: return GroupTag::o2;
        case dsl::DeclaredGroup::o3: return GroupTag::o3;
        default: return std::nullopt;
        }
    }

    /// Group the realized elements live in.
    std::optional<GroupTag> realized_group() const {
        if (realization_ == Realization::unit_quaternion) return GroupTag::so3;
        return declared_group();
    }

    /// Matrix inverse may be taken as the transpose.
    bool is_rotation_chart() const { return declared_group().has_value(); }

    bool contains(std::span<const double> u) const {
        if (u.size() != domain_.size()) return false;
        for (std::size_t i = 0; i < u.size(); ++i)
            if (!(u[i] >= domain_[i].lower && u[i] <= domain_[i].upper)) return false;
        return true;
    }

    /// Smallest distance from `u` to a face of the domain box.
    double boundary_distance(std::span<const double> u) const {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < u.size(); ++i)
            d = std::min({d, u[i] - domain_[i].lower, domain_[i].upper - u[i]});
        return d;
    }

    /// p(u). Throws DomainError outside the closed domain.
    Matrix evaluate(std::span<const double> u) const {
        require_inside(u);
        return evaluate_unchecked(u);
    }

    /// Central differences dp/du^j, j = 0..d-1. `u` must be at least `step`
    /// away from every face of the domain.
    std::vector<Matrix> jacobian(std::span<const double> u, double step = kDefaultStep) const {
        require_inside(u);
        if (!(step > 0.0)) throw InvalidArgument("jacobian: step must be positive");
        if (boundary_distance(u) < step)
            throw DomainError("jacobian: point is closer than the stencil step to the domain boundary");
        return jacobian_unchecked(u, step);
    }

    /// Group element realized at `u`.
    GroupElement element(std::span<const double> u) const { return realize(evaluate(u)); }

    GroupElement realize(const Matrix& p) const {
        if (realization_ == Realization::unit_quaternion)
            return quat_to_rotation(Quaternion::from_coeffs(p.col(0)));
        return GroupElement::unchecked(p);
    }

    // No domain checks; callers have established u is inside.
    Matrix evaluate_unchecked(std::span<const double> u) const {
        const int n = matrix_dim();
        Matrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = dsl::evaluate(*ast_->matrix[i][j], u);
        return m;
    }

    std::vector<Matrix> jacobian_unchecked(std::span<const double> u, double step) const {
        std::vector<double> probe(u.begin(), u.end());
        std::vector<Matrix> out;
        out.reserve(u.size());
        for (std::size_t j = 0; j < u.size(); ++j) {
            // divide by the representable stencil width, not 2 * step
            const double hi = u[j] + step, lo = u[j] - step;
            probe[j] = hi;
            Matrix plus = evaluate_unchecked(probe);
            probe[j] = lo;
            Matrix minus = evaluate_unchecked(probe);
            probe[j] = u[j];
            out.push_back((plus - minus) / (hi - lo));
        }
        return out;
    }

private:
    Chart() = default;

    void require_inside(std::span<const double> u) const {
        if (u.size() != domain_.size())
            throw DimensionError("chart '" + name() + "' takes " + std::to_string(domain_.size()) +
                                 " coordinates, got " + std::to_string(u.size()));
        if (!contains(u)) throw DomainError("point lies outside the domain of chart '" + name() + "'");
    }

    void check_group() const {
        const auto group = declared_group();
        if (!group && realization_ == Realization::matrix) return;
        const auto fail = [&](const std::string& msg) {
            throw dsl::ParseError(dsl::ErrorKind::semantic, ast_->group_pos, msg);
        };
        if (group) {
            const int want_dim = group_dimension(*group);
            if (matrix_dim() != want_dim)
                fail("group " + std::string(dsl::to_string(ast_->group)) + " needs a " + std::to_string(want_dim) + "x" +
                     std::to_string(want_dim) + " matrix, got " + std::to_string(matrix_dim()) + "x" +
                     std::to_string(matrix_dim()));
            if (parameter_count() != manifold_dimension(*group))
                fail("group " + std::string(dsl::to_string(ast_->group)) + " has dimension " +
                     std::to_string(manifold_dimension(*group)) + " but the chart declares " +
                     std::to_string(parameter_count()) + " parameters");
        }
        std::mt19937_64 rng(0x6861617263686b31ULL);
        std::vector<double> u(domain_.size());
        for (int trial = 0; trial < 100; ++trial) {
            for (std::size_t i = 0; i < u.size(); ++i) {
                const double t = static_cast<double>(rng() >> 11) * 0x1.0p-53;
                u[i] = domain_[i].lower + t * domain_[i].width();
            }
            const Matrix m = evaluate_unchecked(u);
            if (!m.allFinite()) fail("chart matrix is not finite at a sampled point");
            if (orthogonality_defect(m) > kInputTolerance) fail("chart matrix is not orthogonal at a sampled point");
            if (group && is_special(*group) && m.determinant() < 0)
                fail("chart declared as a special orthogonal group has det = -1 at a sampled point");
        }
    }

    std::shared_ptr<const dsl::ChartAst> ast_;
    std::vector<Interval> domain_;
    Realization realization_ = Realization::matrix;
    std::string builtin_tag_;
};

/// Tags of the charts shipped with the library.
inline std::vector<std::string> builtin_chart_tags() {
    std::vector<std::string> tags;
    for (const auto& s : generated::kBuiltinChartSources) tags.emplace_back(s.tag);
    return tags;
}

inline std::string_view builtin_chart_source(std::string_view tag) {
    for (const auto& s : generated::kBuiltinChartSources)
        if (s.tag == tag) return s.text;
    throw UnknownTag("unknown built-in chart '" + std::string(tag) + "'");
}

/// Built-in charts go through the same parser as user files.
inline const Chart& builtin_chart(std::string_view tag) {
    static const std::map<std::string, Chart, std::less<>> registry = [] {
        std::map<std::string, Chart, std::less<>> m;
        for (const auto& s : generated::kBuiltinChartSources) {
            const auto realization = s.tag == "so3-quat" ? Realization::unit_quaternion : Realization::matrix;
            m.emplace(std::string(s.tag), Chart::from_ast(dsl::parse_chart(s.text), realization, std::string(s.tag)));
        }
        return m;
    }();
    const auto it = registry.find(tag);
    if (it == registry.end()) throw UnknownTag("unknown built-in chart '" + std::string(tag) + "'");
    return it->second;
}

/// Default chart of a group for integration and sampling.
inline const Chart& default_chart(GroupTag g) {
    return builtin_chart(group_dimension(g) == 2 ? "so2-angle" : "so3-euler");
}

/// Error from reading a chart file; carries the origin for diagnostics.
class ChartFileError : public InvalidArgument {
public:
    ChartFileError(std::string origin, const std::string& what) : InvalidArgument(what), origin_(std::move(origin)) {}
    const std::string& origin() const { return origin_; }

private:
    std::string origin_;
};

/// "builtin:<tag>" or a path to a chart file.
inline Chart load_chart(std::string_view spec) {
    constexpr std::string_view prefix = "builtin:";
    if (spec.substr(0, prefix.size()) == prefix) return builtin_chart(spec.substr(prefix.size()));
    std::ifstream in{std::string(spec)};
    if (!in) throw ChartFileError(std::string(spec), "cannot open chart file '" + std::string(spec) + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return Chart::parse(buffer.str());
}

} // namespace haar
