#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "haar/chart.hpp"
#include "haar/errors.hpp"

namespace haar {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b]. Nodes are the Legendre roots, found by
/// Newton from the Tricomi initial guesses.
inline Rule1D gauss_legendre(int n, double a, double b) {
    if (n < 1) throw InvalidArgument("gauss_legendre: need at least one node");
    if (!(a < b)) throw InvalidArgument("gauss_legendre: empty interval");
    Rule1D rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    const unsigned un = static_cast<unsigned>(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            const double p = std::legendre(un, x);
            const double pm1 = n > 1 ? std::legendre(un - 1, x) : 1.0;
            dp = n * (x * p - pm1) / (x * x - 1.0);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        {
            const double p = std::legendre(un, x);
            const double pm1 = n > 1 ? std::legendre(un - 1, x) : 1.0;
            dp = n * (x * p - pm1) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = mid - half * x;
        rule.nodes[hi] = mid + half * x;
        rule.weights[lo] = rule.weights[hi] = half * w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = mid;
    return rule;
}

/// Tensor-product Gauss-Legendre rule over a box.
class QuadratureRule {
public:
    static QuadratureRule gauss_legendre(const std::vector<Interval>& box, std::vector<int> nodes_per_axis) {
        if (box.size() != nodes_per_axis.size())
            throw DimensionError("quadrature: one node count per axis is required");
        QuadratureRule q;
        q.nodes_per_axis_ = std::move(nodes_per_axis);
        for (std::size_t i = 0; i < box.size(); ++i)
            q.axes_.push_back(haar::gauss_legendre(q.nodes_per_axis_[i], box[i].lower, box[i].upper));
        return q;
    }

    static QuadratureRule gauss_legendre(const std::vector<Interval>& box, int n) {
        return gauss_legendre(box, std::vector<int>(box.size(), n));
    }

    std::size_t dimension() const { return axes_.size(); }
    const std::vector<int>& nodes_per_axis() const { return nodes_per_axis_; }
    const Rule1D& axis(std::size_t i) const { return axes_[i]; }

    std::size_t size() const {
        std::size_t n = 1;
        for (int k : nodes_per_axis_) n *= static_cast<std::size_t>(k);
        return n;
    }

    /// Calls f(u, weight) on every node, last axis fastest.
    template <class F>
    void for_each(F&& f) const {
        const std::size_t d = axes_.size();
        std::vector<std::size_t> idx(d, 0);
        std::vector<double> u(d);
        for (std::size_t count = size(), k = 0; k < count; ++k) {
            double w = 1.0;
            for (std::size_t i = 0; i < d; ++i) {
                u[i] = axes_[i].nodes[idx[i]];
                w *= axes_[i].weights[idx[i]];
            }
            f(std::span<const double>(u), w);
            for (std::size_t i = d; i-- > 0;) {
                if (++idx[i] < axes_[i].nodes.size()) break;
                idx[i] = 0;
            }
        }
    }

private:
    std::vector<int> nodes_per_axis_;
    std::vector<Rule1D> axes_;
};

} // namespace haar
