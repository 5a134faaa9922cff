#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "haar/errors.hpp"
#include "haar/group.hpp"

namespace haar {

/// Dense order-n tensor over R^D, entries row-major in (i1, ..., in).
class Tensor {
public:
    /// Memory guard: 3^10 entries.
    static constexpr std::size_t kMaxEntries = 59049;

    Tensor() : Tensor(1, 0) {}

    Tensor(int dim, int order) : dim_(dim), order_(order) {
        if (dim < 1) throw DimensionError("tensor dimension must be positive");
        if (order < 0) throw DimensionError("tensor order must be nonnegative");
        entries_.assign(entry_count(dim, order), 0.0);
    }

    Tensor(int dim, int order, std::vector<double> entries) : Tensor(dim, order) {
        if (entries.size() != entries_.size())
            throw DimensionError("tensor of dimension " + std::to_string(dim) + " and order " + std::to_string(order) +
                                 " needs " + std::to_string(entries_.size()) + " entries, got " +
                                 std::to_string(entries.size()));
        entries_ = std::move(entries);
    }

    /// D^n, or CapacityError beyond kMaxEntries.
    static std::size_t entry_count(int dim, int order) {
        std::size_t n = 1;
        for (int k = 0; k < order; ++k) {
            n *= static_cast<std::size_t>(dim);
            if (n > kMaxEntries)
                throw CapacityError("tensor of dimension " + std::to_string(dim) + " and order " +
                                    std::to_string(order) + " exceeds the " + std::to_string(kMaxEntries) +
                                    "-entry cap");
        }
        return n;
    }

    static Tensor from_matrix(const Matrix& m) {
        if (m.rows() != m.cols()) throw DimensionError("tensor from matrix: matrix must be square");
        Tensor t(static_cast<int>(m.rows()), 2);
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) t.entries_[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
        return t;
    }

    static Tensor from_vector(const Vector& v) {
        return Tensor(static_cast<int>(v.size()), 1, std::vector<double>(v.data(), v.data() + v.size()));
    }

    /// k-th canonical basis tensor.
    static Tensor basis(int dim, int order, std::size_t k) {
        Tensor t(dim, order);
        t.entries_.at(k) = 1.0;
        return t;
    }

    static Tensor identity(int dim) { return from_matrix(Matrix::Identity(dim, dim)); }

    int dim() const { return dim_; }
    int order() const { return order_; }
    std::size_t size() const { return entries_.size(); }
    std::span<const double> entries() const { return entries_; }
    std::span<double> entries() { return entries_; }

    double operator[](std::size_t k) const { return entries_[k]; }
    double& operator[](std::size_t k) { return entries_[k]; }

    template <class... I>
    double operator()(I... idx) const {
        return entries_[offset({static_cast<int>(idx)...})];
    }
    template <class... I>
    double& operator()(I... idx) {
        return entries_[offset({static_cast<int>(idx)...})];
    }

    Matrix to_matrix() const {
        if (order_ != 2) throw DimensionError("to_matrix needs an order-2 tensor");
        Matrix m(dim_, dim_);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) m(i, j) = entries_[static_cast<std::size_t>(i * dim_ + j)];
        return m;
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : entries_) m = std::max(m, std::abs(x));
        return m;
    }

    Tensor& operator+=(const Tensor& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
        return *this;
    }
    Tensor& operator-=(const Tensor& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
        return *this;
    }
    Tensor& operator*=(double s) {
        for (double& x : entries_) x *= s;
        return *this;
    }

    friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
    friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
    friend Tensor operator*(Tensor a, double s) { return a *= s; }
    friend Tensor operator*(double s, Tensor a) { return a *= s; }

    bool same_shape(const Tensor& o) const { return dim_ == o.dim_ && order_ == o.order_; }

private:
    void require_same_shape(const Tensor& o) const {
        if (!same_shape(o)) throw DimensionError("tensor shapes differ");
    }

    std::size_t offset(std::initializer_list<int> idx) const {
        if (static_cast<int>(idx.size()) != order_) throw DimensionError("tensor index count differs from order");
        std::size_t k = 0;
        for (int i : idx) k = k * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
        return k;
    }

    int dim_;
    int order_;
    std::vector<double> entries_;
};

inline double max_abs_diff(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) throw DimensionError("tensor shapes differ");
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

/// Frobenius inner product of two tensors of the same shape (plain sum of products).
inline double dot(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) throw DimensionError("tensor shapes differ");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

inline Tensor outer(const Tensor& a, const Tensor& b) {
    if (a.dim() != b.dim()) throw DimensionError("outer product of tensors over different dimensions");
    Tensor t(a.dim(), a.order() + b.order());
    std::size_t k = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) t[k++] = a[i] * b[j];
    return t;
}

/// v (x) v (x) ... (x) v, r times.
inline Tensor tensor_power(const Tensor& v, int r) {
    if (r < 0) throw InvalidArgument("tensor power must be nonnegative");
    Tensor::entry_count(v.dim(), v.order() * r);
    Tensor t(v.dim(), 0, {1.0});
    for (int k = 0; k < r; ++k) t = outer(t, v);
    return t;
}

/// (g * T)_{i1..in} = g_{i1 j1} ... g_{in jn} T_{j1..jn}, as n mode products.
inline Tensor act(const Matrix& g, const Tensor& t) {
    const int d = t.dim();
    if (g.rows() != d || g.cols() != d) throw DimensionError("act: group element and tensor dimensions differ");
    Tensor out = t;
    std::vector<double> fiber(static_cast<std::size_t>(d));
    std::size_t inner = out.size();
    std::size_t outer_count = 1;
    for (int mode = 0; mode < t.order(); ++mode) {
        inner /= static_cast<std::size_t>(d);
        auto e = out.entries();
        for (std::size_t o = 0; o < outer_count; ++o) {
            const std::size_t base = o * static_cast<std::size_t>(d) * inner;
            for (std::size_t r = 0; r < inner; ++r) {
                for (int j = 0; j < d; ++j) fiber[j] = e[base + static_cast<std::size_t>(j) * inner + r];
                for (int i = 0; i < d; ++i) {
                    double s = 0.0;
                    for (int j = 0; j < d; ++j) s += g(i, j) * fiber[j];
                    e[base + static_cast<std::size_t>(i) * inner + r] = s;
                }
            }
        }
        outer_count *= static_cast<std::size_t>(d);
    }
    return out;
}

inline Tensor act(const GroupElement& g, const Tensor& t) { return act(g.matrix(), t); }

} // namespace haar
