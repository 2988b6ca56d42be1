#include "mbound/matrix.hpp"

#include "mbound/error.hpp"
#include "mbound/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace mbound {

DenseMatrix::DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0)
{
    if (n == 0) throw DimensionError("matrix order must be at least 1");
}

DenseMatrix::DenseMatrix(std::size_t n, std::vector<double> row_major)
    : n_(n), data_(std::move(row_major))
{
    if (n == 0) throw DimensionError("matrix order must be at least 1");
    if (data_.size() != n * n)
        throw DimensionError("expected " + std::to_string(n * n) + " entries, got "
                             + std::to_string(data_.size()));
    check_finite();
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : n_(rows.size())
{
    if (n_ == 0) throw DimensionError("matrix order must be at least 1");
    data_.reserve(n_ * n_);
    for (const auto& r : rows) {
        if (r.size() != n_) throw DimensionError("matrix is not square");
        data_.insert(data_.end(), r.begin(), r.end());
    }
    check_finite();
}

DenseMatrix DenseMatrix::identity(std::size_t n)
{
    DenseMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::ones(std::size_t n)
{
    return DenseMatrix(n, std::vector<double>(n * n, 1.0));
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> d)
{
    DenseMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    m.check_finite();
    return m;
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows)
{
    const std::size_t n = rows.size();
    if (n == 0) throw DimensionError("matrix order must be at least 1");
    std::vector<double> flat;
    flat.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n)
            throw DimensionError("row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size())
                                 + " entries; a square matrix of order " + std::to_string(n)
                                 + " needs " + std::to_string(n));
        flat.insert(flat.end(), rows[i].begin(), rows[i].end());
    }
    return DenseMatrix(n, std::move(flat));
}

double DenseMatrix::at(std::size_t i, std::size_t j) const
{
    if (i >= n_ || j >= n_) throw DimensionError("index out of range");
    return (*this)(i, j);
}

std::vector<double> DenseMatrix::diag() const
{
    std::vector<double> d(n_);
    for (std::size_t i = 0; i < n_; ++i) d[i] = (*this)(i, i);
    return d;
}

double DenseMatrix::max_abs() const noexcept
{
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

DenseMatrix DenseMatrix::principal(std::span<const std::size_t> idx) const
{
    DenseMatrix sub(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) sub(i, j) = at(idx[i], idx[j]);
    return sub;
}

DenseMatrix DenseMatrix::leading(std::size_t k) const
{
    if (k == 0 || k > n_) throw DimensionError("leading block size out of range");
    DenseMatrix sub(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub(i, j) = (*this)(i, j);
    return sub;
}

DenseMatrix DenseMatrix::transpose() const
{
    DenseMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const
{
    if (x.size() != n_) throw DimensionError();
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n_; ++j) acc += (*this)(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

DenseMatrix DenseMatrix::multiply(const DenseMatrix& rhs) const
{
    if (rhs.n_ != n_) throw DimensionError();
    DenseMatrix out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < n_; ++j) out(i, j) += aik * rhs(k, j);
        }
    return out;
}

void DenseMatrix::check_finite() const
{
    for (double v : data_)
        if (!std::isfinite(v)) throw DomainError("matrix entries must be finite");
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.order() != b.order()) throw DimensionError();
    DenseMatrix c(a.order());
    for (std::size_t i = 0; i < a.order(); ++i)
        for (std::size_t j = 0; j < a.order(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b)
{
    return a + (-1.0) * b;
}

DenseMatrix operator*(double s, const DenseMatrix& a)
{
    DenseMatrix c(a.order());
    for (std::size_t i = 0; i < a.order(); ++i)
        for (std::size_t j = 0; j < a.order(); ++j) c(i, j) = s * a(i, j);
    return c;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.order() != b.order()) throw DimensionError();
    double m = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    return m;
}

DenseMatrix CyclicPermutation::matrix() const
{
    DenseMatrix p(n);
    for (std::size_t i = 0; i < n; ++i) p(i, column_of(i)) = 1.0;
    return p;
}

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.order() != b.order()) throw DimensionError();
    const std::size_t n = a.order();
    DenseMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c(i, j) = a(i, j) * b(i, j);
    return c;
}

DenseMatrix fan_product(const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.order() != b.order()) throw DimensionError();
    const std::size_t n = a.order();
    DenseMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c(i, j) = (i == j ? 1.0 : -1.0) * a(i, j) * b(i, j) + 0.0; // no -0
    return c;
}

DenseMatrix fan_power(const DenseMatrix& a, int p)
{
    if (p < 1) throw DomainError("Fan power exponent must be a positive integer");
    const std::size_t n = a.order();
    DenseMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                c(i, i) = std::pow(a(i, i), p);
            else
                c(i, j) = -std::pow(std::abs(a(i, j)), p) + 0.0;
        }
    return c;
}

bool is_nonnegative(const DenseMatrix& a) noexcept
{
    return std::ranges::all_of(a.data(), [](double v) { return v >= 0.0; });
}

bool is_z_matrix(const DenseMatrix& a) noexcept
{
    for (std::size_t i = 0; i < a.order(); ++i)
        for (std::size_t j = 0; j < a.order(); ++j)
            if (i != j && a(i, j) > 0.0) return false;
    return true;
}

bool is_strictly_row_dd(const DenseMatrix& a) noexcept
{
    for (std::size_t i = 0; i < a.order(); ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < a.order(); ++j)
            if (j != i) off += std::abs(a(i, j));
        if (!(std::abs(a(i, i)) > off)) return false;
    }
    return true;
}

std::vector<std::vector<std::size_t>> strongly_connected_components(const DenseMatrix& a)
{
    // Tarjan; recursion depth is bounded by the order.
    const std::size_t n = a.order();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> components;
    std::size_t counter = 0;

    std::function<void(std::size_t)> visit = [&](std::size_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (std::size_t w = 0; w < n; ++w) {
            if (w == v || a(v, w) == 0.0) continue;
            if (index[w] == unvisited) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<std::size_t> comp;
            std::size_t w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
            } while (w != v);
            std::ranges::sort(comp);
            components.push_back(std::move(comp));
        }
    };

    for (std::size_t v = 0; v < n; ++v)
        if (index[v] == unvisited) visit(v);
    return components;
}

bool is_irreducible(const DenseMatrix& a)
{
    if (a.order() == 1) return a(0, 0) != 0.0;
    return strongly_connected_components(a).size() == 1;
}

bool is_nonsingular_m_matrix(const DenseMatrix& a)
{
    if (!is_z_matrix(a)) return false;
    // A Z-matrix is a nonsingular M-matrix iff each irreducible diagonal
    // block is; testing blocks separately keeps the tolerance relative to
    // each block's own scale.
    for (const auto& comp : strongly_connected_components(a)) {
        const DenseMatrix block = a.principal(comp);
        const double scale = block.max_abs();
        if (scale == 0.0) return false;
        for (std::size_t k = 1; k <= block.order(); ++k) {
            const double minor = determinant(block.leading(k));
            if (!(minor > 1e-12 * std::pow(scale, static_cast<double>(k)))) return false;
        }
    }
    return true;
}

MatrixClassification classify(const DenseMatrix& a)
{
    MatrixClassification c;
    c.nonnegative = is_nonnegative(a);
    c.z_matrix = is_z_matrix(a);
    c.nonsingular_m_matrix = c.z_matrix && is_nonsingular_m_matrix(a);
    c.irreducible = is_irreducible(a);
    c.strictly_row_dd = is_strictly_row_dd(a);
    return c;
}

DenseMatrix scale_similarity(const DenseMatrix& a, std::span<const double> d)
{
    const std::size_t n = a.order();
    if (d.size() != n) throw DimensionError("scaling vector length differs from matrix order");
    for (double v : d)
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("scaling entries must be positive");
    DenseMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c(i, j) = (i == j) ? a(i, i) : a(i, j) * d[j] / d[i];
    return c;
}

DenseMatrix perturb_cyclic(const DenseMatrix& a, double eps, int sign)
{
    if (!(eps > 0.0)) throw DomainError("perturbation size must be positive");
    if (sign != 1 && sign != -1) throw DomainError("perturbation sign must be +1 or -1");
    DenseMatrix c = a;
    const CyclicPermutation p{a.order()};
    for (std::size_t i = 0; i < a.order(); ++i) c(i, p.column_of(i)) += sign * eps;
    return c;
}

} // namespace mbound
