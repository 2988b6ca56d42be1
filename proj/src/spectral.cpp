#include "mbound/spectral.hpp"

#include "mbound/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace mbound {

namespace {

constexpr double pivot_tolerance = 1e-13;

constexpr int power_phase_limit = 1000;

struct Bracket {
    double lo, hi;
};

// Collatz-Wielandt ratios of w = M v against v.
Bracket ratios(const std::vector<double>& w, const std::vector<double>& v)
{
    Bracket b{std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double q = w[i] / v[i];
        b.hi = std::max(b.hi, q);
        b.lo = std::min(b.lo, q);
    }
    return b;
}

SpectralResult converged(double value, int it, double residual, std::vector<double> v)
{
    SpectralResult r;
    r.value = std::max(0.0, value);
    r.iterations = it;
    r.residual = residual;
    // Floor at the smallest positive double so the positivity contract
    // survives underflow.
    for (double& x : v) x = std::max(x, std::numeric_limits<double>::min());
    r.eigenvector = std::move(v);
    return r;
}

// Perron root of an irreducible nonnegative matrix of order >= 2. Shifted
// power iteration first; if the subdominant eigenvalue is too close for it to
// settle quickly, Noda's inverse iteration with the upper Collatz-Wielandt
// bound as shift finishes from the current vector.
SpectralResult perron_irreducible(const DenseMatrix& a, const SpectralConfig& cfg)
{
    const std::size_t n = a.order();
    double shift = 0.0;
    for (std::size_t i = 0; i < n; ++i) shift = std::max(shift, a(i, i));
    shift += 1.0;

    std::vector<double> v(n, 1.0), w(n);
    double previous = std::numeric_limits<double>::infinity();
    double residual = std::numeric_limits<double>::infinity();
    double estimate = 0.0;
    const int power_iters = std::min(cfg.max_iter, power_phase_limit);

    int it = 1;
    for (; it <= power_iters; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = shift * v[i];
            for (std::size_t j = 0; j < n; ++j) acc += a(i, j) * v[j];
            w[i] = acc;
        }
        const Bracket b = ratios(w, v);
        const double scale = *std::ranges::max_element(w);
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / scale;

        estimate = 0.5 * (b.hi + b.lo);
        const double change = std::abs(estimate - previous) / estimate;
        residual = std::max(change, (b.hi - b.lo) / b.hi);
        previous = estimate;
        if (change <= cfg.rel_tol && (b.hi - b.lo) <= cfg.rel_tol * b.hi)
            return converged(estimate - shift, it, residual, std::move(v));
    }
    estimate -= shift;
    previous = estimate;

    for (; it <= cfg.max_iter; ++it) {
        w = a.multiply(v);
        const Bracket b = ratios(w, v);
        estimate = 0.5 * (b.hi + b.lo);
        const double change = std::abs(estimate - previous) / estimate;
        residual = std::max(change, (b.hi - b.lo) / b.hi);
        previous = estimate;
        if (change <= cfg.rel_tol && (b.hi - b.lo) <= cfg.rel_tol * b.hi)
            return converged(estimate, it, residual, std::move(v));

        DenseMatrix m = b.hi * DenseMatrix::identity(n) - a;
        const LuFactor f = lu_factor(m);
        if (f.min_abs_pivot == 0.0) return converged(b.hi, it, residual, std::move(v));
        std::vector<double> y = lu_solve(f, v);
        const double top = *std::ranges::max_element(y);
        bool positive = top > 0.0 && std::isfinite(top);
        for (double& x : y) {
            x /= top;
            if (!(x > 0.0)) positive = false;
        }
        // A singular-to-rounding shift means hi already equals rho.
        if (!positive) return converged(b.hi, it, residual, std::move(v));
        v = std::move(y);
    }
    throw ConvergenceError("power iteration did not converge within " + std::to_string(cfg.max_iter)
                               + " iterations",
                           estimate, residual);
}

void check_config(const SpectralConfig& cfg)
{
    if (!(cfg.rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
    if (cfg.max_iter < 1) throw DomainError("max_iter must be at least 1");
}

// Row i reaches column j through the off-diagonal pattern (or i == j).
std::vector<std::vector<bool>> reachability(const DenseMatrix& a)
{
    const std::size_t n = a.order();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        reach[i][i] = true;
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && a(i, j) != 0.0) reach[i][j] = true;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (reach[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (reach[k][j]) reach[i][j] = true;
    return reach;
}

} // namespace

LuFactor lu_factor(const DenseMatrix& a)
{
    const std::size_t n = a.order();
    LuFactor f{a, {}, 1, std::numeric_limits<double>::infinity()};
    f.perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
    DenseMatrix& m = f.lu;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(m(i, k)) > std::abs(m(p, k))) p = i;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
            std::swap(f.perm[k], f.perm[p]);
            f.sign = -f.sign;
        }
        const double pivot = m(k, k);
        f.min_abs_pivot = std::min(f.min_abs_pivot, std::abs(pivot));
        if (pivot == 0.0) continue;
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = m(i, k) / pivot;
            m(i, k) = l;
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= l * m(k, j);
        }
    }
    return f;
}

double determinant(const DenseMatrix& a)
{
    const LuFactor f = lu_factor(a);
    double det = f.sign;
    for (std::size_t k = 0; k < a.order(); ++k) det *= f.lu(k, k);
    return det;
}

std::vector<double> lu_solve(const LuFactor& f, std::span<const double> rhs)
{
    const std::size_t n = f.lu.order();
    if (rhs.size() != n) throw DimensionError("right-hand side length differs from matrix order");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = rhs[f.perm[i]];
        for (std::size_t k = 0; k < i; ++k) acc -= f.lu(i, k) * x[k];
        x[i] = acc;
    }
    for (std::size_t i = n; i-- > 0;) {
        double acc = x[i];
        for (std::size_t k = i + 1; k < n; ++k) acc -= f.lu(i, k) * x[k];
        x[i] = acc / f.lu(i, i);
    }
    return x;
}

DenseMatrix inverse(const DenseMatrix& a)
{
    const std::size_t n = a.order();
    const LuFactor f = lu_factor(a);
    if (!(f.min_abs_pivot > pivot_tolerance * a.max_abs()))
        throw SingularError("matrix is singular to working precision");

    DenseMatrix inv(n);
    std::vector<double> e(n, 0.0);
    for (std::size_t col = 0; col < n; ++col) {
        e[col] = 1.0;
        const std::vector<double> x = lu_solve(f, e);
        e[col] = 0.0;
        for (std::size_t i = 0; i < n; ++i) inv(i, col) = x[i];
    }
    return inv;
}

DenseMatrix m_matrix_inverse(const DenseMatrix& a)
{
    if (!is_nonsingular_m_matrix(a)) throw ClassError("not a nonsingular M-matrix");
    const std::size_t n = a.order();

    // Symmetric permutation to block upper triangular form (components come
    // out sinks first). Partial pivoting then stays inside each diagonal
    // block, so singularity is judged against the block's own scale.
    auto comps = strongly_connected_components(a);
    std::ranges::reverse(comps);
    std::vector<std::size_t> order;
    std::vector<std::size_t> block_of;
    std::vector<double> block_scale;
    for (std::size_t c = 0; c < comps.size(); ++c) {
        block_scale.push_back(a.principal(comps[c]).max_abs());
        for (std::size_t i : comps[c]) {
            order.push_back(i);
            block_of.push_back(c);
        }
    }
    const DenseMatrix p = a.principal(order);
    const LuFactor f = lu_factor(p);
    for (std::size_t k = 0; k < n; ++k)
        if (!(std::abs(f.lu(k, k)) > pivot_tolerance * block_scale[block_of[k]]))
            throw SingularError("matrix is singular to working precision");

    DenseMatrix inv(n);
    std::vector<double> e(n, 0.0);
    for (std::size_t col = 0; col < n; ++col) {
        e[col] = 1.0;
        const std::vector<double> x = lu_solve(f, e);
        e[col] = 0.0;
        for (std::size_t i = 0; i < n; ++i) inv(order[i], order[col]) = x[i];
    }

    // The inverse of a nonsingular M-matrix is nonnegative with (i,j) entry
    // positive exactly when j is reachable from i. Restore that pattern so
    // rounding noise neither flips signs nor joins components.
    const auto reach = reachability(a);
    const double big = inv.max_abs();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double& x = inv(i, j);
            if (!reach[i][j]) {
                x = 0.0;
            } else if (x < 0.0) {
                if (x < -1e-8 * big)
                    throw SingularError("inverse of M-matrix has a negative entry; matrix is too ill-conditioned");
                x = 0.0;
            }
        }
    return inv;
}

SpectralResult rho_nonnegative(const DenseMatrix& a, const SpectralConfig& cfg)
{
    check_config(cfg);
    if (!is_nonnegative(a)) throw ClassError("not nonnegative");

    if (a.order() == 1) {
        SpectralResult r;
        r.value = a(0, 0);
        if (a(0, 0) != 0.0) r.eigenvector = std::vector<double>{1.0};
        return r;
    }

    const auto components = strongly_connected_components(a);
    if (components.size() == 1) return perron_irreducible(a, cfg);

    SpectralResult r;
    for (const auto& comp : components) {
        double value = 0.0;
        if (comp.size() == 1) {
            value = a(comp[0], comp[0]);
        } else {
            const SpectralResult block = perron_irreducible(a.principal(comp), cfg);
            value = block.value;
            r.iterations += block.iterations;
            r.residual = std::max(r.residual, block.residual);
        }
        r.value = std::max(r.value, value);
    }
    return r;
}

SpectralResult tau_m_matrix(const DenseMatrix& a, const SpectralConfig& cfg)
{
    check_config(cfg);
    SpectralResult r = rho_nonnegative(m_matrix_inverse(a), cfg);
    if (!(r.value > 0.0)) throw SingularError("inverse has zero spectral radius");
    r.value = 1.0 / r.value;
    return r;
}

DenseMatrix jacobi_matrix(const DenseMatrix& a)
{
    const std::size_t n = a.order();
    DenseMatrix j(n);
    for (std::size_t r = 0; r < n; ++r) {
        const double d = a(r, r);
        if (d == 0.0) throw DomainError("zero diagonal entry at row " + std::to_string(r + 1));
        for (std::size_t c = 0; c < n; ++c)
            if (c != r) j(r, c) = -a(r, c) / d;
    }
    return j;
}

double jacobi_radius(const DenseMatrix& a, const SpectralConfig& cfg)
{
    if (!is_z_matrix(a)) throw ClassError("Jacobi radius requires a Z-matrix");
    return rho_nonnegative(jacobi_matrix(a), cfg).value;
}

} // namespace mbound
