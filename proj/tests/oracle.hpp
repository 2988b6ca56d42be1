// Independent reference computations for the tests. Nothing here calls the
// library's spectral code.
#ifndef MBOUND_TEST_ORACLE_HPP
#define MBOUND_TEST_ORACLE_HPP

#include "mbound/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace oracle {

using ld = long double;
using cld = std::complex<ld>;

// Coefficients c_0..c_n of det(lambda I - A), c_n = 1 (Faddeev-LeVerrier).
inline std::vector<ld> char_poly(const mbound::DenseMatrix& a)
{
    const std::size_t n = a.order();
    std::vector<ld> c(n + 1, 0.0L);
    c[n] = 1.0L;
    std::vector<ld> m(n * n, 0.0L), am(n * n);
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A M_{k-1} + c_{n-k+1} I
        std::vector<ld> next(n * n, 0.0L);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                ld acc = 0.0L;
                for (std::size_t l = 0; l < n; ++l) acc += static_cast<ld>(a(i, l)) * m[l * n + j];
                next[i * n + j] = acc + (i == j ? c[n - k + 1] : 0.0L);
            }
        m = next;
        ld trace = 0.0L;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) trace += static_cast<ld>(a(i, l)) * m[l * n + i];
        c[n - k] = -trace / static_cast<ld>(k);
    }
    return c;
}

inline cld eval(const std::vector<ld>& c, cld z)
{
    cld acc = 0.0L;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
    return acc;
}

// All roots of a monic polynomial (Durand-Kerner), Newton polished.
inline std::vector<cld> roots(const std::vector<ld>& c)
{
    const std::size_t n = c.size() - 1;
    ld bound = 0.0L;
    for (std::size_t k = 0; k < n; ++k) bound = std::max(bound, std::abs(c[k]));
    bound += 1.0L;
    std::vector<cld> z(n);
    const cld seed(0.4L, 0.9L);
    for (std::size_t k = 0; k < n; ++k) z[k] = std::pow(seed, static_cast<int>(k)) * bound / 2.0L;
    for (int it = 0; it < 5000; ++it) {
        ld change = 0.0L;
        for (std::size_t k = 0; k < n; ++k) {
            cld denom = 1.0L;
            for (std::size_t j = 0; j < n; ++j)
                if (j != k) denom *= (z[k] - z[j]);
            if (std::abs(denom) == 0.0L) denom = 1e-30L;
            const cld step = eval(c, z[k]) / denom;
            z[k] -= step;
            change = std::max(change, std::abs(step));
        }
        if (change <= 1e-17L * bound) break;
    }
    return z;
}

// Largest real eigenvalue, via the characteristic polynomial.
inline double max_real_eigenvalue(const mbound::DenseMatrix& a)
{
    const auto z = roots(char_poly(a));
    ld best = -1e300L;
    ld scale = 1.0L;
    for (const auto& r : z) scale = std::max(scale, std::abs(r));
    for (const auto& r : z)
        if (std::abs(r.imag()) <= 1e-7L * scale) best = std::max(best, r.real());
    return static_cast<double>(best);
}

// Smallest real eigenvalue.
inline double min_real_eigenvalue(const mbound::DenseMatrix& a)
{
    const auto z = roots(char_poly(a));
    ld best = 1e300L;
    ld scale = 1.0L;
    for (const auto& r : z) scale = std::max(scale, std::abs(r));
    for (const auto& r : z)
        if (std::abs(r.imag()) <= 1e-7L * scale) best = std::min(best, r.real());
    return static_cast<double>(best);
}

// A Z-matrix is a nonsingular M-matrix exactly when every leading principal
// minor is positive, i.e. elimination without pivoting meets only positive
// pivots.
inline bool leading_minors_positive(const mbound::DenseMatrix& z, ld shift)
{
    const std::size_t n = z.order();
    std::vector<std::vector<ld>> m(n, std::vector<ld>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = static_cast<ld>(z(i, j)) - (i == j ? shift : 0.0L);
    for (std::size_t k = 0; k < n; ++k) {
        if (!(m[k][k] > 0.0L)) return false;
        for (std::size_t i = k + 1; i < n; ++i) {
            const ld l = m[i][k] / m[k][k];
            for (std::size_t j = k + 1; j < n; ++j) m[i][j] -= l * m[k][j];
        }
    }
    return true;
}

// Smallest real eigenvalue of a Z-matrix by bisection: x < tau(Z) exactly when
// Z - xI is a nonsingular M-matrix. Unaffected by repeated eigenvalues.
inline double z_matrix_min_eigenvalue(const mbound::DenseMatrix& z)
{
    ld lo = 1e300L, hi = -1e300L;
    for (std::size_t i = 0; i < z.order(); ++i) {
        ld off = 0.0L;
        for (std::size_t j = 0; j < z.order(); ++j)
            if (j != i) off += std::abs(static_cast<ld>(z(i, j)));
        lo = std::min(lo, static_cast<ld>(z(i, i)) - off);
        hi = std::max(hi, static_cast<ld>(z(i, i)));
    }
    lo -= 1.0L; // Gershgorin, strictly below
    for (int it = 0; it < 400 && lo < hi; ++it) {
        const ld mid = 0.5L * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (leading_minors_positive(z, mid) ? lo : hi) = mid;
    }
    return static_cast<double>(hi); // hi is exact when tau sits on a diagonal entry
}

// Perron root of a nonnegative matrix: tau(-A) = -rho(A).
inline double perron_root(const mbound::DenseMatrix& a)
{
    return -z_matrix_min_eigenvalue(-1.0 * a);
}

// Gauss-Jordan elimination with full pivoting in long double.
inline mbound::DenseMatrix inverse(const mbound::DenseMatrix& a)
{
    const std::size_t n = a.order();
    std::vector<ld> m(n * 2 * n, 0.0L);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i * 2 * n + j] = a(i, j);
        m[i * 2 * n + n + i] = 1.0L;
    }
    std::vector<std::size_t> colperm(n);
    for (std::size_t j = 0; j < n; ++j) colperm[j] = j;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pr = k, pc = k;
        for (std::size_t i = k; i < n; ++i)
            for (std::size_t j = k; j < n; ++j)
                if (std::abs(m[i * 2 * n + j]) > std::abs(m[pr * 2 * n + pc])) {
                    pr = i;
                    pc = j;
                }
        if (m[pr * 2 * n + pc] == 0.0L) throw std::runtime_error("oracle: singular");
        for (std::size_t j = 0; j < 2 * n; ++j) std::swap(m[k * 2 * n + j], m[pr * 2 * n + j]);
        for (std::size_t i = 0; i < n; ++i) std::swap(m[i * 2 * n + k], m[i * 2 * n + pc]);
        std::swap(colperm[k], colperm[pc]);
        const ld piv = m[k * 2 * n + k];
        for (std::size_t j = 0; j < 2 * n; ++j) m[k * 2 * n + j] /= piv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const ld f = m[i * 2 * n + k];
            if (f == 0.0L) continue;
            for (std::size_t j = 0; j < 2 * n; ++j) m[i * 2 * n + j] -= f * m[k * 2 * n + j];
        }
    }
    // Column swaps permute the unknowns, i.e. the rows of the inverse.
    mbound::DenseMatrix inv(n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) inv(colperm[k], j) = static_cast<double>(m[k * 2 * n + n + j]);
    return inv;
}

} // namespace oracle

#endif
