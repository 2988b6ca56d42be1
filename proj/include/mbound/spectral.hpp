#ifndef MBOUND_SPECTRAL_HPP
#define MBOUND_SPECTRAL_HPP

#include "mbound/matrix.hpp"

#include <optional>
#include <span>
#include <vector>

namespace mbound {

struct SpectralConfig {
    double rel_tol = 1e-12;
    int max_iter = 100000;
};

/// Perron root (rho) or minimum M-matrix eigenvalue (tau).
///
/// When present the eigenvector is strictly positive and scaled to unit
/// max-norm. It is only produced for irreducible inputs.
struct SpectralResult {
    double value = 0.0;
    std::optional<std::vector<double>> eigenvector;
    int iterations = 0;
    double residual = 0.0;
};

/// Row-pivoted LU factorization, PA = LU with unit lower L stored below the
/// diagonal of `lu`.
struct LuFactor {
    DenseMatrix lu;
    std::vector<std::size_t> perm; // row i of PA is row perm[i] of A
    int sign = 1;
    double min_abs_pivot = 0.0;
};

LuFactor lu_factor(const DenseMatrix& a);

/// Solves A x = rhs from a factorization of A.
std::vector<double> lu_solve(const LuFactor& f, std::span<const double> rhs);

/// Product of the LU pivots with the permutation sign; 0 for exactly singular input.
double determinant(const DenseMatrix& a);

/// Throws SingularError when some |pivot| <= 1e-13 * max|a_ij|.
DenseMatrix inverse(const DenseMatrix& a);

/// Inverse of a nonsingular M-matrix with its sign pattern restored: entries
/// not reachable in the digraph of a are exactly 0, rounding negatives are
/// clamped to 0. Computed on the block upper triangular permutation, with the
/// pivot tolerance applied per strongly connected block. Throws ClassError
/// for other inputs and SingularError when a negative entry exceeds 1e-8 of
/// the largest entry.
DenseMatrix m_matrix_inverse(const DenseMatrix& a);

/// Spectral radius of a nonnegative matrix.
///
/// Irreducible input: power iteration on a + cI (c = 1 + max diagonal entry),
/// which is primitive, stopping once both the change of the estimate and the
/// Collatz-Wielandt bracket max_i (Mv)_i/v_i - min_i (Mv)_i/v_i fall below
/// rel_tol relative to the estimate. After 1000 steps without convergence the
/// iteration switches to Noda's inverse iteration, (hi I - a) y = v with hi
/// the upper bracket, under the same stopping rule. Reducible input: the maximum over the
/// diagonal blocks of the strongly connected components, without eigenvector.
///
/// Throws ClassError for a negative entry and ConvergenceError when max_iter
/// is exhausted.
SpectralResult rho_nonnegative(const DenseMatrix& a, const SpectralConfig& cfg = {});

/// tau(a) = 1 / rho(a^-1) for a nonsingular M-matrix. The eigenvector is the
/// Perron vector of the inverse, which is the eigenvector of a for tau.
SpectralResult tau_m_matrix(const DenseMatrix& a, const SpectralConfig& cfg = {});

/// Jacobi iteration matrix D^-1 (D - A), D = diag(a).
DenseMatrix jacobi_matrix(const DenseMatrix& a);

/// rho of the Jacobi iteration matrix of a Z-matrix with nonzero diagonal.
double jacobi_radius(const DenseMatrix& a, const SpectralConfig& cfg = {});

} // namespace mbound

#endif
