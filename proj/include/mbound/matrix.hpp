#ifndef MBOUND_MATRIX_HPP
#define MBOUND_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mbound {

/// Square real matrix stored row-major in 64-bit floating point.
///
/// Every constructor rejects a zero order and non-finite entries. Element
/// access through operator() is unchecked; use at() when the indices come
/// from outside.
class DenseMatrix {
public:
    /// n x n zero matrix.
    explicit DenseMatrix(std::size_t n);
    DenseMatrix(std::size_t n, std::vector<double> row_major);
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix ones(std::size_t n);
    static DenseMatrix diagonal(std::span<const double> d);
    /// Throws DimensionError for ragged or non-square input.
    static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t order() const noexcept { return n_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
    double at(std::size_t i, std::size_t j) const;

    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * n_, n_}; }
    std::span<const double> data() const noexcept { return data_; }
    std::vector<double> diag() const;

    /// Largest absolute entry; 0 for the zero matrix.
    double max_abs() const noexcept;
    /// Principal submatrix on the given (sorted or not) index set.
    DenseMatrix principal(std::span<const std::size_t> idx) const;
    DenseMatrix leading(std::size_t k) const;
    DenseMatrix transpose() const;

    std::vector<double> multiply(std::span<const double> x) const;
    DenseMatrix multiply(const DenseMatrix& rhs) const;

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    void check_finite() const;

    std::size_t n_;
    std::vector<double> data_;
};

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);

/// Max-norm of the entrywise difference.
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

struct MatrixClassification {
    bool nonnegative = false;
    bool z_matrix = false;
    bool nonsingular_m_matrix = false;
    bool irreducible = false;
    bool strictly_row_dd = false;

    friend bool operator==(const MatrixClassification&, const MatrixClassification&) = default;
};

/// The order-n cyclic permutation with ones at (1,2), (2,3), ..., (n-1,n), (n,1).
struct CyclicPermutation {
    std::size_t n;

    /// Column holding the single 1 of row i.
    std::size_t column_of(std::size_t i) const noexcept { return (i + 1) % n; }
    DenseMatrix matrix() const;
};

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b);

/// Diagonal a_ii b_ii, off-diagonal -a_ij b_ij.
DenseMatrix fan_product(const DenseMatrix& a, const DenseMatrix& b);

/// p-fold Fan product of a with itself: diagonal a_ii^p, off-diagonal -|a_ij|^p.
DenseMatrix fan_power(const DenseMatrix& a, int p);

MatrixClassification classify(const DenseMatrix& a);

bool is_nonnegative(const DenseMatrix& a) noexcept;
/// Off-diagonal entries <= 0. Zero off-diagonals are allowed.
bool is_z_matrix(const DenseMatrix& a) noexcept;
bool is_strictly_row_dd(const DenseMatrix& a) noexcept;
/// Strong connectivity of the digraph i -> j, i != j, a_ij != 0 (exact test).
/// A 1x1 matrix is irreducible iff its entry is nonzero.
bool is_irreducible(const DenseMatrix& a);
/// Z-matrix whose leading principal minors are all positive, tested on each
/// strongly connected diagonal block with threshold 1e-12 * scale^k, scale
/// being the block's largest magnitude.
bool is_nonsingular_m_matrix(const DenseMatrix& a);

/// Strongly connected components of the off-diagonal nonzero pattern, each
/// sorted ascending. Components are listed in reverse topological order.
std::vector<std::vector<std::size_t>> strongly_connected_components(const DenseMatrix& a);

/// D^-1 A D with D = diag(d); entry (i,j) becomes a_ij d_j / d_i.
DenseMatrix scale_similarity(const DenseMatrix& a, std::span<const double> d);

/// a + sign * eps * P with P the cyclic permutation of order n.
DenseMatrix perturb_cyclic(const DenseMatrix& a, double eps, int sign);

} // namespace mbound

#endif
