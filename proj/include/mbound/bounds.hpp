#ifndef MBOUND_BOUNDS_HPP
#define MBOUND_BOUNDS_HPP

#include "mbound/matrix.hpp"

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mbound {

enum class Direction { upper, lower };

std::string_view to_string(Direction d) noexcept;

/// One evaluated bound together with the intermediate quantities it used.
struct BoundResult {
    std::string name;
    Direction direction = Direction::upper;
    double value = 0.0;
    /// Ordered (name, value) pairs: spectral inputs, extremal index pair, ...
    std::vector<std::pair<std::string, double>> components;
    /// Free-form remarks, e.g. a radicand clamped at zero or a rescaling applied.
    std::vector<std::string> notes;
    /// Distance to the exact eigenvalue on the safe side; negative means the
    /// bound is violated. Filled in by callers that know the exact value.
    std::optional<double> slack;

    std::optional<double> component(std::string_view key) const;
};

/// s_i = max_{j != i} |a_ij| and t_i = max_{j != i} |b_ij|; zero for order 1.
struct OffdiagMax {
    std::vector<double> s;
    std::vector<double> t;
};

/// Inner weight in s_ji = (|a_ji| + sum_{k != j,i} |a_jk| w) / |a_jj|.
enum class ChainForm {
    summand_column,   ///< w = r_k, the k-th column maximum
    column_ratio, ///< w = r_i, the column maximum of the target column
};

/// r_li = |a_li| / (|a_ll| - sum_{k != l,i} |a_lk|), r_i = max_{l != i} r_li,
/// s_ji as in ChainForm, s_i = max_{j != i} s_ji (column reduction) and
/// s_by_row_j = max_{i != j} s_ji (row reduction). Diagonals of r_pair and
/// s_pair are zero.
struct AuxChain {
    DenseMatrix r_pair;
    std::vector<double> r;
    DenseMatrix s_pair;
    std::vector<double> s;
    std::vector<double> s_by_row;
};

/// Positive integers P_1..P_m with sum 1/P_k >= 1.
class HolderExponents {
public:
    explicit HolderExponents(std::vector<int> p);
    /// Comma separated list such as "1,2".
    static HolderExponents parse(std::string_view text);

    const std::vector<int>& values() const noexcept { return p_; }
    std::size_t size() const noexcept { return p_.size(); }
    std::string to_string() const;

private:
    std::vector<int> p_;
};

/// Which deficit product enters the cross term of the Hadamard-inverse bound.
enum class DeficitFactor {
    same_matrix, ///< (a_ii - tau(A)) (a_jj - tau(A)); the form used in the derivation
    mixed,       ///< (a_ii - tau(A)) (b_jj - tau(B)); the form of the closed statement
};

/// Which per-row weights multiply the cross term of the Hadamard-inverse bound.
enum class HinvWeights {
    b_chain,       ///< AuxChain(B).s
    a_offdiag_max, ///< max_{j != i} |a_ij|
};

/// Reduction of s_ji used by the Li bound.
enum class ChainReduction { by_row, by_column };

struct HinvOptions {
    DeficitFactor factor = DeficitFactor::same_matrix;
    HinvWeights weights = HinvWeights::b_chain;
    ChainForm chain_form = ChainForm::summand_column;
    ChainReduction li_reduction = ChainReduction::by_row;
};

/// B itself when strictly row diagonally dominant; otherwise D^-1 B D with
/// d = B^-1 * ones, whose row sums are 1/d_i > 0.
struct DominantForm {
    DenseMatrix matrix;
    std::vector<double> d;
    bool scaled = false;
};

OffdiagMax aux_offdiag_max(const DenseMatrix& a, const DenseMatrix& b);
std::vector<double> offdiag_row_max(const DenseMatrix& a);

/// Throws DomainError("denominator nonpositive at row l, column i") when the
/// chain is undefined.
AuxChain aux_chain(const DenseMatrix& a, ChainForm form = ChainForm::summand_column);

DominantForm row_dominant_form(const DenseMatrix& b);

// Upper bounds on rho(A o B), A, B >= 0.
BoundResult rho_bound_product(double rho_a, double rho_b);
BoundResult rho_bound_fang(const DenseMatrix& a, const DenseMatrix& b, double rho_a, double rho_b);
BoundResult rho_bound_liu(const DenseMatrix& a, const DenseMatrix& b, double rho_a, double rho_b);
/// Brauer-type bound weighted by the off-diagonal row maxima of A and B.
BoundResult rho_bound_offdiag(const DenseMatrix& a, const DenseMatrix& b, double rho_a, double rho_b);

// Lower bounds on tau(A * B) for the Fan product of nonsingular M-matrices.
BoundResult tau_bound_product(double tau_a, double tau_b);
BoundResult tau_bound_fang(const DenseMatrix& a, const DenseMatrix& b, double tau_a, double tau_b);
BoundResult tau_bound_liu(const DenseMatrix& a, const DenseMatrix& b, double tau_a, double tau_b);
BoundResult tau_bound_offdiag(const DenseMatrix& a, const DenseMatrix& b, double tau_a, double tau_b);

// Lower bounds on tau(A o B^-1) for nonsingular M-matrices A, B.
BoundResult tau_hinv_classic(double tau_a, const DenseMatrix& binv);
BoundResult tau_hinv_huang(const DenseMatrix& a, const DenseMatrix& b, double rho_ja, double rho_jb);
BoundResult tau_hinv_li(const DenseMatrix& a, const DenseMatrix& b, const HinvOptions& opts = {});
BoundResult tau_hinv_chen(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& binv,
                          double rho_ja, double rho_jb);
BoundResult tau_hinv_chain(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& binv,
                           double tau_a, double tau_b, const HinvOptions& opts = {});

/// Lower bound on tau(A_1 * ... * A_m). taus_of_fan_powers[k] must be
/// tau(fan_power(A_k, P_k)).
BoundResult tau_multi_fan(std::span<const DenseMatrix> matrices, const HolderExponents& exponents,
                          std::span<const double> taus_of_fan_powers);

/// Membership of z in the union of Cassini ovals
/// |z - a_ii| |z - a_jj| <= C_i C_j, i != j, with C_i = sum_{k != i} |a_ki|
/// (deleted column sums), up to a rounding allowance of 64 eps times
/// (|z| + |a_ii| + C_i)(|z| + |a_jj| + C_j). Throws DomainError for order 1.
bool cassini_contains(const DenseMatrix& a, std::complex<double> z);

} // namespace mbound

#endif
