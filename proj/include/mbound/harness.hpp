#ifndef MBOUND_HARNESS_HPP
#define MBOUND_HARNESS_HPP

#include "mbound/bounds.hpp"
#include "mbound/matrix.hpp"
#include "mbound/spectral.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mbound {

enum class MatrixKind { nonnegative, m_matrix };

struct GeneratorSpec {
    MatrixKind kind = MatrixKind::nonnegative;
    std::size_t order = 4;
    double density = 0.6;
    std::uint64_t seed = 0;
    double margin = 0.2;

    /// Throws DomainError unless 1 <= order <= 12, 0 < density <= 1, margin > 0.
    void validate() const;
};

/// Entries uniform in (0, 1], each kept with probability `density`.
/// Deterministic in the seed on every platform.
DenseMatrix gen_nonnegative(const GeneratorSpec& spec);

/// alpha I - P with P = gen_nonnegative(spec) and alpha = rho(P)(1 + margin)
/// (alpha = margin when rho(P) = 0). Throws ClassError if the result does
/// not classify as a nonsingular M-matrix.
DenseMatrix gen_m_matrix(const GeneratorSpec& spec);

/// alpha I - P with alpha = (1 + margin) * max row sum of P, hence strictly
/// row diagonally dominant.
DenseMatrix gen_row_dominant_m_matrix(const GeneratorSpec& spec);

/// Order-preserving 64-bit mix used to derive per-trial seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

enum class Family { hadamard, fan, hadamard_inverse, multi_fan };

std::string_view to_string(Family f) noexcept;
std::optional<Family> parse_family(std::string_view name) noexcept;

/// A named invariant evaluated on one trial.
struct Check {
    std::string name;
    bool passed = true;
    double value = 0.0; // the quantity compared, for the report
};

struct TrialReport {
    std::size_t trial = 0;
    Family family = Family::hadamard;
    std::size_t order = 0;
    bool reference_example = false;
    std::vector<std::string> digests;
    std::string oracle_name;
    double oracle = 0.0;
    std::vector<BoundResult> bounds;
    std::vector<Check> checks;
    /// Whether the pair met the sufficient condition under which the
    /// off-diagonal bound improves on Liu's bound, and if so whether it did.
    std::optional<bool> dominance_hypothesis;
    std::optional<bool> dominance_holds;
    /// Names of every bound on the wrong side of the oracle, plus "dominance"
    /// when the dominance hypothesis held but the ordering did not.
    std::vector<std::string> violations;
    /// Set when the trial could not be evaluated.
    std::optional<std::string> error;

    bool checks_passed() const noexcept;
    bool ok() const noexcept { return violations.empty() && !error && checks_passed(); }
    const BoundResult* bound(std::string_view name) const noexcept;
};

struct EvalOptions {
    double tolerance = 1e-8;
    HinvOptions hinv;
    SpectralConfig spectral;
};

TrialReport evaluate_hadamard(const DenseMatrix& a, const DenseMatrix& b, const EvalOptions& opts = {});
TrialReport evaluate_fan(const DenseMatrix& a, const DenseMatrix& b, const EvalOptions& opts = {});
TrialReport evaluate_hadamard_inverse(const DenseMatrix& a, const DenseMatrix& b, const EvalOptions& opts = {});
TrialReport evaluate_multi_fan(std::span<const DenseMatrix> matrices, const HolderExponents& exponents,
                               const EvalOptions& opts = {});

struct SuiteConfig {
    std::size_t trials = 100;
    std::size_t order_min = 2;
    std::size_t order_max = 8;
    double density = 0.6;
    double margin = 0.2;
    std::uint64_t seed = 1;
    bool with_reference_examples = false;
    EvalOptions eval;
    /// Worker threads; 0 picks the hardware concurrency. Results do not
    /// depend on this value.
    unsigned threads = 0;
};

/// Random trials are numbered 1..trials; with reference examples enabled the
/// published example pair is trial 0.
std::vector<TrialReport> run_hadamard_suite(const SuiteConfig& cfg);
std::vector<TrialReport> run_fan_suite(const SuiteConfig& cfg);
std::vector<TrialReport> run_hinv_suite(const SuiteConfig& cfg);
std::vector<TrialReport> run_multi_fan_suite(const SuiteConfig& cfg, std::size_t m, const HolderExponents& exponents);

/// B o A^-1 classifies as a nonsingular M-matrix.
bool hadamard_inverse_m_matrix_check(const DenseMatrix& a, const DenseMatrix& b);

struct InverseBoundCheck {
    bool holds = true;
    double max_excess = 0.0; // max over j != i of beta_ji - s_ji beta_ii
};

/// Entrywise bound beta_ji <= s_ji beta_ii for B^-1 = (beta), s_ji from
/// aux_chain(b, form). b must be a strictly row dominant M-matrix.
InverseBoundCheck inverse_entry_bound_check(const DenseMatrix& b, ChainForm form, double tol = 1e-10);

struct SuiteSummary {
    std::size_t trials = 0;
    std::size_t violations = 0; // trials with at least one bound violation
    std::size_t errors = 0;
    std::size_t check_failures = 0; // trials with at least one failed check
    std::vector<std::pair<std::string, std::size_t>> failed_checks; // per check name, first-seen order
    std::size_t dominance_hypothesis_count = 0;
    std::size_t dominance_failures = 0;
    double max_slack = 0.0;
    double min_slack = 0.0;
};

SuiteSummary summarize(std::span<const TrialReport> reports);

/// The example matrices shipped under fixtures/.
struct ReferencePair {
    DenseMatrix a;
    DenseMatrix b;
};
ReferencePair reference_pair(Family f);

} // namespace mbound

#endif
