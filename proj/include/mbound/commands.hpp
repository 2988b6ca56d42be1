#ifndef MBOUND_COMMANDS_HPP
#define MBOUND_COMMANDS_HPP

#include "mbound/harness.hpp"
#include "mbound/matrix_io.hpp"
#include "mbound/report.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace mbound::cli {

// Process exit codes.
enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,     // numerical failure, or published value mismatch in `examples`
    exit_input = 2,       // unreadable or malformed input, bad option values
    exit_class_gate = 3,  // matrix not in the class the quantity requires
    exit_violation = 4,   // a bound on the wrong side of its oracle
};

int cmd_classify(const std::filesystem::path& file, ReportFormat format, std::ostream& out, std::ostream& err);

/// which: "rho" or "tau".
int cmd_spectral(const std::filesystem::path& file, std::string_view which, ReportFormat format,
                 const SpectralConfig& cfg, std::ostream& out, std::ostream& err);

struct BoundsOptions {
    Family family = Family::hadamard;
    /// Two files, or m >= 1 files for multi-fan.
    std::vector<std::filesystem::path> files;
    ReportFormat format = ReportFormat::table;
    EvalOptions eval;
    /// multi-fan only; defaults to all ones.
    std::optional<HolderExponents> exponents;
    /// Also exit 4 when an invariant check fails.
    bool strict = false;
};
int cmd_bounds(const BoundsOptions& opts, std::ostream& out, std::ostream& err);

struct VerifyOptions {
    Family family = Family::hadamard;
    SuiteConfig suite;
    std::optional<std::size_t> m;
    std::optional<HolderExponents> exponents;
    ReportFormat format = ReportFormat::table;
    bool summary_only = false;
    bool strict = false;
};
int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);

enum class ProductKind { hadamard, fan, fan_power, inverse };
struct ProductOptions {
    ProductKind kind = ProductKind::fan;
    std::vector<std::filesystem::path> files;
    int power = 2;
    MatrixFormat output = MatrixFormat::text;
};
int cmd_product(const ProductOptions& opts, std::ostream& out, std::ostream& err);

/// One published figure compared with the computed value.
struct GoldenRow {
    std::string example;
    std::string quantity;
    double published = 0.0;
    double computed = 0.0;
    double tolerance = 0.0;
    bool matches() const noexcept;
};

struct ExamplesOptions {
    std::filesystem::path fixture_dir;
    double tol_chain = 5e-3;
    double tol_spectral = 5e-4;
    EvalOptions eval;
};

/// Evaluates the example pairs stored in fixture_dir (ex21_*, ex31_*,
/// ex41_*) and lines them up with the published figures. Extra rows named
/// "tau_hinv_chain[proof]" and "tau_hinv_chain[statement]" record both
/// deficit variants.
std::vector<GoldenRow> compare_published(const ExamplesOptions& opts);

int cmd_examples(const ExamplesOptions& opts, ReportFormat format, std::ostream& out, std::ostream& err);

/// Decimal unsigned 64-bit seed; nullopt for anything else.
std::optional<std::uint64_t> parse_seed(std::string_view text) noexcept;

} // namespace mbound::cli

#endif
