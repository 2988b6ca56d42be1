#ifndef MBOUND_REPORT_HPP
#define MBOUND_REPORT_HPP

#include "mbound/harness.hpp"

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

namespace mbound {

enum class ReportFormat { table, tsv, jsonl };

std::optional<ReportFormat> parse_report_format(std::string_view name) noexcept;

/// One self-contained JSON object, no trailing newline.
std::string trial_json(const TrialReport& r);

/// table: aligned columns with one row per oracle, bound and check.
/// tsv: header line, then the same rows tab separated.
/// jsonl: one trial_json object per line.
void write_trials(std::ostream& out, std::span<const TrialReport> reports, ReportFormat format);

/// Plain "key: value" lines; prefixed with "# " for tsv, a single
/// {"summary": {...}} object for jsonl. Always contains "violations: N".
void write_summary(std::ostream& out, const SuiteSummary& s, ReportFormat format);

} // namespace mbound

#endif
