#include "mbound/report.hpp"

#include <json.hpp>

#include <cstdio>
#include <iomanip>
#include <vector>

namespace mbound {

namespace {

using ojson = nlohmann::ordered_json;

std::string num(double v, const char* fmt = "%.10g")
{
    char buf[40];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

struct Row {
    std::string kind, name, direction, value, slack, status;
};

std::vector<Row> rows_of(const TrialReport& r)
{
    std::vector<Row> rows;
    if (r.error) {
        rows.push_back({"error", *r.error, "", "", "", "ERROR"});
        return rows;
    }
    rows.push_back({"oracle", r.oracle_name, "", num(r.oracle), "", ""});
    for (const auto& b : r.bounds) {
        const bool bad = std::ranges::find(r.violations, b.name) != r.violations.end();
        rows.push_back({"bound", b.name, std::string(to_string(b.direction)), num(b.value),
                        b.slack ? num(*b.slack, "%.3e") : "", bad ? "VIOLATION" : "ok"});
    }
    for (const auto& c : r.checks)
        rows.push_back({"check", c.name, "", num(c.value, "%.3e"), "", c.passed ? "ok" : "FAIL"});
    if (r.dominance_hypothesis) {
        std::string status = "hypothesis not met";
        if (*r.dominance_hypothesis) status = r.dominance_holds.value_or(false) ? "ok" : "VIOLATION";
        rows.push_back({"dominance", *r.dominance_hypothesis ? "hypothesis held" : "hypothesis not met", "", "",
                        "", status});
    }
    return rows;
}

} // namespace

std::optional<ReportFormat> parse_report_format(std::string_view name) noexcept
{
    if (name == "table") return ReportFormat::table;
    if (name == "tsv") return ReportFormat::tsv;
    if (name == "jsonl") return ReportFormat::jsonl;
    return std::nullopt;
}

std::string trial_json(const TrialReport& r)
{
    ojson j;
    j["trial"] = r.trial;
    j["family"] = std::string(to_string(r.family));
    j["order"] = r.order;
    j["reference_example"] = r.reference_example;
    j["digests"] = r.digests;
    if (r.error) {
        j["error"] = *r.error;
        j["ok"] = false;
        return j.dump();
    }
    j["oracle"] = {{"name", r.oracle_name}, {"value", r.oracle}};
    ojson bounds = ojson::array();
    for (const auto& b : r.bounds) {
        ojson jb;
        jb["name"] = b.name;
        jb["direction"] = std::string(to_string(b.direction));
        jb["value"] = b.value;
        jb["slack"] = b.slack ? ojson(*b.slack) : ojson(nullptr);
        ojson comps = ojson::object();
        for (const auto& [k, v] : b.components) comps[k] = v;
        jb["components"] = comps;
        jb["notes"] = b.notes;
        bounds.push_back(jb);
    }
    j["bounds"] = bounds;
    ojson checks = ojson::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}});
    j["checks"] = checks;
    j["dominance_hypothesis"] = r.dominance_hypothesis ? ojson(*r.dominance_hypothesis) : ojson(nullptr);
    j["dominance_holds"] = r.dominance_holds ? ojson(*r.dominance_holds) : ojson(nullptr);
    j["violations"] = r.violations;
    j["ok"] = r.ok();
    return j.dump();
}

void write_trials(std::ostream& out, std::span<const TrialReport> reports, ReportFormat format)
{
    switch (format) {
    case ReportFormat::jsonl:
        for (const auto& r : reports) out << trial_json(r) << '\n';
        return;
    case ReportFormat::tsv:
        out << "trial\tfamily\torder\tkind\tname\tdirection\tvalue\tslack\tstatus\n";
        for (const auto& r : reports)
            for (const auto& row : rows_of(r))
                out << r.trial << '\t' << to_string(r.family) << '\t' << r.order << '\t' << row.kind << '\t'
                    << row.name << '\t' << row.direction << '\t' << row.value << '\t' << row.slack << '\t'
                    << row.status << '\n';
        return;
    case ReportFormat::table:
        for (const auto& r : reports) {
            out << "trial " << r.trial << "  " << to_string(r.family) << "  n=" << r.order;
            if (r.reference_example) out << "  (reference example)";
            out << '\n';
            for (const auto& row : rows_of(r)) {
                out << "  " << std::left << std::setw(10) << row.kind << std::setw(22) << row.name << std::setw(7)
                    << row.direction << std::right << std::setw(18) << row.value << std::setw(12) << row.slack
                    << "  " << row.status << '\n';
            }
        }
        return;
    }
}

void write_summary(std::ostream& out, const SuiteSummary& s, ReportFormat format)
{
    if (format == ReportFormat::jsonl) {
        ojson failed = ojson::object();
        for (const auto& [name, count] : s.failed_checks) failed[name] = count;
        ojson j;
        j["summary"] = {{"trials", s.trials},
                        {"violations", s.violations},
                        {"errors", s.errors},
                        {"check_failures", s.check_failures},
                        {"failed_checks", failed},
                        {"dominance_hypothesis_held", s.dominance_hypothesis_count},
                        {"dominance_failures", s.dominance_failures},
                        {"max_slack", s.max_slack},
                        {"min_slack", s.min_slack}};
        out << j.dump() << '\n';
        return;
    }
    const std::string p = format == ReportFormat::tsv ? "# " : "";
    out << p << "trials: " << s.trials << '\n';
    out << p << "violations: " << s.violations << '\n';
    out << p << "errors: " << s.errors << '\n';
    out << p << "check failures: " << s.check_failures;
    if (!s.failed_checks.empty()) {
        out << " (";
        for (std::size_t k = 0; k < s.failed_checks.size(); ++k)
            out << (k ? ", " : "") << s.failed_checks[k].first << " x" << s.failed_checks[k].second;
        out << ')';
    }
    out << '\n';
    out << p << "dominance hypothesis held: " << s.dominance_hypothesis_count
        << " (failures: " << s.dominance_failures << ")\n";
    out << p << "max slack: " << num(s.max_slack, "%.6e") << '\n';
    out << p << "min slack: " << num(s.min_slack, "%.6e") << '\n';
}

} // namespace mbound
