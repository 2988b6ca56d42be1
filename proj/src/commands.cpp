#include "mbound/commands.hpp"

#include "mbound/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>

namespace mbound::cli {

namespace {

using ojson = nlohmann::ordered_json;

class InputError : public Error {
public:
    explicit InputError(const std::string& msg) : Error(msg) {}
};

DenseMatrix load(const std::filesystem::path& p)
{
    try {
        return read_matrix_file(p);
    } catch (const ParseError& e) {
        throw InputError(p.string() + ": " + e.what());
    }
}

template <class F>
int guarded(std::ostream& err, F&& body)
{
    try {
        return body();
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return exit_input;
    } catch (const ParseError& e) {
        err << "input error: " << e.what() << '\n';
        return exit_input;
    } catch (const DimensionError& e) {
        err << "input error: " << e.what() << '\n';
        return exit_input;
    } catch (const DomainError& e) {
        err << "input error: " << e.what() << '\n';
        return exit_input;
    } catch (const ClassError& e) {
        err << "class gate: " << e.what() << '\n';
        return exit_class_gate;
    } catch (const SingularError& e) {
        err << "class gate: " << e.what() << '\n';
        return exit_class_gate;
    } catch (const ConvergenceError& e) {
        err << "numerical failure: " << e.what() << " (best estimate " << e.best_estimate() << ")\n";
        return exit_failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// key/value pairs in the requested format
void write_pairs(std::ostream& out, const std::vector<std::pair<std::string, ojson>>& kv, ReportFormat format)
{
    if (format == ReportFormat::jsonl) {
        ojson j = ojson::object();
        for (const auto& [k, v] : kv) j[k] = v;
        out << j.dump() << '\n';
        return;
    }
    if (format == ReportFormat::tsv) out << "key\tvalue\n";
    for (const auto& [k, v] : kv) {
        const std::string text = v.is_string() ? v.get<std::string>()
                                 : v.is_number_float() ? num(v.get<double>())
                                                       : v.dump();
        out << k << (format == ReportFormat::tsv ? "\t" : ": ") << text << '\n';
    }
}

TrialReport evaluate(Family f, const std::vector<DenseMatrix>& mats, const EvalOptions& eval,
                     const std::optional<HolderExponents>& exponents)
{
    switch (f) {
    case Family::hadamard: return evaluate_hadamard(mats[0], mats[1], eval);
    case Family::fan: return evaluate_fan(mats[0], mats[1], eval);
    case Family::hadamard_inverse: return evaluate_hadamard_inverse(mats[0], mats[1], eval);
    case Family::multi_fan: {
        const HolderExponents p = exponents ? *exponents : HolderExponents(std::vector<int>(mats.size(), 1));
        return evaluate_multi_fan(mats, p, eval);
    }
    }
    throw DomainError("unknown family");
}

std::vector<DenseMatrix> load_all(const std::vector<std::filesystem::path>& files)
{
    std::vector<DenseMatrix> mats;
    for (const auto& f : files) mats.push_back(load(f));
    return mats;
}

} // namespace

std::optional<std::uint64_t> parse_seed(std::string_view text) noexcept
{
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return v;
}

int cmd_classify(const std::filesystem::path& file, ReportFormat format, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const DenseMatrix a = load(file);
        const MatrixClassification c = classify(a);
        write_pairs(out,
                    {{"order", a.order()},
                     {"nonnegative", c.nonnegative},
                     {"z_matrix", c.z_matrix},
                     {"nonsingular_m_matrix", c.nonsingular_m_matrix},
                     {"irreducible", c.irreducible},
                     {"strictly_row_dd", c.strictly_row_dd}},
                    format);
        return int{exit_ok};
    });
}

int cmd_spectral(const std::filesystem::path& file, std::string_view which, ReportFormat format,
                 const SpectralConfig& cfg, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        if (which != "rho" && which != "tau") throw InputError("quantity must be rho or tau");
        const DenseMatrix a = load(file);
        if (which == "tau" && !is_z_matrix(a)) throw ClassError("tau requires a nonsingular M-matrix; not a Z-matrix");
        const SpectralResult r = which == "rho" ? rho_nonnegative(a, cfg) : tau_m_matrix(a, cfg);
        std::vector<std::pair<std::string, ojson>> kv{{"quantity", std::string(which)},
                                                      {"value", r.value},
                                                      {"iterations", r.iterations},
                                                      {"residual", r.residual}};
        if (r.eigenvector) kv.emplace_back("eigenvector", *r.eigenvector);
        write_pairs(out, kv, format);
        return int{exit_ok};
    });
}

int cmd_bounds(const BoundsOptions& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const std::size_t need = opts.family == Family::multi_fan ? 0 : 2;
        if (need ? opts.files.size() != need : opts.files.empty())
            throw InputError(need ? "family needs exactly two matrix files" : "multi-fan needs at least one matrix file");
        if (opts.exponents && opts.exponents->size() != opts.files.size())
            throw InputError("number of exponents must equal the number of matrices");
        const auto mats = load_all(opts.files);
        const TrialReport r = evaluate(opts.family, mats, opts.eval, opts.exponents);
        const TrialReport one[] = {r};
        write_trials(out, one, opts.format);
        if (!r.violations.empty()) {
            for (const auto& v : r.violations) err << "violation: " << v << '\n';
            return int{exit_violation};
        }
        if (opts.strict && !r.checks_passed()) return int{exit_violation};
        return int{exit_ok};
    });
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        std::vector<TrialReport> reports;
        switch (opts.family) {
        case Family::hadamard: reports = run_hadamard_suite(opts.suite); break;
        case Family::fan: reports = run_fan_suite(opts.suite); break;
        case Family::hadamard_inverse: reports = run_hinv_suite(opts.suite); break;
        case Family::multi_fan: {
            std::size_t m = opts.m.value_or(opts.exponents ? opts.exponents->size() : 2);
            const HolderExponents p = opts.exponents ? *opts.exponents : HolderExponents(std::vector<int>(m, 1));
            if (p.size() != m) throw InputError("--m disagrees with the number of exponents in --p");
            reports = run_multi_fan_suite(opts.suite, m, p);
            break;
        }
        }
        if (!opts.summary_only) write_trials(out, reports, opts.format);
        const SuiteSummary s = summarize(reports);
        write_summary(out, s, opts.format);
        if (s.violations || s.errors) return int{exit_violation};
        if (opts.strict && s.check_failures) return int{exit_violation};
        return int{exit_ok};
    });
}

int cmd_product(const ProductOptions& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const bool binary = opts.kind == ProductKind::hadamard || opts.kind == ProductKind::fan;
        if (binary && opts.files.size() != 2) throw InputError("product needs exactly two matrix files");
        if (!binary && opts.files.size() != 1) throw InputError("this operation takes one matrix file");
        const auto mats = load_all(opts.files);
        DenseMatrix result = mats[0];
        switch (opts.kind) {
        case ProductKind::hadamard: result = hadamard(mats[0], mats[1]); break;
        case ProductKind::fan: result = fan_product(mats[0], mats[1]); break;
        case ProductKind::fan_power: result = fan_power(mats[0], opts.power); break;
        case ProductKind::inverse: result = inverse(mats[0]); break;
        }
        out << format_matrix(result, opts.output);
        return int{exit_ok};
    });
}

bool GoldenRow::matches() const noexcept
{
    return std::abs(computed - published) <= tolerance;
}

std::vector<GoldenRow> compare_published(const ExamplesOptions& opts)
{
    struct Figure {
        const char* quantity;
        double value;
    };
    struct Example {
        const char* name;
        Family family;
        const char* stem;
        std::vector<Figure> figures;
    };
    const std::vector<Example> examples{
        {"2.1", Family::hadamard, "ex21",
         {{"oracle", 5.7339}, {"rho_product", 22.9336}, {"rho_fang", 17.1017}, {"rho_liu", 11.6478},
          {"rho_offdiag", 8.1897}}},
        {"3.1", Family::fan, "ex31",
         {{"oracle", 0.8819}, {"tau_product", 0.1854}, {"tau_fang", 0.6980}, {"tau_liu", 0.7655},
          {"tau_offdiag", 0.8002}}},
        {"4.1", Family::hadamard_inverse, "ex41",
         {{"oracle", 0.2148}, {"tau_hinv_classic", 0.07}, {"tau_hinv_huang", 0.0707}, {"tau_hinv_li", 0.08},
          {"tau_hinv_chen", 0.1524}, {"tau_hinv_chain", 0.1929}}},
    };

    std::vector<GoldenRow> rows;
    for (const auto& ex : examples) {
        const std::vector<DenseMatrix> mats{load(opts.fixture_dir / (std::string(ex.stem) + "_a.txt")),
                                            load(opts.fixture_dir / (std::string(ex.stem) + "_b.txt"))};
        const TrialReport r = evaluate(ex.family, mats, opts.eval, std::nullopt);
        for (const auto& f : ex.figures) {
            const bool oracle = std::string_view(f.quantity) == "oracle";
            const double computed = oracle ? r.oracle : r.bound(f.quantity)->value;
            rows.push_back({ex.name, f.quantity, f.value, computed, oracle ? opts.tol_spectral : opts.tol_chain});
        }
        if (ex.family == Family::fan) {
            const std::vector<DenseMatrix> pair{mats[0], mats[1]};
            const TrialReport mf = evaluate_multi_fan(pair, HolderExponents({1, 1}), opts.eval);
            rows.push_back({ex.name, "tau_multi_fan[1,1]", 0.6980, mf.bounds.front().value, opts.tol_chain});
        }
        if (ex.family == Family::hadamard_inverse) {
            const DenseMatrix& a = mats[0];
            const DenseMatrix& b = mats[1];
            const DenseMatrix binv = m_matrix_inverse(b);
            const double tau_a = tau_m_matrix(a, opts.eval.spectral).value;
            const double tau_b = tau_m_matrix(b, opts.eval.spectral).value;
            for (const auto& [label, factor] : {std::pair{"proof", DeficitFactor::same_matrix},
                                                std::pair{"statement", DeficitFactor::mixed}}) {
                HinvOptions h = opts.eval.hinv;
                h.factor = factor;
                const double v = tau_hinv_chain(a, b, binv, tau_a, tau_b, h).value;
                rows.push_back({ex.name, std::string("tau_hinv_chain[") + label + "]", 0.1929, v, opts.tol_chain});
            }
        }
    }
    return rows;
}

int cmd_examples(const ExamplesOptions& opts, ReportFormat format, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const auto rows = compare_published(opts);
        bool all = true;
        if (format == ReportFormat::tsv) out << "example\tquantity\tpublished\tcomputed\tdifference\ttolerance\tstatus\n";
        for (const auto& r : rows) {
            all = all && r.matches();
            const double diff = r.computed - r.published;
            if (format == ReportFormat::jsonl) {
                ojson j{{"example", r.example}, {"quantity", r.quantity}, {"published", r.published},
                        {"computed", r.computed}, {"difference", diff}, {"tolerance", r.tolerance},
                        {"matches", r.matches()}};
                out << j.dump() << '\n';
            } else if (format == ReportFormat::tsv) {
                out << r.example << '\t' << r.quantity << '\t' << num(r.published) << '\t' << num(r.computed) << '\t'
                    << num(diff) << '\t' << r.tolerance << '\t' << (r.matches() ? "match" : "MISMATCH") << '\n';
            } else {
                char line[160];
                std::snprintf(line, sizeof line, "%-5s %-28s published %-9.6g computed %-12.8g diff %+.2e  %s\n",
                              r.example.c_str(), r.quantity.c_str(), r.published, r.computed, diff,
                              r.matches() ? "match" : "MISMATCH");
                out << line;
            }
        }
        return all ? int{exit_ok} : int{exit_failure};
    });
}

} // namespace mbound::cli
