// Acceptance driver: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "mbound/commands.hpp"
#include "mbound/error.hpp"
#include "oracle.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace mbound;
using namespace mbound::cli;
using json = nlohmann::json;

namespace {

const std::filesystem::path fixtures = MBOUND_FIXTURE_DIR;
constexpr std::uint64_t suite_seed = 20240601;
int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void verdict(int n, bool pass, const std::string& detail)
{
    std::printf("criterion %d %s: %s\n", n, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

json run_bounds(Family fam, const std::string& stem, const HinvOptions& h = {})
{
    BoundsOptions o;
    o.family = fam;
    o.files = {fixtures / (stem + "_a.txt"), fixtures / (stem + "_b.txt")};
    o.format = ReportFormat::jsonl;
    o.eval.hinv = h;
    std::ostringstream out, err;
    const int code = cmd_bounds(o, out, err);
    if (code != exit_ok) throw std::runtime_error("cmd_bounds exited " + std::to_string(code) + ": " + err.str());
    return json::parse(out.str());
}

double bound_value(const json& j, const std::string& name)
{
    for (const auto& b : j["bounds"])
        if (b["name"] == name) return b["value"].get<double>();
    throw std::runtime_error("missing bound " + name);
}

struct Figure {
    std::string name;
    double published;
};

void example(int n, Family fam, const std::string& stem, double oracle, const std::vector<Figure>& figs)
{
    try {
        const auto t0 = std::chrono::steady_clock::now();
        const json j = run_bounds(fam, stem);
        const double secs = seconds_since(t0);
        const double o = j["oracle"]["value"].get<double>();
        bool pass = std::abs(o - oracle) <= 5e-4 && secs < 1.0;
        std::string detail = fmt("oracle %.4f (published %.4f)", o, oracle);
        for (const auto& f : figs) {
            const double v = bound_value(j, f.name);
            const bool ok = std::abs(v - f.published) <= 5e-3;
            pass = pass && ok;
            detail += "; " + f.name + fmt(" %.4f (published %.4f)", v, f.published) + (ok ? "" : " MISMATCH");
        }
        detail += fmt("; %.3f s", secs);
        if (fam == Family::hadamard_inverse) {
            HinvOptions stmt;
            stmt.factor = DeficitFactor::mixed;
            const double proof = bound_value(j, "tau_hinv_chain");
            const double closed = bound_value(run_bounds(fam, stem, stmt), "tau_hinv_chain");
            const auto near = [](double v) { return std::abs(v - 0.1929) <= 5e-3; };
            detail += fmt("; chain variant same-matrix deficits %.4f, mixed deficits %.4f", proof, closed);
            detail += std::string("; matching 0.1929: ")
                      + (near(proof) && near(closed) ? "both"
                         : near(proof)               ? "same-matrix (default)"
                         : near(closed)              ? "mixed"
                                                     : "neither");
        }
        verdict(n, pass, detail);
    } catch (const std::exception& e) {
        verdict(n, false, std::string("exception: ") + e.what());
    }
}

struct SuiteRun {
    std::string label;
    std::vector<TrialReport> trials;
    SuiteSummary summary;
};

SuiteConfig base_config(std::size_t trials, std::uint64_t seed)
{
    SuiteConfig c;
    c.trials = trials;
    c.order_min = 2;
    c.order_max = 8;
    c.seed = seed;
    c.with_reference_examples = true;
    return c;
}

// Runs through cmd_verify (jsonl) for the summary and exit code, and keeps the
// in-process trials for the per-trial criteria.
SuiteRun run_suite(const std::string& label, Family fam, std::size_t trials, std::uint64_t seed,
                   std::optional<HolderExponents> p = std::nullopt, int* exit_code = nullptr)
{
    SuiteRun r{label, {}, {}};
    const SuiteConfig c = base_config(trials, seed);
    switch (fam) {
    case Family::hadamard: r.trials = run_hadamard_suite(c); break;
    case Family::fan: r.trials = run_fan_suite(c); break;
    case Family::hadamard_inverse: r.trials = run_hinv_suite(c); break;
    case Family::multi_fan: r.trials = run_multi_fan_suite(c, p->size(), *p); break;
    }
    r.summary = summarize(r.trials);
    if (exit_code) {
        VerifyOptions v;
        v.family = fam;
        v.suite = c;
        v.exponents = p;
        if (p) v.m = p->size();
        v.format = ReportFormat::jsonl;
        v.summary_only = true;
        std::ostringstream out, err;
        *exit_code = cmd_verify(v, out, err);
    }
    return r;
}

DenseMatrix random_nonnegative(std::uint64_t seed, std::size_t n, double density = 0.6)
{
    GeneratorSpec g;
    g.order = n;
    g.seed = seed;
    g.density = density;
    return gen_nonnegative(g);
}

DenseMatrix random_m_matrix(std::uint64_t seed, std::size_t n, double margin = 0.2)
{
    GeneratorSpec g;
    g.kind = MatrixKind::m_matrix;
    g.order = n;
    g.seed = seed;
    g.margin = margin;
    return gen_m_matrix(g);
}

std::size_t order_for(std::uint64_t s, std::size_t lo, std::size_t hi)
{
    return lo + static_cast<std::size_t>(s % (hi - lo + 1));
}

} // namespace

int main()
{
    const auto total0 = std::chrono::steady_clock::now();

    example(1, Family::hadamard, "ex21", 5.7339,
            {{"rho_product", 22.9336}, {"rho_fang", 17.1017}, {"rho_liu", 11.6478}, {"rho_offdiag", 8.1897}});
    example(2, Family::fan, "ex31", 0.8819,
            {{"tau_product", 0.1854}, {"tau_fang", 0.6980}, {"tau_liu", 0.7655}, {"tau_offdiag", 0.8002}});
    example(3, Family::hadamard_inverse, "ex41", 0.2148,
            {{"tau_hinv_classic", 0.07},
             {"tau_hinv_huang", 0.0707},
             {"tau_hinv_li", 0.08},
             {"tau_hinv_chen", 0.1524},
             {"tau_hinv_chain", 0.1929}});

    // Criterion 4: direction violations over the property suites.
    std::vector<SuiteRun> suites;
    {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool pass = true;
        const auto add = [&](SuiteRun run, int code) {
            const auto& s = run.summary;
            pass = pass && s.violations == 0 && s.errors == 0 && code == exit_ok;
            detail += run.label + fmt(" %.0f trials, %.0f violations, %.0f errors", double(s.trials),
                                      double(s.violations), double(s.errors))
                      + "; ";
            suites.push_back(std::move(run));
        };
        int code = 0;
        auto r = run_suite("hadamard", Family::hadamard, 1000, suite_seed, std::nullopt, &code);
        add(std::move(r), code);
        r = run_suite("fan", Family::fan, 1000, suite_seed, std::nullopt, &code);
        add(std::move(r), code);
        r = run_suite("hadamard-inverse", Family::hadamard_inverse, 500, suite_seed, std::nullopt, &code);
        add(std::move(r), code);
        for (const char* p : {"1", "1,1", "2,2", "1,2", "3,3,3"}) {
            r = run_suite(std::string("multi-fan P=(") + p + ")", Family::multi_fan, 200, suite_seed,
                          HolderExponents::parse(p), &code);
            add(std::move(r), code);
        }
        const double secs = seconds_since(t0);
        pass = pass && secs < 60.0;
        verdict(4, pass, detail + fmt("%.2f s (each suite run twice: in process and through verify)", secs));
    }

    // Criterion 5: conditional dominance, regenerating with new seeds if no
    // trial met the hypothesis.
    {
        std::string detail;
        bool pass = true;
        for (Family fam : {Family::hadamard, Family::fan}) {
            SuiteRun run = fam == Family::hadamard ? suites[0] : suites[1];
            std::uint64_t seed = suite_seed;
            for (int attempt = 0; run.summary.dominance_hypothesis_count == 0 && attempt < 20; ++attempt)
                run = run_suite(std::string(to_string(fam)), fam, 1000, ++seed);
            const auto& s = run.summary;
            pass = pass && s.dominance_hypothesis_count >= 1 && s.dominance_failures == 0;
            detail += std::string(to_string(fam))
                      + fmt(": hypothesis held in %.0f trials, ordering failed in %.0f (seed %.0f); ",
                            double(s.dominance_hypothesis_count), double(s.dominance_failures), double(seed));
        }
        verdict(5, pass, detail);
    }

    // Criterion 6: reduction identities of the multi-matrix bound.
    {
        double worst_pair = 0.0, worst_single = 0.0;
        for (std::uint64_t t = 0; t < 100; ++t) {
            const std::uint64_t s = derive_seed(6, t);
            const std::size_t n = order_for(s, 2, 8);
            const DenseMatrix a = random_m_matrix(derive_seed(s, 1), n);
            const DenseMatrix b = random_m_matrix(derive_seed(s, 2), n);
            const std::vector<DenseMatrix> pair{a, b};
            const double taus[] = {tau_m_matrix(a).value, tau_m_matrix(b).value};
            const double multi = tau_multi_fan(pair, HolderExponents({1, 1}), taus).value;
            const double fang = tau_bound_fang(a, b, taus[0], taus[1]).value;
            worst_pair = std::max(worst_pair, std::abs(multi - fang));
            const std::vector<DenseMatrix> one{a};
            const double single = tau_multi_fan(one, HolderExponents({1}), std::span(taus, 1)).value;
            worst_single = std::max(worst_single, std::abs(single - taus[0]));
        }
        verdict(6, worst_pair <= 1e-12 && worst_single <= 1e-12,
                fmt("max |multi(1,1) - pairwise| = %.2e over 100 pairs; max |multi(1) - tau| = %.2e", worst_pair,
                    worst_single));
    }

    // Criterion 7: spectral routines against the characteristic polynomial.
    {
        double worst_rho = 0.0, worst_dual = 0.0;
        for (std::uint64_t t = 0; t < 200; ++t) {
            const std::uint64_t s = derive_seed(7, t);
            const DenseMatrix a = random_nonnegative(derive_seed(s, 1), order_for(s, 1, 5), 0.3 + 0.7 * (t % 4) / 3.0);
            const double got = rho_nonnegative(a).value;
            for (double want : {oracle::max_real_eigenvalue(a), oracle::perron_root(a)})
                worst_rho = std::max(worst_rho, std::abs(got - want) / std::max(1.0, want));

            const DenseMatrix m = random_m_matrix(derive_seed(s, 2), order_for(s >> 8, 1, 8));
            const double tau = tau_m_matrix(m).value;
            DenseMatrix inv = oracle::inverse(m);
            for (std::size_t i = 0; i < inv.order(); ++i)
                for (std::size_t j = 0; j < inv.order(); ++j) inv(i, j) = std::max(inv(i, j), 0.0); // rounding noise
            const double rho_inv = rho_nonnegative(inv).value;
            const double tau_bisect = oracle::z_matrix_min_eigenvalue(m);
            worst_dual = std::max({worst_dual, std::abs(tau * rho_inv - 1.0),
                                   std::abs(tau - tau_bisect) / std::max(1.0, tau_bisect)});
        }
        verdict(7, worst_rho <= 1e-6 && worst_dual <= 1e-8,
                fmt("max rho error vs characteristic polynomial and minor bisection %.2e (tol 1e-6); "
                    "max error of tau * rho(inverse) = 1 and of tau vs minor bisection %.2e (tol 1e-8)",
                    worst_rho, worst_dual));
    }

    // Criterion 8: structural properties.
    {
        std::size_t product_ok = 0, l44_printed = 0, l44_column = 0, cassini = 0;
        double excess_printed = 0.0, excess_column = 0.0;
        for (std::uint64_t t = 0; t < 500; ++t) {
            const std::uint64_t s = derive_seed(43, t);
            const std::size_t n = order_for(s, 2, 8);
            product_ok += hadamard_inverse_m_matrix_check(random_m_matrix(derive_seed(s, 1), n), random_m_matrix(derive_seed(s, 2), n));
        }
        for (std::uint64_t t = 0; t < 200; ++t) {
            const std::uint64_t s = derive_seed(44, t);
            GeneratorSpec g;
            g.kind = MatrixKind::m_matrix;
            g.order = order_for(s, 2, 8);
            g.seed = derive_seed(s, 1);
            g.margin = 0.05 + 0.5 * (t % 5) / 4.0;
            const DenseMatrix b = gen_row_dominant_m_matrix(g);
            const auto printed = inverse_entry_bound_check(b, ChainForm::summand_column);
            const auto column = inverse_entry_bound_check(b, ChainForm::column_ratio);
            l44_printed += printed.holds;
            l44_column += column.holds;
            excess_printed = std::max(excess_printed, printed.max_excess);
            excess_column = std::max(excess_column, column.max_excess);
        }
        for (std::uint64_t t = 0; t < 200; ++t) {
            const std::uint64_t s = derive_seed(23, t);
            const DenseMatrix a = random_nonnegative(derive_seed(s, 1), order_for(s, 2, 6));
            cassini += cassini_contains(a, {oracle::perron_root(a), 0.0});
        }
        const bool pass = product_ok == 500 && l44_printed == 200 && cassini == 200;
        verdict(8, pass,
                fmt("product of M-matrix with inverse is an M-matrix on %.0f/500 pairs; ", double(product_ok))
                    + fmt("inverse entry bound (inner weight r_k) holds on %.0f/200, max excess %.3e; ",
                          double(l44_printed), excess_printed)
                    + fmt("[info] with inner weight r_i it holds on %.0f/200, max excess %.3e; ", double(l44_column),
                          excess_column)
                    + fmt("Perron root inside the Cassini ovals on %.0f/200", double(cassini)));
    }

    // Criterion 9: determinant chains on every suite trial.
    {
        std::string detail;
        bool pass = true;
        for (std::size_t k : {std::size_t{0}, std::size_t{1}}) {
            const SuiteRun& run = suites[k];
            std::map<std::string, std::size_t> failed;
            std::size_t negative_bound_even_n = 0, evaluated = 0;
            for (const auto& t : run.trials) {
                if (t.error) continue;
                ++evaluated;
                bool any = false;
                for (const auto& c : t.checks)
                    if (c.name != "perron_anchor" && !c.passed) {
                        ++failed[c.name];
                        any = true;
                    }
                if (any && k == 1) {
                    const auto* off = t.bound("tau_offdiag");
                    if (off && off->value < 0.0 && t.order % 2 == 0) ++negative_bound_even_n;
                }
            }
            std::size_t total = 0;
            for (const auto& [name, count] : failed) total += count;
            pass = pass && total == 0;
            detail += run.label + fmt(": chain held on %.0f/%.0f trials", double(evaluated - total), double(evaluated));
            for (const auto& [name, count] : failed) detail += ", " + name + fmt(" failed %.0f", double(count));
            if (k == 1 && negative_bound_even_n)
                detail += fmt(" (%.0f of %.0f have a negative bound and even order, where the power reverses the inequality)",
                              double(negative_bound_even_n), double(total));
            detail += "; ";
        }
        verdict(9, pass, detail);
    }

    std::printf("total %.2f s, %d criteria failed\n", seconds_since(total0), failures);
    return failures == 0 ? 0 : 1;
}
