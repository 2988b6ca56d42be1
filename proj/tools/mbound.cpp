#include "mbound/commands.hpp"
#include "mbound/error.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>

using namespace mbound;
using namespace mbound::cli;

namespace {

const std::map<std::string, ReportFormat> report_formats{
    {"table", ReportFormat::table}, {"tsv", ReportFormat::tsv}, {"jsonl", ReportFormat::jsonl}};

const std::map<std::string, Family> families{{"hadamard", Family::hadamard},
                                             {"fan", Family::fan},
                                             {"hadamard-inverse", Family::hadamard_inverse},
                                             {"multi-fan", Family::multi_fan}};

struct HinvFlags {
    std::string variant = "proof";
    std::string weights = "b-chain";
    std::string chain = "summand-column";
    std::string li_reduction = "row";

    void add(CLI::App* app)
    {
        app->add_option("--variant", variant, "Deficit factor of the chain bound")
            ->check(CLI::IsMember({"proof", "statement"}));
        app->add_option("--weights", weights, "Cross-term weights of the chain bound")
            ->check(CLI::IsMember({"b-chain", "a-offdiag"}));
        app->add_option("--chain", chain, "Inner weight of s_ji")->check(CLI::IsMember({"summand-column", "column-ratio"}));
        app->add_option("--li-reduction", li_reduction, "Reduction of s_ji in Li's bound")
            ->check(CLI::IsMember({"row", "column"}));
    }

    HinvOptions options() const
    {
        HinvOptions h;
        h.factor = variant == "proof" ? DeficitFactor::same_matrix : DeficitFactor::mixed;
        h.weights = weights == "b-chain" ? HinvWeights::b_chain : HinvWeights::a_offdiag_max;
        h.chain_form = chain == "summand-column" ? ChainForm::summand_column : ChainForm::column_ratio;
        h.li_reduction = li_reduction == "row" ? ChainReduction::by_row : ChainReduction::by_column;
        return h;
    }
};

std::optional<HolderExponents> exponents_from(const std::string& text)
{
    if (text.empty()) return std::nullopt;
    return HolderExponents::parse(text);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bounds for Hadamard and Fan products of nonnegative matrices and M-matrices"};
    app.require_subcommand(1);

    std::string format_name = "table";
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format_name, "Output format")->check(CLI::IsMember(report_formats));
    };

    // classify
    std::string classify_file;
    auto* classify = app.add_subcommand("classify", "Print the classification flags of a matrix");
    classify->add_option("file", classify_file)->required();
    add_format(classify);

    // spectral
    std::string spectral_which, spectral_file;
    SpectralConfig spectral_cfg;
    auto* spectral = app.add_subcommand("spectral", "Perron root (rho) or minimum M-matrix eigenvalue (tau)");
    spectral->add_option("quantity", spectral_which)->required()->check(CLI::IsMember({"rho", "tau"}));
    spectral->add_option("file", spectral_file)->required();
    spectral->add_option("--rel-tol", spectral_cfg.rel_tol, "Relative stopping tolerance");
    spectral->add_option("--max-iter", spectral_cfg.max_iter, "Iteration cap");
    add_format(spectral);

    // bounds
    BoundsOptions bounds_opts;
    std::vector<std::string> bounds_files;
    std::string bounds_p;
    HinvFlags bounds_hinv;
    auto* bounds = app.add_subcommand("bounds", "Evaluate every bound of a family against its oracle");
    std::string bounds_family;
    bounds->add_option("family", bounds_family)->required()->check(CLI::IsMember(families));
    bounds->add_option("files", bounds_files, "Matrix files (A B, or A_1 ... A_m for multi-fan)")->required();
    bounds->add_option("--p", bounds_p, "Hoelder exponents P1,P2,... (multi-fan)");
    bounds->add_option("--tol", bounds_opts.eval.tolerance, "Violation tolerance");
    bounds->add_flag("--strict", bounds_opts.strict, "Also exit 4 when an invariant check fails");
    bounds_hinv.add(bounds);
    add_format(bounds);

    // verify
    VerifyOptions verify_opts;
    std::size_t verify_m = 0, verify_order = 0;
    std::uint64_t verify_seed = 0;
    std::string verify_p;
    HinvFlags verify_hinv;
    auto* verify = app.add_subcommand("verify", "Run a randomized validity suite");
    std::string verify_family;
    verify->add_option("family", verify_family)->required()->check(CLI::IsMember(families));
    verify->add_option("--trials", verify_opts.suite.trials, "Random trials");
    auto* seed_opt = verify->add_option("--seed", verify_seed, "Base seed (fallback: MBOUND_SEED)");
    verify->add_option("--order-min", verify_opts.suite.order_min, "Smallest order");
    verify->add_option("--order-max", verify_opts.suite.order_max, "Largest order");
    auto* order_opt = verify->add_option("--order", verify_order, "Fixed order (sets min and max)");
    verify->add_option("--density", verify_opts.suite.density, "Probability an entry is nonzero");
    verify->add_option("--margin", verify_opts.suite.margin, "alpha = rho(P)(1 + margin)");
    verify->add_option("--m", verify_m, "Number of matrices (multi-fan)");
    verify->add_option("--p", verify_p, "Hoelder exponents P1,P2,... (multi-fan)");
    verify->add_flag("--with-reference-examples", verify_opts.suite.with_reference_examples,
                     "Evaluate the published example pair as trial 0");
    verify->add_option("--tol", verify_opts.suite.eval.tolerance, "Violation tolerance");
    verify->add_option("--threads", verify_opts.suite.threads, "Worker threads (0 = hardware)");
    verify->add_flag("--summary-only", verify_opts.summary_only, "Print only the summary");
    verify->add_flag("--strict", verify_opts.strict, "Also exit 4 when an invariant check fails");
    verify_hinv.add(verify);
    add_format(verify);

    // product
    ProductOptions product_opts;
    std::vector<std::string> product_files;
    std::string product_output = "text";
    const std::map<std::string, ProductKind> kinds{{"hadamard", ProductKind::hadamard},
                                                   {"fan", ProductKind::fan},
                                                   {"fan-power", ProductKind::fan_power},
                                                   {"inverse", ProductKind::inverse}};
    auto* product = app.add_subcommand("product", "Write a Hadamard/Fan product, Fan power or inverse");
    std::string product_kind;
    product->add_option("kind", product_kind)->required()->check(CLI::IsMember(kinds));
    product->add_option("files", product_files)->required();
    product->add_option("--power", product_opts.power, "Exponent for fan-power");
    product->add_option("--output", product_output, "Matrix format")->check(CLI::IsMember({"text", "json"}));

    // examples
    ExamplesOptions examples_opts;
    examples_opts.fixture_dir = MBOUND_FIXTURE_DIR;
    std::string fixture_dir = MBOUND_FIXTURE_DIR;
    HinvFlags examples_hinv;
    auto* examples = app.add_subcommand("examples", "Compare the shipped example pairs with the published figures");
    examples->add_option("--fixtures", fixture_dir, "Directory holding ex21_a.txt ... ex41_b.txt");
    examples->add_option("--tol-chain", examples_opts.tol_chain, "Tolerance for bound values");
    examples->add_option("--tol-spectral", examples_opts.tol_spectral, "Tolerance for oracle values");
    examples_hinv.add(examples);
    add_format(examples);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_input;
    }

    const ReportFormat format = report_formats.at(format_name);
    try {
        if (*classify) return cmd_classify(classify_file, format, std::cout, std::cerr);
        if (*spectral) return cmd_spectral(spectral_file, spectral_which, format, spectral_cfg, std::cout, std::cerr);
        if (*bounds) {
            bounds_opts.family = families.at(bounds_family);
            bounds_opts.files.assign(bounds_files.begin(), bounds_files.end());
            bounds_opts.exponents = exponents_from(bounds_p);
            bounds_opts.eval.hinv = bounds_hinv.options();
            bounds_opts.format = format;
            return cmd_bounds(bounds_opts, std::cout, std::cerr);
        }
        if (*verify) {
            if (*seed_opt) {
                verify_opts.suite.seed = verify_seed;
            } else if (const char* env = std::getenv("MBOUND_SEED")) {
                const auto s = parse_seed(env);
                if (!s) {
                    std::cerr << "input error: MBOUND_SEED is not an unsigned integer: " << env << '\n';
                    return exit_input;
                }
                verify_opts.suite.seed = *s;
            }
            verify_opts.family = families.at(verify_family);
            if (*order_opt) verify_opts.suite.order_min = verify_opts.suite.order_max = verify_order;
            if (verify_m) verify_opts.m = verify_m;
            verify_opts.exponents = exponents_from(verify_p);
            verify_opts.suite.eval.hinv = verify_hinv.options();
            verify_opts.format = format;
            return cmd_verify(verify_opts, std::cout, std::cerr);
        }
        if (*product) {
            product_opts.kind = kinds.at(product_kind);
            product_opts.files.assign(product_files.begin(), product_files.end());
            product_opts.output = product_output == "json" ? MatrixFormat::json : MatrixFormat::text;
            return cmd_product(product_opts, std::cout, std::cerr);
        }
        if (*examples) {
            examples_opts.fixture_dir = fixture_dir;
            examples_opts.eval.hinv = examples_hinv.options();
            return cmd_examples(examples_opts, format, std::cout, std::cerr);
        }
    } catch (const mbound::DomainError& e) {
        // exponent parsing happens outside the command guards
        std::cerr << "input error: " << e.what() << '\n';
        return exit_input;
    }
    return exit_input;
}
