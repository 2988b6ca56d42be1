#include "mbound/harness.hpp"

#include "mbound/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <limits>
#include <random>
#include <thread>

namespace mbound {

namespace {

double unit_interval(std::mt19937_64& eng) noexcept
{
    return static_cast<double>(eng() >> 11) * 0x1.0p-53; // [0, 1)
}

std::string digest(const DenseMatrix& m)
{
    std::uint64_t h = 1469598103934665603ull;
    for (double v : m.data()) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &v, sizeof v);
        for (unsigned char c : bytes) {
            h ^= c;
            h *= 1099511628211ull;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double min_diag_product(const DenseMatrix& a, const DenseMatrix& b)
{
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.order(); ++i) m = std::min(m, a(i, i) * b(i, i));
    return m;
}

void require_m_matrix(const DenseMatrix& m, const char* what)
{
    if (!is_nonsingular_m_matrix(m)) throw ClassError(std::string(what) + " is not a nonsingular M-matrix");
}

void add_check(TrialReport& r, std::string name, bool passed, double value)
{
    r.checks.push_back({std::move(name), passed, value});
}

// Records the bound with its slack and flags it if it is on the wrong side.
void add_bound(TrialReport& r, BoundResult b, double tol)
{
    b.slack = b.direction == Direction::upper ? b.value - r.oracle : r.oracle - b.value;
    if (*b.slack < -tol) r.violations.push_back(b.name);
    r.bounds.push_back(std::move(b));
}

double rel_tol_of(double x, double tol)
{
    return tol * std::max(1.0, std::abs(x));
}

template <class F>
std::vector<TrialReport> run_trials(const SuiteConfig& cfg, Family family, F&& make_trial)
{
    if (cfg.order_min < 1 || cfg.order_max < cfg.order_min || cfg.order_max > 12)
        throw DomainError("order range must satisfy 1 <= min <= max <= 12");
    const std::size_t first = cfg.with_reference_examples ? 0 : 1;
    const std::size_t count = cfg.trials + (cfg.with_reference_examples ? 1 : 0);
    std::vector<TrialReport> out(count);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < count; k = next++) {
            const std::size_t trial = first + k;
            TrialReport& rep = out[k];
            try {
                rep = make_trial(trial);
            } catch (const std::exception& e) {
                rep = TrialReport{};
                rep.error = e.what();
            }
            rep.trial = trial;
            rep.family = family;
            rep.reference_example = (trial == 0);
        }
    };

    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    return out;
}

struct TrialDraw {
    std::size_t order;
    std::uint64_t seed;
};

TrialDraw draw_trial(const SuiteConfig& cfg, std::size_t trial)
{
    const std::uint64_t seed = derive_seed(cfg.seed, trial);
    std::mt19937_64 eng(seed);
    const std::size_t range = cfg.order_max - cfg.order_min + 1;
    return {cfg.order_min + static_cast<std::size_t>(eng() % range), seed};
}

GeneratorSpec spec_for(const SuiteConfig& cfg, MatrixKind kind, const TrialDraw& d, std::uint64_t stream)
{
    GeneratorSpec g;
    g.kind = kind;
    g.order = d.order;
    g.density = cfg.density;
    g.margin = cfg.margin;
    g.seed = derive_seed(d.seed, stream);
    return g;
}

} // namespace

void GeneratorSpec::validate() const
{
    if (order < 1 || order > 12) throw DomainError("generator order must be in 1..12");
    if (!(density > 0.0 && density <= 1.0)) throw DomainError("density must be in (0, 1]");
    if (!(margin > 0.0) || !std::isfinite(margin)) throw DomainError("margin must be positive");
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept
{
    // splitmix64 finalizer over base + stream
    std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

DenseMatrix gen_nonnegative(const GeneratorSpec& spec)
{
    spec.validate();
    std::mt19937_64 eng(spec.seed);
    DenseMatrix m(spec.order);
    for (std::size_t i = 0; i < spec.order; ++i)
        for (std::size_t j = 0; j < spec.order; ++j) {
            const double value = 1.0 - unit_interval(eng);
            const bool keep = unit_interval(eng) < spec.density;
            m(i, j) = keep ? value : 0.0;
        }
    return m;
}

DenseMatrix gen_m_matrix(const GeneratorSpec& spec)
{
    const DenseMatrix p = gen_nonnegative(spec);
    const double rho = rho_nonnegative(p).value;
    const double alpha = rho > 0.0 ? rho * (1.0 + spec.margin) : spec.margin;
    DenseMatrix a = alpha * DenseMatrix::identity(spec.order) - p;
    if (!is_nonsingular_m_matrix(a)) throw ClassError("generated matrix failed M-matrix classification");
    return a;
}

DenseMatrix gen_row_dominant_m_matrix(const GeneratorSpec& spec)
{
    const DenseMatrix p = gen_nonnegative(spec);
    double max_row = 0.0;
    for (std::size_t i = 0; i < p.order(); ++i) {
        double s = 0.0;
        for (double v : p.row(i)) s += v;
        max_row = std::max(max_row, s);
    }
    const double alpha = max_row > 0.0 ? max_row * (1.0 + spec.margin) : spec.margin;
    DenseMatrix a = alpha * DenseMatrix::identity(spec.order) - p;
    if (!is_nonsingular_m_matrix(a) || !is_strictly_row_dd(a))
        throw ClassError("generated matrix is not a row dominant M-matrix");
    return a;
}

std::string_view to_string(Family f) noexcept
{
    switch (f) {
    case Family::hadamard: return "hadamard";
    case Family::fan: return "fan";
    case Family::hadamard_inverse: return "hadamard-inverse";
    case Family::multi_fan: return "multi-fan";
    }
    return "?";
}

std::optional<Family> parse_family(std::string_view name) noexcept
{
    for (Family f : {Family::hadamard, Family::fan, Family::hadamard_inverse, Family::multi_fan})
        if (to_string(f) == name) return f;
    return std::nullopt;
}

bool TrialReport::checks_passed() const noexcept
{
    return std::ranges::all_of(checks, [](const Check& c) { return c.passed; });
}

const BoundResult* TrialReport::bound(std::string_view name) const noexcept
{
    for (const auto& b : bounds)
        if (b.name == name) return &b;
    return nullptr;
}

TrialReport evaluate_hadamard(const DenseMatrix& a, const DenseMatrix& b, const EvalOptions& opts)
{
    if (a.order() != b.order()) throw DimensionError();
    if (!is_nonnegative(a)) throw ClassError("A is not nonnegative");
    if (!is_nonnegative(b)) throw ClassError("B is not nonnegative");

    const std::size_t n = a.order();
    TrialReport r;
    r.family = Family::hadamard;
    r.order = n;
    r.digests = {digest(a), digest(b)};
    r.oracle_name = "rho(A o B)";

    const double rho_a = rho_nonnegative(a, opts.spectral).value;
    const double rho_b = rho_nonnegative(b, opts.spectral).value;
    const DenseMatrix h = hadamard(a, b);
    r.oracle = rho_nonnegative(h, opts.spectral).value;

    const double tol = opts.tolerance;
    add_bound(r, rho_bound_product(rho_a, rho_b), tol);
    add_bound(r, rho_bound_fang(a, b, rho_a, rho_b), tol);
    add_bound(r, rho_bound_liu(a, b, rho_a, rho_b), tol);
    add_bound(r, rho_bound_offdiag(a, b, rho_a, rho_b), tol);

    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i) * b(i, i));
    add_check(r, "perron_anchor", r.oracle >= max_diag - tol, r.oracle - max_diag);

    const double det = std::abs(determinant(h));
    const double rho_n = std::pow(r.oracle, static_cast<double>(n));
    const double bound_n = std::pow(r.bounds.back().value, static_cast<double>(n));
    add_check(r, "det_le_rho_pow", det <= rho_n + rel_tol_of(rho_n, tol), rho_n - det);
    add_check(r, "rho_pow_le_bound_pow", rho_n <= bound_n + rel_tol_of(bound_n, tol), bound_n - rho_n);

    const OffdiagMax m = aux_offdiag_max(a, b);
    bool hyp = true;
    for (std::size_t i = 0; i < n; ++i)
        if (m.t[i] + b(i, i) < rho_b || m.s[i] + a(i, i) < rho_a) hyp = false;
    r.dominance_hypothesis = hyp;
    if (hyp) {
        const double gap = r.bound("rho_liu")->value - r.bound("rho_offdiag")->value;
        r.dominance_holds = gap >= -1e-10;
        if (!*r.dominance_holds) r.violations.push_back("dominance");
    }
    return r;
}

TrialReport evaluate_fan(const DenseMatrix& a, const DenseMatrix& b, const EvalOptions& opts)
{
    if (a.order() != b.order()) throw DimensionError();
    require_m_matrix(a, "A");
    require_m_matrix(b, "B");

    const std::size_t n = a.order();
    TrialReport r;
    r.family = Family::fan;
    r.order = n;
    r.digests = {digest(a), digest(b)};
    r.oracle_name = "tau(A * B)";

    const double tau_a = tau_m_matrix(a, opts.spectral).value;
    const double tau_b = tau_m_matrix(b, opts.spectral).value;
    const DenseMatrix f = fan_product(a, b);
    r.oracle = tau_m_matrix(f, opts.spectral).value;

    const double tol = opts.tolerance;
    add_bound(r, tau_bound_product(tau_a, tau_b), tol);
    add_bound(r, tau_bound_fang(a, b, tau_a, tau_b), tol);
    add_bound(r, tau_bound_liu(a, b, tau_a, tau_b), tol);
    add_bound(r, tau_bound_offdiag(a, b, tau_a, tau_b), tol);

    const double min_diag = min_diag_product(a, b);
    add_check(r, "perron_anchor", r.oracle <= min_diag + tol, min_diag - r.oracle);

    const double det = std::abs(determinant(f));
    const double tau_n = std::pow(r.oracle, static_cast<double>(n));
    const double bound_n = std::pow(r.bounds.back().value, static_cast<double>(n));
    add_check(r, "det_ge_tau_pow", det >= tau_n - rel_tol_of(tau_n, tol), det - tau_n);
    add_check(r, "tau_pow_ge_bound_pow", tau_n >= bound_n - rel_tol_of(tau_n, tol), tau_n - bound_n);

    const OffdiagMax m = aux_offdiag_max(a, b);
    bool hyp = true;
    for (std::size_t i = 0; i < n; ++i)
        if (a(i, i) < tau_a + m.s[i] || b(i, i) < tau_b + m.t[i]) hyp = false;
    r.dominance_hypothesis = hyp;
    if (hyp) {
        const double gap = r.bound("tau_offdiag")->value - r.bound("tau_liu")->value;
        r.dominance_holds = gap >= -1e-10;
        if (!*r.dominance_holds) r.violations.push_back("dominance");
    }
    return r;
}

TrialReport evaluate_hadamard_inverse(const DenseMatrix& a, const DenseMatrix& b, const EvalOptions& opts)
{
    if (a.order() != b.order()) throw DimensionError();
    require_m_matrix(a, "A");
    require_m_matrix(b, "B");

    const std::size_t n = a.order();
    TrialReport r;
    r.family = Family::hadamard_inverse;
    r.order = n;
    r.digests = {digest(a), digest(b)};
    r.oracle_name = "tau(A o B^-1)";

    const DenseMatrix binv = m_matrix_inverse(b);
    const DenseMatrix h = hadamard(a, binv);
    add_check(r, "product_is_m_matrix", is_nonsingular_m_matrix(h), 0.0);
    r.oracle = tau_m_matrix(h, opts.spectral).value;

    const double tau_a = tau_m_matrix(a, opts.spectral).value;
    const double tau_b = tau_m_matrix(b, opts.spectral).value;
    const double rho_ja = jacobi_radius(a, opts.spectral);
    const double rho_jb = jacobi_radius(b, opts.spectral);

    const double tol = opts.tolerance;
    add_bound(r, tau_hinv_classic(tau_a, binv), tol);
    add_bound(r, tau_hinv_huang(a, b, rho_ja, rho_jb), tol);
    add_bound(r, tau_hinv_li(a, b, opts.hinv), tol);
    add_bound(r, tau_hinv_chen(a, b, binv, rho_ja, rho_jb), tol);
    add_bound(r, tau_hinv_chain(a, b, binv, tau_a, tau_b, opts.hinv), tol);

    const double min_diag = min_diag_product(a, binv);
    add_check(r, "perron_anchor", r.oracle <= min_diag + tol, min_diag - r.oracle);
    return r;
}

TrialReport evaluate_multi_fan(std::span<const DenseMatrix> matrices, const HolderExponents& exponents,
                               const EvalOptions& opts)
{
    const std::size_t m = matrices.size();
    if (m == 0) throw DomainError("at least one matrix is required");
    if (exponents.size() != m) throw DimensionError("need one exponent per matrix");
    const std::size_t n = matrices[0].order();

    TrialReport r;
    r.family = Family::multi_fan;
    r.order = n;
    r.oracle_name = "tau(A_1 * ... * A_m)";
    for (std::size_t k = 0; k < m; ++k) {
        if (matrices[k].order() != n) throw DimensionError();
        require_m_matrix(matrices[k], ("A_" + std::to_string(k + 1)).c_str());
        r.digests.push_back(digest(matrices[k]));
    }

    std::vector<double> taus(m);
    for (std::size_t k = 0; k < m; ++k)
        taus[k] = tau_m_matrix(fan_power(matrices[k], exponents.values()[k]), opts.spectral).value;

    DenseMatrix product = matrices[0];
    for (std::size_t k = 1; k < m; ++k) product = fan_product(product, matrices[k]);
    r.oracle = tau_m_matrix(product, opts.spectral).value;

    const double tol = opts.tolerance;
    add_bound(r, tau_multi_fan(matrices, exponents, taus), tol);
    const double bound = r.bounds.back().value;
    const auto& p = exponents.values();

    if (m == 1 && p[0] == 1) add_check(r, "reduces_to_tau", std::abs(bound - taus[0]) <= 1e-12, bound - taus[0]);

    if (m == 2) {
        const DenseMatrix& a = matrices[0];
        const DenseMatrix& b = matrices[1];
        if (p[0] == 1 && p[1] == 1) {
            const double fang = tau_bound_fang(a, b, taus[0], taus[1]).value;
            add_check(r, "matches_fang", std::abs(bound - fang) <= 1e-12, bound - fang);
        }
        if (p[0] == 2 && p[1] == 2) {
            const double floor = tau_m_matrix(a, opts.spectral).value * tau_m_matrix(b, opts.spectral).value;
            double worst = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < n; ++i) {
                const double aii = a(i, i), bii = b(i, i);
                const double radicand = std::max(0.0, (aii * aii - taus[0]) * (bii * bii - taus[1]));
                worst = std::min(worst, aii * bii - std::sqrt(radicand) - floor);
            }
            add_check(r, "power_two_above_product", worst >= -tol, worst);
        }
    }
    return r;
}

std::vector<TrialReport> run_hadamard_suite(const SuiteConfig& cfg)
{
    return run_trials(cfg, Family::hadamard, [&](std::size_t trial) {
        if (trial == 0) {
            const auto ex = reference_pair(Family::hadamard);
            return evaluate_hadamard(ex.a, ex.b, cfg.eval);
        }
        const TrialDraw d = draw_trial(cfg, trial);
        const DenseMatrix a = gen_nonnegative(spec_for(cfg, MatrixKind::nonnegative, d, 1));
        const DenseMatrix b = gen_nonnegative(spec_for(cfg, MatrixKind::nonnegative, d, 2));
        return evaluate_hadamard(a, b, cfg.eval);
    });
}

std::vector<TrialReport> run_fan_suite(const SuiteConfig& cfg)
{
    return run_trials(cfg, Family::fan, [&](std::size_t trial) {
        if (trial == 0) {
            const auto ex = reference_pair(Family::fan);
            return evaluate_fan(ex.a, ex.b, cfg.eval);
        }
        const TrialDraw d = draw_trial(cfg, trial);
        const DenseMatrix a = gen_m_matrix(spec_for(cfg, MatrixKind::m_matrix, d, 1));
        const DenseMatrix b = gen_m_matrix(spec_for(cfg, MatrixKind::m_matrix, d, 2));
        return evaluate_fan(a, b, cfg.eval);
    });
}

std::vector<TrialReport> run_hinv_suite(const SuiteConfig& cfg)
{
    return run_trials(cfg, Family::hadamard_inverse, [&](std::size_t trial) {
        if (trial == 0) {
            const auto ex = reference_pair(Family::hadamard_inverse);
            return evaluate_hadamard_inverse(ex.a, ex.b, cfg.eval);
        }
        const TrialDraw d = draw_trial(cfg, trial);
        const DenseMatrix a = gen_m_matrix(spec_for(cfg, MatrixKind::m_matrix, d, 1));
        const DenseMatrix b = gen_m_matrix(spec_for(cfg, MatrixKind::m_matrix, d, 2));
        return evaluate_hadamard_inverse(a, b, cfg.eval);
    });
}

std::vector<TrialReport> run_multi_fan_suite(const SuiteConfig& cfg, std::size_t m, const HolderExponents& exponents)
{
    if (exponents.size() != m) throw DomainError("number of exponents must equal m");
    SuiteConfig c = cfg;
    // The reference pair only fits m <= 2.
    if (m > 2) c.with_reference_examples = false;
    return run_trials(c, Family::multi_fan, [&](std::size_t trial) {
        std::vector<DenseMatrix> mats;
        if (trial == 0) {
            const auto ex = reference_pair(Family::fan);
            mats.push_back(ex.a);
            if (m == 2) mats.push_back(ex.b);
        } else {
            const TrialDraw d = draw_trial(c, trial);
            for (std::size_t k = 0; k < m; ++k) mats.push_back(gen_m_matrix(spec_for(c, MatrixKind::m_matrix, d, k + 1)));
        }
        return evaluate_multi_fan(mats, exponents, c.eval);
    });
}

bool hadamard_inverse_m_matrix_check(const DenseMatrix& a, const DenseMatrix& b)
{
    return is_nonsingular_m_matrix(hadamard(b, m_matrix_inverse(a)));
}

InverseBoundCheck inverse_entry_bound_check(const DenseMatrix& b, ChainForm form, double tol)
{
    const DenseMatrix binv = m_matrix_inverse(b);
    const AuxChain chain = aux_chain(b, form);
    InverseBoundCheck out;
    out.max_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.order(); ++j)
        for (std::size_t i = 0; i < b.order(); ++i) {
            if (i == j) continue;
            out.max_excess = std::max(out.max_excess, binv(j, i) - chain.s_pair(j, i) * binv(i, i));
        }
    if (b.order() == 1) out.max_excess = 0.0;
    out.holds = out.max_excess <= tol;
    return out;
}

SuiteSummary summarize(std::span<const TrialReport> reports)
{
    SuiteSummary s;
    s.trials = reports.size();
    s.max_slack = -std::numeric_limits<double>::infinity();
    s.min_slack = std::numeric_limits<double>::infinity();
    for (const auto& r : reports) {
        if (!r.violations.empty()) ++s.violations;
        if (r.error) ++s.errors;
        bool failed = false;
        for (const auto& c : r.checks) {
            if (c.passed) continue;
            failed = true;
            auto it = std::ranges::find(s.failed_checks, c.name, &std::pair<std::string, std::size_t>::first);
            if (it == s.failed_checks.end())
                s.failed_checks.emplace_back(c.name, 1);
            else
                ++it->second;
        }
        if (failed) ++s.check_failures;
        if (r.dominance_hypothesis.value_or(false)) ++s.dominance_hypothesis_count;
        if (r.dominance_holds.has_value() && !*r.dominance_holds) ++s.dominance_failures;
        for (const auto& b : r.bounds) {
            if (!b.slack) continue;
            s.max_slack = std::max(s.max_slack, *b.slack);
            s.min_slack = std::min(s.min_slack, *b.slack);
        }
    }
    if (s.max_slack < s.min_slack) s.max_slack = s.min_slack = 0.0;
    return s;
}

ReferencePair reference_pair(Family f)
{
    switch (f) {
    case Family::hadamard:
        return {DenseMatrix{{4, 1, 0, 2}, {1, 0.05, 1, 1}, {0, 1, 4, 0.5}, {1, 0.5, 0, 4}}, DenseMatrix::ones(4)};
    case Family::fan:
    case Family::multi_fan:
        return {DenseMatrix{{2, -1, 0}, {0, 1, -0.5}, {-0.5, -1, 2}},
                DenseMatrix{{1, -0.25, -0.25}, {-0.5, 1, -0.25}, {-0.25, -0.5, 1}}};
    case Family::hadamard_inverse:
        return {DenseMatrix{{1, -0.5, 0, 0}, {-0.5, 1, -0.5, 0}, {0, -0.5, 1, -0.5}, {0, 0, -0.5, 1}},
                DenseMatrix{{4, -1, -1, -1}, {-2, 5, -1, -1}, {0, -2, 4, -1}, {-1, -1, -1, 4}}};
    }
    throw DomainError("unknown family");
}

} // namespace mbound
