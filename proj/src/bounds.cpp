#include "mbound/bounds.hpp"

#include "mbound/error.hpp"
#include "mbound/spectral.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace mbound {

namespace {

constexpr double clamp_report_threshold = 1e-10;

void require_same_order(const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.order() != b.order()) throw DimensionError();
}

// Square root of a radicand that is nonnegative in exact arithmetic.
double clamped_sqrt(double radicand, BoundResult& r)
{
    if (radicand < 0.0) {
        if (radicand < -clamp_report_threshold) {
            std::ostringstream os;
            os << "radicand " << radicand << " clamped to 0";
            r.notes.push_back(os.str());
        }
        return 0.0;
    }
    return std::sqrt(radicand);
}

// Extremum of f(i, j) over ordered pairs i != j; first pair in row-major
// order wins ties.
template <class F>
void pairwise_extremum(std::size_t n, Direction dir, BoundResult& r, F&& f)
{
    double best = dir == Direction::upper ? -std::numeric_limits<double>::infinity()
                                          : std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double v = f(i, j);
            if (dir == Direction::upper ? v > best : v < best) {
                best = v;
                bi = i;
                bj = j;
            }
        }
    r.value = best;
    r.components.emplace_back("i", static_cast<double>(bi + 1));
    r.components.emplace_back("j", static_cast<double>(bj + 1));
}

template <class F>
void indexwise_extremum(std::size_t n, Direction dir, BoundResult& r, F&& f)
{
    double best = dir == Direction::upper ? -std::numeric_limits<double>::infinity()
                                          : std::numeric_limits<double>::infinity();
    std::size_t bi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = f(i);
        if (dir == Direction::upper ? v > best : v < best) {
            best = v;
            bi = i;
        }
    }
    r.value = best;
    r.components.emplace_back("i", static_cast<double>(bi + 1));
}

BoundResult make(std::string name, Direction dir)
{
    BoundResult r;
    r.name = std::move(name);
    r.direction = dir;
    return r;
}

// 1/2 {x_i + x_j -/+ sqrt((x_i - x_j)^2 + 4 cross)} as used by every
// Brauer-type bound here.
double oval_root(double xi, double xj, double cross, Direction dir, BoundResult& r)
{
    const double root = clamped_sqrt((xi - xj) * (xi - xj) + 4.0 * cross, r);
    return 0.5 * (xi + xj + (dir == Direction::upper ? root : -root));
}

void check_finite(const BoundResult& r)
{
    if (!std::isfinite(r.value)) throw DomainError("bound " + r.name + " is not finite");
}

std::vector<double> column_offdiag_abs_sums(const DenseMatrix& a)
{
    const std::size_t n = a.order();
    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            if (k != i) c[i] += std::abs(a(k, i));
    return c;
}

} // namespace

std::string_view to_string(Direction d) noexcept
{
    return d == Direction::upper ? "upper" : "lower";
}

std::optional<double> BoundResult::component(std::string_view key) const
{
    for (const auto& [k, v] : components)
        if (k == key) return v;
    return std::nullopt;
}

HolderExponents::HolderExponents(std::vector<int> p) : p_(std::move(p))
{
    if (p_.empty()) throw DomainError("at least one exponent is required");
    double sum = 0.0;
    for (int v : p_) {
        if (v < 1) throw DomainError("exponents must be positive integers");
        sum += 1.0 / v;
    }
    if (sum < 1.0 - 1e-12) throw DomainError("exponents must satisfy sum 1/P_k >= 1");
}

HolderExponents HolderExponents::parse(std::string_view text)
{
    std::vector<int> p;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string_view tok = text.substr(pos, comma - pos);
        int v = 0;
        const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc{} || end != tok.data() + tok.size())
            throw DomainError("invalid exponent '" + std::string(tok) + "'");
        p.push_back(v);
        pos = comma + 1;
    }
    return HolderExponents(std::move(p));
}

std::string HolderExponents::to_string() const
{
    std::string s;
    for (std::size_t k = 0; k < p_.size(); ++k) {
        if (k) s += ',';
        s += std::to_string(p_[k]);
    }
    return s;
}

std::vector<double> offdiag_row_max(const DenseMatrix& a)
{
    const std::size_t n = a.order();
    std::vector<double> s(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) s[i] = std::max(s[i], std::abs(a(i, j)));
    return s;
}

OffdiagMax aux_offdiag_max(const DenseMatrix& a, const DenseMatrix& b)
{
    require_same_order(a, b);
    return {offdiag_row_max(a), offdiag_row_max(b)};
}

AuxChain aux_chain(const DenseMatrix& a, ChainForm form)
{
    const std::size_t n = a.order();
    AuxChain c{DenseMatrix(n), std::vector<double>(n, 0.0), DenseMatrix(n), std::vector<double>(n, 0.0),
               std::vector<double>(n, 0.0)};

    std::vector<double> row_abs(n, 0.0);
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t k = 0; k < n; ++k)
            if (k != l) row_abs[l] += std::abs(a(l, k));

    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t i = 0; i < n; ++i) {
            if (l == i) continue;
            const double denom = std::abs(a(l, l)) - (row_abs[l] - std::abs(a(l, i)));
            if (!(denom > 0.0))
                throw DomainError("denominator nonpositive at row " + std::to_string(l + 1) + ", column "
                                  + std::to_string(i + 1));
            c.r_pair(l, i) = std::abs(a(l, i)) / denom;
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l)
            if (l != i) c.r[i] = std::max(c.r[i], c.r_pair(l, i));

    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            if (j == i) continue;
            double acc = std::abs(a(j, i));
            for (std::size_t k = 0; k < n; ++k) {
                if (k == j || k == i) continue;
                const double w = form == ChainForm::summand_column ? c.r[k] : c.r[i];
                acc += std::abs(a(j, k)) * w;
            }
            c.s_pair(j, i) = acc / std::abs(a(j, j));
        }
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            if (j == i) continue;
            c.s[i] = std::max(c.s[i], c.s_pair(j, i));
            c.s_by_row[j] = std::max(c.s_by_row[j], c.s_pair(j, i));
        }
    return c;
}

DominantForm row_dominant_form(const DenseMatrix& b)
{
    const std::size_t n = b.order();
    if (is_strictly_row_dd(b)) return {b, std::vector<double>(n, 1.0), false};
    const std::vector<double> d = inverse(b).multiply(std::vector<double>(n, 1.0));
    for (double v : d)
        if (!(v > 0.0)) throw ClassError("no positive diagonal scaling makes the matrix row dominant");
    return {scale_similarity(b, d), d, true};
}

BoundResult rho_bound_product(double rho_a, double rho_b)
{
    BoundResult r = make("rho_product", Direction::upper);
    r.value = rho_a * rho_b;
    r.components = {{"rho_A", rho_a}, {"rho_B", rho_b}};
    return r;
}

BoundResult rho_bound_fang(const DenseMatrix& a, const DenseMatrix& b, double rho_a, double rho_b)
{
    require_same_order(a, b);
    BoundResult r = make("rho_fang", Direction::upper);
    r.components = {{"rho_A", rho_a}, {"rho_B", rho_b}};
    indexwise_extremum(a.order(), Direction::upper, r, [&](std::size_t i) {
        return 2.0 * a(i, i) * b(i, i) + rho_a * rho_b - b(i, i) * rho_a - a(i, i) * rho_b;
    });
    check_finite(r);
    return r;
}

BoundResult rho_bound_liu(const DenseMatrix& a, const DenseMatrix& b, double rho_a, double rho_b)
{
    require_same_order(a, b);
    BoundResult r = make("rho_liu", Direction::upper);
    r.components = {{"rho_A", rho_a}, {"rho_B", rho_b}};
    if (a.order() == 1) {
        r.value = a(0, 0) * b(0, 0);
        return r;
    }
    pairwise_extremum(a.order(), Direction::upper, r, [&](std::size_t i, std::size_t j) {
        const double cross = (rho_a - a(i, i)) * (rho_b - b(i, i)) * (rho_a - a(j, j)) * (rho_b - b(j, j));
        return oval_root(a(i, i) * b(i, i), a(j, j) * b(j, j), cross, Direction::upper, r);
    });
    check_finite(r);
    return r;
}

BoundResult rho_bound_offdiag(const DenseMatrix& a, const DenseMatrix& b, double rho_a, double rho_b)
{
    const OffdiagMax m = aux_offdiag_max(a, b);
    BoundResult r = make("rho_offdiag", Direction::upper);
    r.components = {{"rho_A", rho_a}, {"rho_B", rho_b}};
    if (a.order() == 1) {
        r.value = a(0, 0) * b(0, 0);
        return r;
    }
    pairwise_extremum(a.order(), Direction::upper, r, [&](std::size_t i, std::size_t j) {
        // Each factor is nonnegative because rho(A) >= a_ii for A >= 0.
        const double cross = m.t[i] * m.s[j] * (rho_a - a(i, i)) * (rho_b - b(j, j));
        return oval_root(a(i, i) * b(i, i), a(j, j) * b(j, j), cross, Direction::upper, r);
    });
    check_finite(r);
    return r;
}

BoundResult tau_bound_product(double tau_a, double tau_b)
{
    BoundResult r = make("tau_product", Direction::lower);
    r.value = tau_a * tau_b;
    r.components = {{"tau_A", tau_a}, {"tau_B", tau_b}};
    return r;
}

BoundResult tau_bound_fang(const DenseMatrix& a, const DenseMatrix& b, double tau_a, double tau_b)
{
    require_same_order(a, b);
    BoundResult r = make("tau_fang", Direction::lower);
    r.components = {{"tau_A", tau_a}, {"tau_B", tau_b}};
    indexwise_extremum(a.order(), Direction::lower, r, [&](std::size_t i) {
        return b(i, i) * tau_a + a(i, i) * tau_b - tau_a * tau_b;
    });
    check_finite(r);
    return r;
}

BoundResult tau_bound_liu(const DenseMatrix& a, const DenseMatrix& b, double tau_a, double tau_b)
{
    require_same_order(a, b);
    BoundResult r = make("tau_liu", Direction::lower);
    r.components = {{"tau_A", tau_a}, {"tau_B", tau_b}};
    if (a.order() == 1) {
        r.value = a(0, 0) * b(0, 0);
        return r;
    }
    pairwise_extremum(a.order(), Direction::lower, r, [&](std::size_t i, std::size_t j) {
        const double cross = (b(i, i) - tau_b) * (a(i, i) - tau_a) * (b(j, j) - tau_b) * (a(j, j) - tau_a);
        return oval_root(a(i, i) * b(i, i), a(j, j) * b(j, j), cross, Direction::lower, r);
    });
    check_finite(r);
    return r;
}

BoundResult tau_bound_offdiag(const DenseMatrix& a, const DenseMatrix& b, double tau_a, double tau_b)
{
    const OffdiagMax m = aux_offdiag_max(a, b);
    BoundResult r = make("tau_offdiag", Direction::lower);
    r.components = {{"tau_A", tau_a}, {"tau_B", tau_b}};
    if (a.order() == 1) {
        r.value = a(0, 0) * b(0, 0);
        return r;
    }
    pairwise_extremum(a.order(), Direction::lower, r, [&](std::size_t i, std::size_t j) {
        const double cross = m.t[i] * m.s[j] * (a(i, i) - tau_a) * (b(j, j) - tau_b);
        return oval_root(a(i, i) * b(i, i), a(j, j) * b(j, j), cross, Direction::lower, r);
    });
    check_finite(r);
    return r;
}

BoundResult tau_hinv_classic(double tau_a, const DenseMatrix& binv)
{
    BoundResult r = make("tau_hinv_classic", Direction::lower);
    const std::vector<double> beta = binv.diag();
    const double min_beta = *std::ranges::min_element(beta);
    r.value = tau_a * min_beta;
    r.components = {{"tau_A", tau_a}, {"min_beta", min_beta}};
    return r;
}

BoundResult tau_hinv_huang(const DenseMatrix& a, const DenseMatrix& b, double rho_ja, double rho_jb)
{
    require_same_order(a, b);
    BoundResult r = make("tau_hinv_huang", Direction::lower);
    double min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.order(); ++i) {
        if (b(i, i) == 0.0) throw DomainError("zero diagonal entry in B");
        min_ratio = std::min(min_ratio, a(i, i) / b(i, i));
    }
    r.value = (1.0 - rho_ja * rho_jb) / (1.0 + rho_jb * rho_jb) * min_ratio;
    r.components = {{"rho_JA", rho_ja}, {"rho_JB", rho_jb}, {"min_a_over_b", min_ratio}};
    check_finite(r);
    return r;
}

BoundResult tau_hinv_li(const DenseMatrix& a, const DenseMatrix& b, const HinvOptions& opts)
{
    require_same_order(a, b);
    BoundResult r = make("tau_hinv_li", Direction::lower);
    const DominantForm dom = row_dominant_form(b);
    if (dom.scaled) r.notes.emplace_back("B replaced by D^-1 B D, d = B^-1 * ones");
    const AuxChain chain = aux_chain(dom.matrix, opts.chain_form);
    const std::vector<double>& s = opts.li_reduction == ChainReduction::by_row ? chain.s_by_row : chain.s;
    const std::vector<double> col = column_offdiag_abs_sums(a);
    indexwise_extremum(a.order(), Direction::lower, r,
                       [&](std::size_t i) { return (a(i, i) - s[i] * col[i]) / b(i, i); });
    check_finite(r);
    return r;
}

BoundResult tau_hinv_chen(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& binv,
                          double rho_ja, double rho_jb)
{
    require_same_order(a, b);
    require_same_order(a, binv);
    BoundResult r = make("tau_hinv_chen", Direction::lower);
    r.components = {{"rho_JA", rho_ja}, {"rho_JB", rho_jb}};
    if (a.order() == 1) {
        r.value = a(0, 0) * binv(0, 0);
        return r;
    }
    const double q = rho_ja * rho_ja * rho_jb * rho_jb;
    pairwise_extremum(a.order(), Direction::lower, r, [&](std::size_t i, std::size_t j) {
        const double xi = a(i, i) * binv(i, i), xj = a(j, j) * binv(j, j);
        return oval_root(xi, xj, xi * xj * q, Direction::lower, r);
    });
    check_finite(r);
    return r;
}

BoundResult tau_hinv_chain(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& binv,
                           double tau_a, double tau_b, const HinvOptions& opts)
{
    require_same_order(a, b);
    require_same_order(a, binv);
    BoundResult r = make("tau_hinv_chain", Direction::lower);
    r.components = {{"tau_A", tau_a}, {"tau_B", tau_b}};
    r.notes.emplace_back(opts.factor == DeficitFactor::same_matrix ? "deficit (a_ii-tau_A)(a_jj-tau_A)"
                                                                   : "deficit (a_ii-tau_A)(b_jj-tau_B)");
    if (a.order() == 1) {
        r.value = a(0, 0) * binv(0, 0);
        return r;
    }

    std::vector<double> w;
    if (opts.weights == HinvWeights::b_chain) {
        const DominantForm dom = row_dominant_form(b);
        if (dom.scaled) r.notes.emplace_back("B replaced by D^-1 B D, d = B^-1 * ones");
        w = aux_chain(dom.matrix, opts.chain_form).s;
    } else {
        w = offdiag_row_max(a);
        r.notes.emplace_back("weights max_{j!=i} |a_ij|");
    }

    pairwise_extremum(a.order(), Direction::lower, r, [&](std::size_t i, std::size_t j) {
        const double xi = a(i, i) * binv(i, i), xj = a(j, j) * binv(j, j);
        const double deficit = opts.factor == DeficitFactor::same_matrix ? (a(i, i) - tau_a) * (a(j, j) - tau_a)
                                                                        : (a(i, i) - tau_a) * (b(j, j) - tau_b);
        const double cross = w[i] * w[j] * binv(i, i) * binv(j, j) * deficit;
        return oval_root(xi, xj, cross, Direction::lower, r);
    });
    check_finite(r);
    return r;
}

BoundResult tau_multi_fan(std::span<const DenseMatrix> matrices, const HolderExponents& exponents,
                          std::span<const double> taus_of_fan_powers)
{
    const std::size_t m = matrices.size();
    if (m == 0) throw DomainError("at least one matrix is required");
    if (exponents.size() != m || taus_of_fan_powers.size() != m)
        throw DimensionError("need one exponent and one tau per matrix");
    const std::size_t n = matrices[0].order();
    for (const auto& mat : matrices)
        if (mat.order() != n) throw DimensionError();

    BoundResult r = make("tau_multi_fan", Direction::lower);
    for (std::size_t k = 0; k < m; ++k)
        r.components.emplace_back("tau_fan_power_" + std::to_string(k + 1), taus_of_fan_powers[k]);

    const auto& p = exponents.values();
    indexwise_extremum(n, Direction::lower, r, [&](std::size_t i) {
        double diag = 1.0, deficit = 1.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double aii = matrices[k](i, i);
            diag *= aii;
            // Nonnegative in exact arithmetic: tau of a Fan power never
            // exceeds its smallest diagonal entry.
            double bracket = std::pow(aii, p[k]) - taus_of_fan_powers[k];
            if (bracket < 0.0) {
                if (bracket < -clamp_report_threshold * std::max(1.0, std::pow(aii, p[k]))) {
                    std::ostringstream os;
                    os << "deficit " << bracket << " of matrix " << k + 1 << " at row " << i + 1
                       << " clamped to 0";
                    r.notes.push_back(os.str());
                }
                bracket = 0.0;
            }
            deficit *= p[k] == 1 ? bracket : std::pow(bracket, 1.0 / p[k]);
        }
        return diag - deficit;
    });
    check_finite(r);
    return r;
}

bool cassini_contains(const DenseMatrix& a, std::complex<double> z)
{
    const std::size_t n = a.order();
    if (n < 2) throw DomainError("Cassini requires n >= 2");
    const std::vector<double> col = column_offdiag_abs_sums(a);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            // Order-2 eigenvalues sit exactly on the boundary; allow rounding.
            const double slack = 64.0 * std::numeric_limits<double>::epsilon()
                                 * (std::abs(z) + std::abs(a(i, i)) + col[i]) * (std::abs(z) + std::abs(a(j, j)) + col[j]);
            if (std::abs(z - a(i, i)) * std::abs(z - a(j, j)) <= col[i] * col[j] + slack) return true;
        }
    return false;
}

} // namespace mbound
