#include "ptq/perturbation.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "ptq/errors.hpp"
#include "ptq/serialize.hpp"

namespace ptq {

HamiltonianSpec HamiltonianSpec::standard()
{
    const Coefficient half = Coefficient::rational(1, 2);
    HamiltonianSpec spec;
    spec.h0 = PhasePolynomial({{Monomial{.p = 2}, half}, {Monomial{.x = 2, .mu = 2}, half}});
    spec.h1 = PhasePolynomial::term(Coefficient::imaginary_unit(), Monomial{.x = 3, .g = 1});
    spec.h2 = PhasePolynomial::term(Coefficient(-1), Monomial{.x = 4, .lam = 1});
    return spec;
}

std::string_view to_string(GMode mode) { return mode == GMode::full ? "full-g" : "first-order-g"; }

GMode parse_gmode(std::string_view text)
{
    if (text == "full-g") {
        return GMode::full;
    }
    if (text == "first-order-g") {
        return GMode::first_order;
    }
    throw ArgumentError("unknown mode '" + std::string(text) + "' (expected full-g or first-order-g)");
}

const PhasePolynomial* QSeries::by_order(int order) const
{
    if (order < 1 || order % 2 == 0) {
        return nullptr;
    }
    const auto n = static_cast<std::size_t>(order / 2);
    return n < terms_.size() ? &terms_[n] : nullptr;
}

QSeries QSeries::with_appended(PhasePolynomial q) const
{
    QSeries out = *this;
    out.terms_.push_back(std::move(q));
    return out;
}

std::optional<std::string> QSeries::invariant_violation() const
{
    for (std::size_t n = 0; n < terms_.size(); ++n) {
        const auto name = "Q_" + std::to_string(2 * n + 1);
        const auto flags = parity_flags(terms_[n]);
        if (!flags.even_in_x || !flags.odd_in_p) {
            return name + " violates x-even / p-odd parity";
        }
        for (const auto& t : terms_[n].terms()) {
            if (t.mono.hbar != -1) {
                return name + " has a term with hbar exponent " + std::to_string(t.mono.hbar);
            }
            if (mode_ == GMode::first_order) {
                if (t.mono.g != 1 || t.mono.lam != static_cast<int>(n)) {
                    return name + " has term " + t.mono.to_string() + " outside g^1 lam^" + std::to_string(n);
                }
            } else if (t.mono.g % 2 == 0 || t.mono.g > static_cast<int>(2 * n + 1)) {
                return name + " has g exponent " + std::to_string(t.mono.g);
            }
        }
    }
    return std::nullopt;
}

namespace {

class AdjointTable {
public:
    AdjointTable(const PhasePolynomial& h, const QSeries& q, const AdjointOptions& opts) : h_(h), q_(q), opts_(opts) {}

    // Sum over ordered odd tuples (k_1..k_m) with k_1+..+k_m = s of [..[[H,Q_k1],Q_k2]..,Q_km].
    const PhasePolynomial& nested(int m, int s)
    {
        const auto key = std::make_pair(m, s);
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }
        PhasePolynomial value;
        if (m == 0) {
            value = s == 0 ? h_ : PhasePolynomial{};
        } else {
            for (int k = 1; k <= s - (m - 1); k += 2) {
                const int rest = s - k;
                if ((rest - (m - 1)) % 2 != 0) {
                    continue;
                }
                const PhasePolynomial& inner = nested(m - 1, rest);
                if (inner.is_zero()) {
                    continue;
                }
                const PhasePolynomial* qk = q_.by_order(k);
                if (qk == nullptr) {
                    throw DependencyError(k, "adjoint series coefficient");
                }
                value = value + commutator_leading(inner, *qk);
            }
            if (opts_.g_cap) {
                value = truncate_g(value, *opts_.g_cap);
            }
        }
        return memo_.emplace(key, std::move(value)).first->second;
    }

private:
    const PhasePolynomial& h_;
    const QSeries& q_;
    const AdjointOptions& opts_;
    std::map<std::pair<int, int>, PhasePolynomial> memo_;
};

} // namespace

PhasePolynomial adjoint_series_coefficient(const PhasePolynomial& h_part, int eps_weight, const QSeries& qseries,
                                           int target_order, const AdjointOptions& options)
{
    const int total = target_order - eps_weight;
    if (total < 0) {
        return {};
    }
    AdjointTable table(h_part, qseries, options);
    PhasePolynomial sum;
    mpz_class m_factorial = 1;
    for (int m = 0; m <= total; ++m) {
        if (m > 0) {
            m_factorial *= m;
        }
        if (m < options.min_nesting || (total - m) % 2 != 0) {
            continue;
        }
        const PhasePolynomial& level = table.nested(m, total);
        if (!level.is_zero()) {
            sum = sum + scale(level, Coefficient(mpq_class(1, m_factorial)));
        }
    }
    if (options.g_cap) {
        sum = truncate_g(sum, *options.g_cap);
    }
    return sum;
}

PhasePolynomial epsilon_identity_rhs(int n, const QSeries& qseries, const HamiltonianSpec& spec)
{
    if (n < 0) {
        throw ArgumentError("order index n must be >= 0");
    }
    const int order = 2 * n + 1;
    AdjointOptions opts;
    if (qseries.mode() == GMode::first_order) {
        opts.g_cap = 1;
    }
    // -[e^{-Q} H0 e^Q]_N = [H1 + e^{-Q} H1 e^Q]_{N-1} + [e^{-Q} H2 e^Q - H2]_{N-2}, with the
    // single [H0, Q_N] term moved to the left-hand side.
    opts.min_nesting = 2;
    PhasePolynomial rhs = adjoint_series_coefficient(spec.h0, HamiltonianSpec::h0_weight, qseries, order, opts);
    opts.min_nesting = 0;
    rhs = rhs + adjoint_series_coefficient(spec.h1, HamiltonianSpec::h1_weight, qseries, order, opts);
    if (order == 1) {
        rhs = rhs + spec.h1;
    }
    opts.min_nesting = 1;
    rhs = rhs + adjoint_series_coefficient(spec.h2, HamiltonianSpec::h2_weight, qseries, order, opts);
    if (opts.g_cap) {
        rhs = truncate_g(rhs, *opts.g_cap);
    }
    return rhs;
}

NoAdmissibleSolution::NoAdmissibleSolution(PhasePolynomial residual)
    : std::runtime_error("no admissible solution of [Q, H0] = R; residual: " + to_text(residual)),
      residual_(std::move(residual))
{
}

PhasePolynomial solve_ad_h0(const PhasePolynomial& rhs, const HamiltonianSpec& spec)
{
    // [Q, H0] = i hbar {Q, H0}, so the classical target is S = -i R / hbar. With
    // H0 = p^2/2 + mu^2 x^2/2,
    //   {p^a x^b mu^c, H0} = b p^(a+1) x^(b-1) mu^c - a p^(a-1) x^(b+1) mu^(c+2),
    // which preserves the phase degree d = a + b and raises mu_exp - x_exp by one.
    // Within a class the admissible unknowns (b even, a odd) and the odd-x targets
    // form a square bidiagonal system, solved from the top x power down.
    using ClassKey = std::tuple<int, int, int, int, int>; // g, lam, hbar, d, mu - x of the unknowns
    std::map<ClassKey, std::map<int, mpq_class>> targets_re;
    std::map<ClassKey, std::map<int, mpq_class>> targets_im;
    for (const auto& t : rhs.terms()) {
        const Monomial& m = t.mono;
        const int d = m.x + m.p;
        if (m.x % 2 == 0 || m.p % 2 != 0) {
            continue; // left for the residual check
        }
        const Coefficient s = t.coeff * Coefficient(0, -1);
        const ClassKey key{m.g, m.lam, m.hbar - 1, d, m.mu - m.x - 1};
        targets_re[key][m.x] = s.re();
        targets_im[key][m.x] = s.im();
    }

    std::vector<Term> solution;
    for (const auto& [key, re_by_x] : targets_re) {
        const auto& im_by_x = targets_im.at(key);
        const auto [g, lam, hbar, d, shift] = key;
        Coefficient upper; // q_{b'+1}
        for (int bt = d; bt >= 1; bt -= 2) {
            Coefficient s;
            if (auto it = re_by_x.find(bt); it != re_by_x.end()) {
                s = Coefficient(it->second, im_by_x.at(bt));
            }
            Coefficient lower = upper;
            lower *= mpq_class(bt + 1);
            lower -= s;
            lower /= mpq_class(d - bt + 1);
            const int b = bt - 1;
            solution.push_back({Monomial{b, d - b, g, lam, shift + b, hbar}, lower});
            upper = std::move(lower);
        }
    }
    PhasePolynomial q(std::move(solution));
    PhasePolynomial residual = rhs - commutator_leading(q, spec.h0);
    if (!residual.is_zero()) {
        throw NoAdmissibleSolution(std::move(residual));
    }
    return q;
}

QSeries extend_q(QSeries series, int max_n, const HamiltonianSpec& spec)
{
    if (max_n < 0) {
        throw ArgumentError("max_n must be >= 0");
    }
    for (int n = static_cast<int>(series.size()); n <= max_n; ++n) {
        PhasePolynomial q = solve_ad_h0(epsilon_identity_rhs(n, series, spec), spec);
        if (series.mode() == GMode::first_order) {
            q = truncate_g(q, 1);
        }
        series = series.with_appended(std::move(q));
    }
    return series;
}

QSeries compute_q(int max_n, GMode mode, const HamiltonianSpec& spec) { return extend_q(QSeries(mode), max_n, spec); }

mpz_class factorial(unsigned long n)
{
    mpz_class out;
    mpz_fac_ui(out.get_mpz_t(), n);
    return out;
}

PhasePolynomial closed_form_term(int n) { return closed_form_term(n, factorial); }

PhasePolynomial closed_form_term(int n, const FactorialFn& fact)
{
    if (n < 0) {
        throw ArgumentError("closed_form_term requires n >= 0");
    }
    const auto un = static_cast<unsigned long>(n);
    std::vector<Term> terms;
    for (unsigned long k = 0; k <= un + 1; ++k) {
        mpz_class num = fact(2 * un - k + 2);
        mpz_class den = fact(k) * fact(2 * un - 2 * k + 3);
        // 2^(3n+2) / 2^k
        num <<= 3 * un + 2 - k;
        mpq_class c(-num, den);
        c.canonicalize();
        const int ki = static_cast<int>(k);
        terms.push_back({Monomial{2 * ki, 2 * n - 2 * ki + 3, 1, n, 2 * ki - 4 * n - 4, -1}, Coefficient(c)});
    }
    return PhasePolynomial(std::move(terms));
}

PhasePolynomial verify_even_order(int m, const QSeries& qseries, const HamiltonianSpec& spec)
{
    if (m < 1) {
        throw ArgumentError("even order index m must be >= 1");
    }
    const int order = 2 * m;
    AdjointOptions opts;
    opts.min_nesting = 1;
    if (qseries.mode() == GMode::first_order) {
        opts.g_cap = 2;
    }
    PhasePolynomial res = adjoint_series_coefficient(spec.h0, HamiltonianSpec::h0_weight, qseries, order, opts);
    res = res + adjoint_series_coefficient(spec.h1, HamiltonianSpec::h1_weight, qseries, order, opts);
    res = res + adjoint_series_coefficient(spec.h2, HamiltonianSpec::h2_weight, qseries, order, opts);
    return res;
}

nlohmann::json to_json(const QSeries& series)
{
    auto records = nlohmann::json::array();
    for (std::size_t n = 0; n < series.size(); ++n) {
        records.push_back({{"mode", std::string(to_string(series.mode()))},
                           {"n", n},
                           {"order", 2 * n + 1},
                           {"terms", to_json(series.term(n))}});
    }
    return records;
}

QSeries qseries_from_json(const nlohmann::json& j)
{
    if (!j.is_array() || j.empty()) {
        throw ArgumentError("QSeries JSON must be a non-empty array of order records");
    }
    const GMode mode = parse_gmode(j.front().at("mode").get<std::string>());
    std::vector<PhasePolynomial> terms;
    for (const auto& rec : j) {
        if (parse_gmode(rec.at("mode").get<std::string>()) != mode) {
            throw ArgumentError("QSeries JSON mixes modes");
        }
        if (rec.at("n").get<std::size_t>() != terms.size()) {
            throw ArgumentError("QSeries JSON orders must be contiguous from n = 0");
        }
        terms.push_back(polynomial_from_json(rec.at("terms")));
    }
    return QSeries(mode, std::move(terms));
}

std::string to_text(const QSeries& series)
{
    std::string out;
    for (std::size_t n = 0; n < series.size(); ++n) {
        out += "Q_" + std::to_string(2 * n + 1) + " = " + to_text(series.term(n)) + "\n";
    }
    return out;
}

namespace {

std::string latex_power(const char* symbol, int exponent)
{
    if (exponent == 0) {
        return "";
    }
    if (exponent != 1) {
        return std::string(symbol) + "^{" + std::to_string(exponent) + "}";
    }
    // A bare control word needs a separator before a following letter.
    return symbol[0] == '\\' ? std::string(symbol) + " " : std::string(symbol);
}

// "-\frac{4^{2}\lambda g}{\mu^{8}\hbar}\Big[\frac{2}{5}p^{5}+\mu^{2}p^{3}x^{2}+...\Big]"
std::string latex_group(const std::vector<Term>& group, int n, bool first)
{
    const bool real = std::all_of(group.begin(), group.end(), [](const Term& t) { return t.coeff.is_real(); });
    const int hbar = group.front().mono.hbar;
    const bool uniform_hbar =
        std::all_of(group.begin(), group.end(), [&](const Term& t) { return t.mono.hbar == hbar; });
    if (!real || !uniform_hbar) {
        const std::string body = to_latex(PhasePolynomial(group));
        return (first || body.front() == '-') ? body : "+" + body;
    }
    int mu_min = group.front().mono.mu;
    for (const auto& t : group) {
        mu_min = std::min(mu_min, t.mono.mu);
    }
    // Bracket terms by descending p power; the prefactor sign makes the first one positive.
    std::vector<Term> sorted = group;
    std::sort(sorted.begin(), sorted.end(), [](const Term& a, const Term& b) { return a.mono.p > b.mono.p; });
    mpz_class four_pow;
    mpz_ui_pow_ui(four_pow.get_mpz_t(), 4, static_cast<unsigned long>(n + 1));
    const bool negative = sgn(sorted.front().coeff.re()) < 0;
    mpq_class factor(negative ? -four_pow : four_pow);

    std::string numer = n == 0 ? "4" : "4^{" + std::to_string(n + 1) + "}";
    numer += latex_power("\\lambda", group.front().mono.lam);
    numer += latex_power("g", group.front().mono.g);
    numer += latex_power("\\mu", std::max(mu_min, 0));
    numer += latex_power("\\hbar", std::max(hbar, 0));
    std::string denom = latex_power("\\mu", std::max(-mu_min, 0)) + latex_power("\\hbar", std::max(-hbar, 0));
    for (std::string* part : {&numer, &denom}) {
        while (!part->empty() && part->back() == ' ') {
            part->pop_back();
        }
    }

    std::string out = negative ? "-" : (first ? "" : "+");
    out += denom.empty() ? numer : "\\frac{" + numer + "}{" + denom + "}";
    out += "\\Big[";
    bool first_term = true;
    for (const auto& t : sorted) {
        mpq_class c = t.coeff.re() / factor;
        std::string coeff = latex_rational(c);
        if (coeff == "1") {
            coeff.clear();
        } else if (coeff == "-1") {
            coeff = "-";
        }
        if (!first_term && sgn(c) > 0) {
            out += "+";
        }
        out += coeff + latex_power("\\mu", t.mono.mu - mu_min) + latex_power("p", t.mono.p) +
               latex_power("x", t.mono.x);
        first_term = false;
    }
    out += "\\Big]";
    return out;
}

} // namespace

std::string to_latex(const QSeries& series)
{
    std::string out;
    for (std::size_t n = 0; n < series.size(); ++n) {
        out += "\\begin{equation}\nQ_{" + std::to_string(2 * n + 1) + "}=";
        const PhasePolynomial& q = series.term(n);
        if (q.is_zero()) {
            out += "0";
        }
        // Groups in order of increasing g power (decreasing lam), as printed in the literature.
        std::map<std::pair<int, int>, std::vector<Term>> groups;
        for (const auto& t : q.terms()) {
            groups[{t.mono.g, -t.mono.lam}].push_back(t);
        }
        bool first = true;
        for (const auto& [key, group] : groups) {
            out += latex_group(group, static_cast<int>(n), first);
            first = false;
        }
        out += "\n\\end{equation}\n";
    }
    return out;
}

} // namespace ptq
