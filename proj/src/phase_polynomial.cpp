#include "ptq/phase_polynomial.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <string>

#include "ptq/errors.hpp"

namespace ptq {

std::string Monomial::to_string() const
{
    return "x^" + std::to_string(x) + " p^" + std::to_string(p) + " g^" + std::to_string(g) + " lam^" +
           std::to_string(lam) + " mu^" + std::to_string(mu) + " hbar^" + std::to_string(hbar);
}

void validate(const EvalParams& params)
{
    if (!(params.lambda >= 0.0)) {
        throw ArgumentError("lambda must be >= 0");
    }
    if (!(params.mu > 0.0)) {
        throw ArgumentError("mu must be > 0");
    }
    if (!(params.epsilon > 0.0)) {
        throw ArgumentError("epsilon must be > 0");
    }
    if (!(params.hbar > 0.0)) {
        throw ArgumentError("hbar must be > 0");
    }
    if (!std::isfinite(params.g)) {
        throw ArgumentError("g must be finite");
    }
}

namespace {

bool by_monomial(const Term& a, const Term& b) { return a.mono < b.mono; }

// Sort, merge equal monomials and drop zeros, in place.
void canonicalize(std::vector<Term>& terms)
{
    std::sort(terms.begin(), terms.end(), by_monomial);
    auto out = terms.begin();
    for (auto it = terms.begin(); it != terms.end();) {
        auto run = it + 1;
        while (run != terms.end() && run->mono == it->mono) {
            it->coeff += run->coeff;
            ++run;
        }
        if (!it->coeff.is_zero()) {
            if (out != it) {
                *out = std::move(*it);
            }
            ++out;
        }
        it = run;
    }
    terms.erase(out, terms.end());
}

} // namespace

PhasePolynomial::PhasePolynomial(std::vector<Term> terms) : terms_(std::move(terms))
{
    for (const auto& t : terms_) {
        if (!t.mono.is_valid()) {
            throw ArgumentError("negative exponent for x, p, g or lam in monomial " + t.mono.to_string());
        }
    }
    canonicalize(terms_);
}

PhasePolynomial PhasePolynomial::term(Coefficient c, Monomial m)
{
    std::vector<Term> v;
    v.push_back({m, std::move(c)});
    return PhasePolynomial(std::move(v));
}

Coefficient PhasePolynomial::coefficient(const Monomial& m) const
{
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& key) { return t.mono < key; });
    if (it != terms_.end() && it->mono == m) {
        return it->coeff;
    }
    return {};
}

PhasePolynomial add(const PhasePolynomial& a, const PhasePolynomial& b)
{
    std::vector<Term> out;
    out.reserve(a.terms_.size() + b.terms_.size());
    auto ia = a.terms_.begin();
    auto ib = b.terms_.begin();
    while (ia != a.terms_.end() && ib != b.terms_.end()) {
        if (ia->mono < ib->mono) {
            out.push_back(*ia++);
        } else if (ib->mono < ia->mono) {
            out.push_back(*ib++);
        } else {
            Coefficient c = ia->coeff + ib->coeff;
            if (!c.is_zero()) {
                out.push_back({ia->mono, std::move(c)});
            }
            ++ia;
            ++ib;
        }
    }
    out.insert(out.end(), ia, a.terms_.end());
    out.insert(out.end(), ib, b.terms_.end());
    return PhasePolynomial(PhasePolynomial::Sorted{}, std::move(out));
}

PhasePolynomial scale(const PhasePolynomial& a, const Coefficient& c)
{
    if (c.is_zero()) {
        return {};
    }
    std::vector<Term> out = a.terms_;
    for (auto& t : out) {
        t.coeff *= c;
    }
    return PhasePolynomial(PhasePolynomial::Sorted{}, std::move(out));
}

PhasePolynomial sub(const PhasePolynomial& a, const PhasePolynomial& b) { return add(a, scale(b, Coefficient(-1))); }

PhasePolynomial mul(const PhasePolynomial& a, const PhasePolynomial& b)
{
    std::vector<Term> out;
    out.reserve(a.size() * b.size());
    for (const auto& ta : a.terms()) {
        for (const auto& tb : b.terms()) {
            out.push_back({ta.mono * tb.mono, ta.coeff * tb.coeff});
        }
    }
    return PhasePolynomial(std::move(out));
}

PhasePolynomial poisson_bracket(const PhasePolynomial& f, const PhasePolynomial& g)
{
    std::vector<Term> out;
    out.reserve(f.size() * g.size());
    for (const auto& tf : f.terms()) {
        const long a = tf.mono.p;
        const long b = tf.mono.x;
        for (const auto& tg : g.terms()) {
            const long c = tg.mono.p;
            const long d = tg.mono.x;
            const long factor = b * c - a * d;
            Monomial m = tf.mono * tg.mono;
            m.p -= 1;
            m.x -= 1;
            if (factor == 0) {
                continue;
            }
            // A nonzero factor needs (b or c) and (a or d) nonzero, so both exponents stay >= 0.
            assert(m.p >= 0 && m.x >= 0);
            Coefficient coeff = tf.coeff * tg.coeff;
            coeff *= mpq_class(factor);
            out.push_back({m, std::move(coeff)});
        }
    }
    return PhasePolynomial(std::move(out));
}

PhasePolynomial commutator_leading(const PhasePolynomial& f, const PhasePolynomial& g)
{
    std::vector<Term> out;
    const PhasePolynomial bracket = poisson_bracket(f, g);
    out.reserve(bracket.size());
    for (const auto& t : bracket.terms()) {
        Monomial m = t.mono;
        m.hbar += 1;
        out.push_back({m, t.coeff.times_i()});
    }
    return PhasePolynomial(std::move(out));
}

ParityFlags parity_flags(const PhasePolynomial& p)
{
    ParityFlags flags;
    for (const auto& t : p.terms()) {
        flags.even_in_x = flags.even_in_x && t.mono.x % 2 == 0;
        flags.odd_in_p = flags.odd_in_p && t.mono.p % 2 == 1;
    }
    return flags;
}

PhasePolynomial parity_transform(const PhasePolynomial& p)
{
    std::vector<Term> out(p.terms().begin(), p.terms().end());
    for (auto& t : out) {
        if ((t.mono.x + t.mono.p) % 2 != 0) {
            t.coeff = -t.coeff;
        }
    }
    return PhasePolynomial(std::move(out));
}

PhasePolynomial truncate_g(const PhasePolynomial& p, int max_g)
{
    std::vector<Term> out;
    for (const auto& t : p.terms()) {
        if (t.mono.g <= max_g) {
            out.push_back(t);
        }
    }
    return PhasePolynomial(std::move(out));
}

namespace {

void check_base(double base, int exponent, const char* symbol)
{
    if (exponent < 0 && base == 0.0) {
        throw DomainError(std::string("cannot evaluate ") + symbol + "^" + std::to_string(exponent) + " at " +
                          symbol + " = 0");
    }
}

} // namespace

double scaled_product(const mpq_class& c, std::span<const PowerFactor> factors)
{
    if (c == 0) {
        return 0.0;
    }
    double direct = c.get_d();
    for (const auto& f : factors) {
        if (f.exponent != 0) {
            direct *= std::pow(f.base, f.exponent);
        }
    }
    if (std::isfinite(direct) && direct != 0.0) {
        return direct;
    }
    // Some factor over- or underflowed on its own; redo the product in log space.
    double sign = 1.0;
    double log_mag = 0.0;
    for (const auto& f : factors) {
        if (f.exponent == 0) {
            continue;
        }
        if (f.base == 0.0) {
            return 0.0;
        }
        if (f.base < 0.0 && f.exponent % 2 != 0) {
            sign = -sign;
        }
        log_mag += f.exponent * std::log(std::abs(f.base));
    }
    long num_exp = 0;
    long den_exp = 0;
    const double num = mpz_get_d_2exp(&num_exp, c.get_num_mpz_t());
    const double den = mpz_get_d_2exp(&den_exp, c.get_den_mpz_t());
    log_mag += static_cast<double>(num_exp - den_exp) * std::numbers::ln2;
    return sign * (num / den) * std::exp(log_mag);
}

std::complex<double> eval_numeric(const PhasePolynomial& p, const EvalParams& params, const PhasePoint& point)
{
    std::complex<double> sum = 0.0;
    for (const auto& t : p.terms()) {
        const Monomial& m = t.mono;
        check_base(point.x, m.x, "x");
        check_base(point.p, m.p, "p");
        check_base(params.g, m.g, "g");
        check_base(params.lambda, m.lam, "lam");
        check_base(params.mu, m.mu, "mu");
        check_base(params.hbar, m.hbar, "hbar");
        const PowerFactor factors[] = {{point.x, m.x},        {point.p, m.p},   {params.g, m.g},
                                       {params.lambda, m.lam}, {params.mu, m.mu}, {params.hbar, m.hbar}};
        sum += std::complex<double>(scaled_product(t.coeff.re(), factors), scaled_product(t.coeff.im(), factors));
    }
    return sum;
}

} // namespace ptq
