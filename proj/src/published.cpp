#include "ptq/published.hpp"

#include <initializer_list>

namespace ptq::published {

namespace {

struct BracketTerm {
    long num;
    long den;
    int mu; // power of mu inside the bracket
    int p;
    int x;
};

// sign * 4^four_pow lam^lam g^g / (mu^mu_den hbar) * [ sum c mu^k p^a x^b ]
PhasePolynomial group(int sign, int four_pow, int lam, int g, int mu_den, std::initializer_list<BracketTerm> bracket)
{
    mpz_class pref;
    mpz_ui_pow_ui(pref.get_mpz_t(), 4, static_cast<unsigned long>(four_pow));
    std::vector<Term> terms;
    for (const auto& b : bracket) {
        mpq_class c(b.num, b.den);
        c.canonicalize();
        c *= sign * pref;
        terms.push_back({Monomial{b.x, b.p, g, lam, b.mu - mu_den, -1}, Coefficient(c)});
    }
    return PhasePolynomial(std::move(terms));
}

} // namespace

PhasePolynomial q1() { return group(-1, 1, 0, 1, 4, {{1, 3, 0, 3, 0}, {1, 2, 2, 1, 2}}); }

PhasePolynomial q3_full()
{
    return group(-1, 2, 1, 1, 8, {{2, 5, 0, 5, 0}, {1, 1, 2, 3, 2}, {1, 2, 4, 1, 4}}) +
           group(+1, 2, 0, 3, 10, {{8, 15, 0, 5, 0}, {5, 6, 2, 3, 2}, {1, 2, 4, 1, 4}});
}

PhasePolynomial q5_full()
{
    return group(-1, 3, 2, 1, 12, {{4, 7, 0, 7, 0}, {2, 1, 2, 5, 2}, {2, 1, 4, 3, 4}, {1, 2, 6, 1, 6}}) +
           group(+1, 3, 1, 3, 14, {{16, 7, 0, 7, 0}, {6, 1, 2, 5, 2}, {16, 3, 4, 3, 4}, {7, 4, 6, 1, 6}}) +
           group(-1, 3, 0, 5, 16, {{5, 3, 0, 7, 0}, {17, 6, 2, 5, 2}, {8, 3, 4, 3, 4}, {1, 1, 6, 1, 6}});
}

PhasePolynomial q7_first_order()
{
    return group(-1, 4, 3, 1, 16,
                 {{8, 9, 0, 9, 0}, {4, 1, 2, 7, 2}, {6, 1, 4, 5, 4}, {10, 3, 6, 3, 6}, {1, 2, 8, 1, 8}});
}

PhasePolynomial q9_first_order()
{
    return group(-1, 5, 4, 1, 20,
                 {{16, 11, 0, 11, 0},
                  {8, 1, 2, 9, 2},
                  {16, 1, 4, 7, 4},
                  {14, 1, 6, 5, 6},
                  {5, 1, 8, 3, 8},
                  {1, 2, 10, 1, 10}});
}

std::vector<CoefficientDiff> diff(const PhasePolynomial& printed, const PhasePolynomial& computed)
{
    std::vector<CoefficientDiff> out;
    auto a = printed.terms().begin();
    auto b = computed.terms().begin();
    const auto a_end = printed.terms().end();
    const auto b_end = computed.terms().end();
    while (a != a_end || b != b_end) {
        if (b == b_end || (a != a_end && a->mono < b->mono)) {
            out.push_back({a->mono, a->coeff, Coefficient()});
            ++a;
        } else if (a == a_end || b->mono < a->mono) {
            out.push_back({b->mono, Coefficient(), b->coeff});
            ++b;
        } else {
            if (!(a->coeff == b->coeff)) {
                out.push_back({a->mono, a->coeff, b->coeff});
            }
            ++a;
            ++b;
        }
    }
    return out;
}

nlohmann::json to_json(const std::vector<CoefficientDiff>& diffs)
{
    auto arr = nlohmann::json::array();
    for (const auto& d : diffs) {
        arr.push_back({{"monomial", d.mono.to_string()},
                       {"printed", d.printed.to_string()},
                       {"computed", d.computed.to_string()}});
    }
    return arr;
}

std::string to_text(const std::vector<CoefficientDiff>& diffs)
{
    if (diffs.empty()) {
        return "  no discrepancies\n";
    }
    std::string out;
    for (const auto& d : diffs) {
        out += "  " + d.mono.to_string() + ": printed " + d.printed.to_string() + ", computed " +
               d.computed.to_string() + "\n";
    }
    return out;
}

} // namespace ptq::published
