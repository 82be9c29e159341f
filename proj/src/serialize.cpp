#include "ptq/serialize.hpp"

#include "ptq/errors.hpp"

namespace ptq {

std::string to_text(const PhasePolynomial& p)
{
    if (p.is_zero()) {
        return "0";
    }
    std::string out;
    for (const auto& t : p.terms()) {
        if (!out.empty()) {
            out += " + ";
        }
        out += t.coeff.to_string();
        out += " * ";
        out += t.mono.to_string();
    }
    return out;
}

nlohmann::json to_json(const PhasePolynomial& p)
{
    auto arr = nlohmann::json::array();
    for (const auto& t : p.terms()) {
        arr.push_back({
            {"coeff_re", t.coeff.re().get_str()},
            {"coeff_im", t.coeff.im().get_str()},
            {"exponents",
             {{"x", t.mono.x}, {"p", t.mono.p}, {"g", t.mono.g}, {"lam", t.mono.lam}, {"mu", t.mono.mu},
              {"hbar", t.mono.hbar}}},
        });
    }
    return arr;
}

PhasePolynomial polynomial_from_json(const nlohmann::json& j)
{
    if (!j.is_array()) {
        throw ArgumentError("polynomial JSON must be an array");
    }
    std::vector<Term> terms;
    for (const auto& rec : j) {
        const auto& e = rec.at("exponents");
        Monomial m{e.at("x").get<int>(),   e.at("p").get<int>(),  e.at("g").get<int>(),
                   e.at("lam").get<int>(), e.at("mu").get<int>(), e.at("hbar").get<int>()};
        const auto re = Coefficient::parse(rec.at("coeff_re").get<std::string>());
        const auto im = Coefficient::parse(rec.at("coeff_im").get<std::string>());
        terms.push_back({m, Coefficient(re.re(), im.re())});
    }
    return PhasePolynomial(std::move(terms));
}

std::string latex_rational(const mpq_class& q)
{
    if (q.get_den() == 1) {
        return q.get_num().get_str();
    }
    const std::string sign = sgn(q) < 0 ? "-" : "";
    mpz_class num = abs(q.get_num());
    return sign + "\\frac{" + num.get_str() + "}{" + q.get_den().get_str() + "}";
}

namespace {

void append_power(std::string& out, const char* symbol, int exponent)
{
    if (exponent == 0) {
        return;
    }
    out += symbol;
    if (exponent != 1) {
        out += "^{" + std::to_string(exponent) + "}";
    } else if (symbol[0] == '\\') {
        out += " ";
    }
}

} // namespace

std::string latex_monomial(const Monomial& m)
{
    std::string out;
    append_power(out, "g", m.g);
    append_power(out, "\\lambda", m.lam);
    append_power(out, "\\mu", m.mu);
    append_power(out, "\\hbar", m.hbar);
    append_power(out, "p", m.p);
    append_power(out, "x", m.x);
    while (!out.empty() && out.back() == ' ') {
        out.pop_back();
    }
    return out;
}

std::string to_latex(const PhasePolynomial& p)
{
    if (p.is_zero()) {
        return "0";
    }
    std::string out;
    for (const auto& t : p.terms()) {
        std::string coeff;
        if (t.coeff.is_real()) {
            coeff = latex_rational(t.coeff.re());
        } else if (t.coeff.is_imaginary()) {
            coeff = latex_rational(t.coeff.im()) + "i";
        } else {
            std::string im = latex_rational(t.coeff.im());
            if (im.front() != '-') {
                im.insert(im.begin(), '+');
            }
            coeff = "\\left(" + latex_rational(t.coeff.re()) + im + "i\\right)";
        }
        const std::string sym = latex_monomial(t.mono);
        if (!sym.empty() && (coeff == "1" || coeff == "-1")) {
            coeff.pop_back();
        } else if (!sym.empty() && coeff == "1i") {
            coeff = "i";
        } else if (!sym.empty() && coeff == "-1i") {
            coeff = "-i";
        }
        if (!out.empty() && coeff.front() != '-') {
            out += "+";
        }
        out += coeff;
        if (!sym.empty()) {
            out += (coeff.empty() || coeff == "-") ? sym : " " + sym;
        }
    }
    return out;
}

} // namespace ptq
