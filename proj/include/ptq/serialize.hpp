#pragma once

#include <string>

#include <json.hpp>

#include "ptq/phase_polynomial.hpp"

namespace ptq {

/// Canonical plain text: terms "coeff * x^i p^j g^a lam^b mu^c hbar^d" joined
/// by " + " in monomial order; "0" for the zero polynomial.
std::string to_text(const PhasePolynomial& p);

/// Array of {"coeff_re", "coeff_im", "exponents"} records; coefficient parts
/// are exact rational strings ("-4/3").
nlohmann::json to_json(const PhasePolynomial& p);
PhasePolynomial polynomial_from_json(const nlohmann::json& j);

/// LaTeX sum of terms, e.g. "-\frac{4}{3} g\mu^{-4}\hbar^{-1}p^{3}".
std::string to_latex(const PhasePolynomial& p);

/// LaTeX for an exact rational with an explicit sign handled by the caller.
std::string latex_rational(const mpq_class& q);

/// LaTeX for the product of symbols in m (no coefficient). Empty for the unit monomial.
std::string latex_monomial(const Monomial& m);

} // namespace ptq
