#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ptq/phase_polynomial.hpp"

namespace ptq::published {

// Literal transcriptions of previously printed low-order generators. They are
// reference data for the reconciliation report; the engine never reads them.

PhasePolynomial q1();
/// Both the lam g and g^3 brackets.
PhasePolynomial q3_full();
/// As printed, including the coefficients the reconciliation flags. The
/// garbled "2\ mu^2" token is read as 2 mu^2.
PhasePolynomial q5_full();
/// First order in g.
PhasePolynomial q7_first_order();
PhasePolynomial q9_first_order();

struct CoefficientDiff {
    Monomial mono;
    Coefficient printed;
    Coefficient computed;
};

/// Every monomial whose coefficient differs, in monomial order.
std::vector<CoefficientDiff> diff(const PhasePolynomial& printed, const PhasePolynomial& computed);

nlohmann::json to_json(const std::vector<CoefficientDiff>& diffs);

/// Human-readable listing; "no discrepancies" when empty.
std::string to_text(const std::vector<CoefficientDiff>& diffs);

} // namespace ptq::published
