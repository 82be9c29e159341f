#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "ptq/coefficient.hpp"
#include "ptq/monomial.hpp"
#include "ptq/params.hpp"

namespace ptq {

struct Term {
    Monomial mono;
    Coefficient coeff;

    friend bool operator==(const Term&, const Term&) = default;
};

/// Sparse polynomial in x, p with symbolic parameters g, lam, mu, hbar and
/// exact Gaussian-rational coefficients.
///
/// Immutable once built. Terms are kept sorted by Monomial order with unique
/// monomials and no zero coefficients, so equal polynomials compare equal
/// term-by-term and serialize identically.
class PhasePolynomial {
public:
    PhasePolynomial() = default;
    /// Canonicalizes: merges repeated monomials, drops zeros, sorts.
    explicit PhasePolynomial(std::vector<Term> terms);

    static PhasePolynomial term(Coefficient c, Monomial m);

    std::span<const Term> terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    /// Coefficient of m, zero if absent.
    Coefficient coefficient(const Monomial& m) const;

    friend bool operator==(const PhasePolynomial&, const PhasePolynomial&) = default;

private:
    struct Sorted {};
    PhasePolynomial(Sorted, std::vector<Term> terms) : terms_(std::move(terms)) {}

    friend PhasePolynomial add(const PhasePolynomial&, const PhasePolynomial&);
    friend PhasePolynomial scale(const PhasePolynomial&, const Coefficient&);

    std::vector<Term> terms_;
};

PhasePolynomial add(const PhasePolynomial& a, const PhasePolynomial& b);
PhasePolynomial sub(const PhasePolynomial& a, const PhasePolynomial& b);
PhasePolynomial mul(const PhasePolynomial& a, const PhasePolynomial& b);
PhasePolynomial scale(const PhasePolynomial& a, const Coefficient& c);

inline PhasePolynomial operator+(const PhasePolynomial& a, const PhasePolynomial& b) { return add(a, b); }
inline PhasePolynomial operator-(const PhasePolynomial& a, const PhasePolynomial& b) { return sub(a, b); }
inline PhasePolynomial operator-(const PhasePolynomial& a) { return scale(a, Coefficient(-1)); }
inline PhasePolynomial operator*(const PhasePolynomial& a, const PhasePolynomial& b) { return mul(a, b); }
inline PhasePolynomial operator*(const Coefficient& c, const PhasePolynomial& a) { return scale(a, c); }

/// Classical bracket {F, G} = dF/dx dG/dp - dF/dp dG/dx. On monomials
/// {p^a x^b, p^c x^d} = (bc - ad) p^(a+c-1) x^(b+d-1); parameter exponents add.
PhasePolynomial poisson_bracket(const PhasePolynomial& f, const PhasePolynomial& g);

/// Leading-order semiclassical commutator [F, G] = i hbar {F, G}.
PhasePolynomial commutator_leading(const PhasePolynomial& f, const PhasePolynomial& g);

struct ParityFlags {
    bool even_in_x = true;
    bool odd_in_p = true;

    friend bool operator==(const ParityFlags&, const ParityFlags&) = default;
};

ParityFlags parity_flags(const PhasePolynomial& p);

/// Image under x -> -x, p -> -p.
PhasePolynomial parity_transform(const PhasePolynomial& p);

/// Drops every term whose g exponent exceeds max_g.
PhasePolynomial truncate_g(const PhasePolynomial& p, int max_g);

struct PowerFactor {
    double base;
    int exponent;
};

/// c * prod base^exponent. Falls back to log space when the direct product
/// over- or underflows although the result is representable (huge factorial
/// ratios times tiny parameter powers at high orders).
double scaled_product(const mpq_class& c, std::span<const PowerFactor> factors);

/// Numeric value at (params, point). Epsilon does not appear in the algebra
/// and is ignored here. Throws DomainError if a symbol with a negative
/// exponent is evaluated at zero.
std::complex<double> eval_numeric(const PhasePolynomial& p, const EvalParams& params, const PhasePoint& point);

} // namespace ptq
