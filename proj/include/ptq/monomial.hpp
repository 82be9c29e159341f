#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace ptq {

/// Power product x^x p^p g^g lam^lam mu^mu hbar^hbar.
///
/// Monomials are totally ordered lexicographically over the field tuple
/// (x, p, g, lam, mu, hbar), ascending. Serialized polynomials list their terms
/// in this order. x, p, g and lam exponents are non-negative; mu and hbar may be
/// negative.
struct Monomial {
    std::int32_t x = 0;
    std::int32_t p = 0;
    std::int32_t g = 0;
    std::int32_t lam = 0;
    std::int32_t mu = 0;
    std::int32_t hbar = 0;

    friend auto operator<=>(const Monomial&, const Monomial&) = default;
    friend bool operator==(const Monomial&, const Monomial&) = default;

    /// Total degree in the phase-space variables.
    int phase_degree() const noexcept { return x + p; }

    bool is_valid() const noexcept { return x >= 0 && p >= 0 && g >= 0 && lam >= 0; }

    friend Monomial operator*(const Monomial& a, const Monomial& b) noexcept
    {
        return {a.x + b.x, a.p + b.p, a.g + b.g, a.lam + b.lam, a.mu + b.mu, a.hbar + b.hbar};
    }

    /// Canonical text: "x^i p^j g^a lam^b mu^c hbar^d" (all six factors always present).
    std::string to_string() const;
};

} // namespace ptq
