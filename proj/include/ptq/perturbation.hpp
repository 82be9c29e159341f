#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ptq/phase_polynomial.hpp"

namespace ptq {

/// H = H0 + eps H1 + eps^2 H2 with H0 = p^2/2 + mu^2 x^2/2, H1 = i g x^3,
/// H2 = -lam x^4. The eps weights are fixed at (0, 1, 2).
struct HamiltonianSpec {
    PhasePolynomial h0;
    PhasePolynomial h1;
    PhasePolynomial h2;

    static constexpr int h0_weight = 0;
    static constexpr int h1_weight = 1;
    static constexpr int h2_weight = 2;

    static HamiltonianSpec standard();
};

enum class GMode { full, first_order };

std::string_view to_string(GMode mode);
/// Accepts "full-g" and "first-order-g".
GMode parse_gmode(std::string_view text);

/// Leading-hbar generators Q_1, Q_3, ..., Q_{2n+1} of Q = sum eps^(2n+1) Q_{2n+1}.
class QSeries {
public:
    explicit QSeries(GMode mode = GMode::full) : mode_(mode) {}
    QSeries(GMode mode, std::vector<PhasePolynomial> terms) : mode_(mode), terms_(std::move(terms)) {}

    GMode mode() const noexcept { return mode_; }
    /// Number of stored orders; the last one is Q_{2 size() - 1}.
    std::size_t size() const noexcept { return terms_.size(); }
    const std::vector<PhasePolynomial>& terms() const noexcept { return terms_; }

    /// Q_{2n+1}.
    const PhasePolynomial& term(std::size_t n) const { return terms_.at(n); }
    /// Q_order for odd order; nullptr if not stored.
    const PhasePolynomial* by_order(int order) const;

    QSeries with_appended(PhasePolynomial q) const;

    /// Empty if the stored terms satisfy the parity, hbar and g-structure
    /// invariants, otherwise a description of the first violation.
    std::optional<std::string> invariant_violation() const;

private:
    GMode mode_;
    std::vector<PhasePolynomial> terms_;
};

struct AdjointOptions {
    /// Smallest number of nested commutators kept (0 keeps the bare H_part term).
    int min_nesting = 0;
    /// Intermediate results are truncated to g exponent <= g_cap when set.
    std::optional<int> g_cap;
};

/// Coefficient of eps^target_order in eps^eps_weight sum_m (1/m!) ad_Q^m(H_part),
/// ad_Q(X) = [X, Q], Q = sum_k eps^(2k+1) Q_{2k+1}, nested to the left.
/// Throws DependencyError if a needed Q is not in qseries.
PhasePolynomial adjoint_series_coefficient(const PhasePolynomial& h_part, int eps_weight, const QSeries& qseries,
                                           int target_order, const AdjointOptions& options = {});

/// Right-hand side R of [Q_{2n+1}, H0] = R at order eps^(2n+1).
/// Requires Q_1 ... Q_{2n-1} in qseries.
PhasePolynomial epsilon_identity_rhs(int n, const QSeries& qseries, const HamiltonianSpec& spec);

/// Unique Q, even in x and odd in p, with [Q, H0] = R (leading-order commutator).
/// Throws NoAdmissibleSolution when R is not in the image.
PhasePolynomial solve_ad_h0(const PhasePolynomial& rhs, const HamiltonianSpec& spec);

class NoAdmissibleSolution : public std::runtime_error {
public:
    explicit NoAdmissibleSolution(PhasePolynomial residual);
    const PhasePolynomial& residual() const noexcept { return residual_; }

private:
    PhasePolynomial residual_;
};

QSeries compute_q(int max_n, GMode mode, const HamiltonianSpec& spec);

/// Extends an existing series to max_n.
QSeries extend_q(QSeries series, int max_n, const HamiltonianSpec& spec);

using FactorialFn = std::function<mpz_class(unsigned long)>;

mpz_class factorial(unsigned long n);

/// Closed-form first-order-in-g generator
///   Q_{2n+1} = -g 2^(3n+2) lam^n / (mu^(4n+4) hbar) p
///              sum_{k=0}^{n+1} mu^(2k) (2n-k+2)! / (2^k k! (2n-2k+3)!) x^(2k) p^(2n-2k+2).
PhasePolynomial closed_form_term(int n);
/// Same, with a caller-supplied factorial (used to inject faults in tests).
PhasePolynomial closed_form_term(int n, const FactorialFn& fact);

/// Coefficient of eps^(2m) in the commutation condition, assembled from the
/// solved odd orders. Identically zero for a correct series. In first-order
/// mode the residual is truncated at g^2, the lowest order it populates.
PhasePolynomial verify_even_order(int m, const QSeries& qseries, const HamiltonianSpec& spec);

/// Array of {"mode", "n", "order", "terms"} records, one per stored order.
nlohmann::json to_json(const QSeries& series);
QSeries qseries_from_json(const nlohmann::json& j);

/// One display equation per order, grouped by powers of g and lam with the
/// hbar^-1, leading mu power and a +-4^(n+1) factor pulled out of each bracket.
std::string to_latex(const QSeries& series);

/// Plain text, one "Q_k = <canonical text>" line per order.
std::string to_text(const QSeries& series);

} // namespace ptq
