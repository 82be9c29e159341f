#include <doctest.h>

#include "ptq/errors.hpp"
#include "ptq/perturbation.hpp"
#include "ptq/published.hpp"

using namespace ptq;

namespace {

PhasePolynomial mono(long num, long den, Monomial m) { return PhasePolynomial::term(Coefficient::rational(num, den), m); }

PhasePolynomial with_lam(const PhasePolynomial& p, int lam)
{
    std::vector<Term> kept;
    for (const auto& t : p.terms()) {
        if (t.mono.lam == lam) {
            kept.push_back(t);
        }
    }
    return PhasePolynomial(std::move(kept));
}

PhasePolynomial cl(const PhasePolynomial& a, const PhasePolynomial& b) { return commutator_leading(a, b); }

const HamiltonianSpec spec = HamiltonianSpec::standard();

} // namespace

TEST_CASE("Hamiltonian parts have the expected PT parity")
{
    CHECK(parity_transform(spec.h0) == spec.h0);
    CHECK(parity_transform(spec.h1) == -spec.h1);
    CHECK(parity_transform(spec.h2) == spec.h2);
}

TEST_CASE("gmode names")
{
    CHECK(parse_gmode("full-g") == GMode::full);
    CHECK(parse_gmode("first-order-g") == GMode::first_order);
    CHECK(to_string(GMode::first_order) == "first-order-g");
    CHECK_THROWS_AS(parse_gmode("full"), ArgumentError);
}

TEST_CASE("adjoint_series_coefficient")
{
    const QSeries q1_only(GMode::full, {published::q1()});

    CHECK(adjoint_series_coefficient(spec.h0, 0, q1_only, 0) == spec.h0);
    CHECK(adjoint_series_coefficient(spec.h0, 0, q1_only, 1) == cl(spec.h0, published::q1()));

    // eps^2 from H0 alone: (1/2!) [[H0, Q1], Q1].
    AdjointOptions nested;
    nested.min_nesting = 2;
    const auto expected = Coefficient::rational(1, 2) * cl(cl(spec.h0, published::q1()), published::q1());
    CHECK(adjoint_series_coefficient(spec.h0, 0, q1_only, 2, nested) == expected);

    // eps^3 from H0 needs Q3.
    try {
        (void)adjoint_series_coefficient(spec.h0, 0, q1_only, 3);
        FAIL("expected DependencyError");
    } catch (const DependencyError& e) {
        CHECK(e.missing_order() == 3);
    }
    CHECK(adjoint_series_coefficient(spec.h2, 2, q1_only, 1).is_zero());
}

TEST_CASE("epsilon_identity_rhs")
{
    const QSeries empty(GMode::full);
    CHECK(epsilon_identity_rhs(0, empty, spec) == PhasePolynomial::term(Coefficient(0, 2), {.x = 3, .g = 1}));

    const QSeries q1_first(GMode::first_order, {published::q1()});
    CHECK(epsilon_identity_rhs(1, q1_first, spec) == cl(spec.h2, published::q1()));

    // Full g adds (1/3!)[[[H0,Q1],Q1],Q1] + (1/2!)[[H1,Q1],Q1].
    const QSeries q1_full(GMode::full, {published::q1()});
    const auto& q1 = published::q1();
    const auto full = cl(spec.h2, q1) + Coefficient::rational(1, 6) * cl(cl(cl(spec.h0, q1), q1), q1) +
                      Coefficient::rational(1, 2) * cl(cl(spec.h1, q1), q1);
    CHECK(epsilon_identity_rhs(1, q1_full, spec) == full);

    CHECK_THROWS_AS(epsilon_identity_rhs(2, q1_full, spec), DependencyError);
    CHECK_THROWS_AS(epsilon_identity_rhs(-1, q1_full, spec), ArgumentError);
}

TEST_CASE("solve_ad_h0")
{
    const auto q1 = solve_ad_h0(PhasePolynomial::term(Coefficient(0, 2), {.x = 3, .g = 1}), spec);
    CHECK(q1 == published::q1());
    CHECK(q1 == mono(-4, 3, {.p = 3, .g = 1, .mu = -4, .hbar = -1}) + mono(-2, 1, {.x = 2, .p = 1, .g = 1, .mu = -2, .hbar = -1}));

    CHECK(solve_ad_h0(PhasePolynomial{}, spec).is_zero());

    const auto q3_lam = solve_ad_h0(cl(spec.h2, published::q1()), spec);
    CHECK(q3_lam == with_lam(published::q3_full(), 1));
    CHECK(cl(q3_lam, spec.h0) == cl(spec.h2, published::q1()));

    // Even in x: outside the image of ad_H0 on admissible generators.
    const auto bad = mono(1, 1, {.x = 2, .g = 1});
    try {
        (void)solve_ad_h0(bad, spec);
        FAIL("expected NoAdmissibleSolution");
    } catch (const NoAdmissibleSolution& e) {
        CHECK_FALSE(e.residual().is_zero());
    }
}

TEST_CASE("compute_q reproduces the low orders")
{
    const auto full = compute_q(2, GMode::full, spec);
    REQUIRE(full.size() == 3);
    CHECK(full.term(0) == published::q1());
    CHECK(full.term(1) == published::q3_full());
    CHECK(published::diff(published::q5_full(), full.term(2)).empty());

    const auto first = compute_q(2, GMode::first_order, spec);
    CHECK(first.term(0) == full.term(0));
    CHECK(first.term(1) == truncate_g(published::q3_full(), 1));
    CHECK(first.term(2) == truncate_g(published::q5_full(), 1));
    CHECK(*first.by_order(5) == first.term(2));
    CHECK(first.by_order(7) == nullptr);
    CHECK_FALSE(full.invariant_violation().has_value());
    CHECK_FALSE(first.invariant_violation().has_value());
}

TEST_CASE("extend_q continues an existing series")
{
    const auto short_series = compute_q(1, GMode::first_order, spec);
    const auto extended = extend_q(short_series, 4, spec);
    CHECK(extended.terms() == compute_q(4, GMode::first_order, spec).terms());
}

TEST_CASE("every solved order satisfies its defining identity")
{
    const auto full = compute_q(3, GMode::full, spec);
    for (int n = 0; n < 4; ++n) {
        CHECK(cl(full.term(n), spec.h0) == epsilon_identity_rhs(n, full, spec));
        CHECK(parity_flags(full.term(n)) == ParityFlags{true, true});
        for (const auto& t : full.term(n).terms()) {
            CHECK(t.mono.hbar == -1);
            CHECK(t.mono.g % 2 == 1);
        }
    }
    const auto first = compute_q(8, GMode::first_order, spec);
    for (int n = 0; n < 9; ++n) {
        CHECK(cl(first.term(n), spec.h0) == epsilon_identity_rhs(n, first, spec));
        for (const auto& t : first.term(n).terms()) {
            CHECK(t.mono.g == 1);
            CHECK(t.mono.lam == n);
            CHECK(t.mono.phase_degree() == 2 * n + 3);
        }
    }
}

TEST_CASE("closed_form_term")
{
    CHECK(closed_form_term(0) == published::q1());
    CHECK(closed_form_term(1) == with_lam(published::q3_full(), 1));
    CHECK(closed_form_term(3) == published::q7_first_order());
    CHECK(closed_form_term(4) == published::q9_first_order());
    CHECK_THROWS_AS(closed_form_term(-1), ArgumentError);

    const auto series = compute_q(12, GMode::first_order, spec);
    for (int n = 0; n <= 12; ++n) {
        CHECK(closed_form_term(n) == series.term(static_cast<std::size_t>(n)));
    }

    const FactorialFn faulty = [](unsigned long k) { return k == 5 ? factorial(5) + 1 : factorial(k); };
    CHECK(closed_form_term(1, faulty) != closed_form_term(1));
    CHECK(factorial(0) == 1);
    CHECK(factorial(10) == 3628800);
}

TEST_CASE("even-order residual vanishes")
{
    const auto full = compute_q(1, GMode::full, spec);
    const auto& q1 = full.term(0);
    const auto& q3 = full.term(1);

    // Independent assembly of the eps^2 and eps^4 coefficients.
    const auto eps2 = Coefficient::rational(1, 2) * cl(cl(spec.h0, q1), q1) + cl(spec.h1, q1);
    const auto eps4 = Coefficient::rational(1, 2) * (cl(cl(spec.h0, q1), q3) + cl(cl(spec.h0, q3), q1)) +
                      Coefficient::rational(1, 24) * cl(cl(cl(cl(spec.h0, q1), q1), q1), q1) + cl(spec.h1, q3) +
                      Coefficient::rational(1, 6) * cl(cl(cl(spec.h1, q1), q1), q1) +
                      Coefficient::rational(1, 2) * cl(cl(spec.h2, q1), q1);
    CHECK(eps2.is_zero());
    CHECK(eps4.is_zero());
    CHECK(verify_even_order(1, full, spec).is_zero());
    CHECK(verify_even_order(2, full, spec).is_zero());

    const auto first = compute_q(2, GMode::first_order, spec);
    CHECK(verify_even_order(1, first, spec).is_zero());
    CHECK(verify_even_order(2, first, spec).is_zero());
    CHECK(verify_even_order(3, first, spec).is_zero());
}

TEST_CASE("even-order check catches a corrupted Q1")
{
    auto terms = compute_q(1, GMode::full, spec).terms();
    // p^3 coefficient -4/3 becomes -2.
    terms[0] = terms[0] + mono(-2, 3, {.p = 3, .g = 1, .mu = -4, .hbar = -1});
    const QSeries corrupted(GMode::full, terms);
    CHECK_FALSE(verify_even_order(1, corrupted, spec).is_zero());
    CHECK_THROWS_AS(verify_even_order(0, corrupted, spec), ArgumentError);
}

TEST_CASE("QSeries JSON round trip and LaTeX")
{
    const auto series = compute_q(3, GMode::first_order, spec);
    const auto back = qseries_from_json(to_json(series));
    CHECK(back.mode() == series.mode());
    CHECK(back.terms() == series.terms());
    CHECK(to_json(series)[2]["order"] == 5);

    const auto latex = to_latex(compute_q(0, GMode::full, spec));
    CHECK_MESSAGE(latex.find("Q_{1}=-\\frac{4g}{\\mu^{4}\\hbar}\\Big[\\frac{1}{3}p^{3}+\\frac{1}{2}\\mu^{2}px^{2}\\Big]") != std::string::npos, latex);
}

TEST_CASE("published reconciliation diff")
{
    const auto computed = compute_q(2, GMode::full, spec).term(2);
    CHECK(published::diff(published::q5_full(), computed).empty());
    CHECK(published::to_text({}).find("no discrepancies") != std::string::npos);

    const auto tweaked = computed + mono(1, 1, {.x = 2, .p = 5, .g = 1, .lam = 2, .mu = -8, .hbar = -1});
    const auto diffs = published::diff(published::q5_full(), tweaked);
    REQUIRE(diffs.size() == 1);
    CHECK(diffs[0].mono == Monomial{.x = 2, .p = 5, .g = 1, .lam = 2, .mu = -8, .hbar = -1});
}
