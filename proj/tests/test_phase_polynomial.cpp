#include <doctest.h>

#include <random>

#include "ptq/errors.hpp"
#include "ptq/perturbation.hpp"
#include "ptq/serialize.hpp"
#include "test_support.hpp"

using namespace ptq;

namespace {

PhasePolynomial mono(long num, long den, Monomial m) { return PhasePolynomial::term(Coefficient::rational(num, den), m); }

PhasePolynomial imono(long num, long den, Monomial m)
{
    return PhasePolynomial::term(Coefficient(0, mpq_class(num, den)), m);
}

// -(4g / (mu^4 hbar)) (p^3/3 + mu^2 p x^2 / 2)
PhasePolynomial q1_expected()
{
    return mono(-4, 3, {.p = 3, .g = 1, .mu = -4, .hbar = -1}) + mono(-2, 1, {.x = 2, .p = 1, .g = 1, .mu = -2, .hbar = -1});
}

} // namespace

TEST_CASE("Coefficient text round trip")
{
    for (const auto& c : {Coefficient::rational(-4, 3), Coefficient(0, mpq_class(2, 3)), Coefficient(mpq_class(1, 2), mpq_class(-3, 4)),
                          Coefficient(mpq_class(-1, 2), mpq_class(3, 4)), Coefficient()}) {
        CHECK(Coefficient::parse(c.to_string()) == c);
    }
    CHECK(Coefficient::rational(6, -4).to_string() == "-3/2");
    CHECK(Coefficient(0, 1).to_string() == "1i");
    CHECK(Coefficient(mpq_class(1, 2), mpq_class(-3, 4)).to_string() == "(1/2-3/4i)");
    CHECK_THROWS_AS(Coefficient::parse("abc"), ArgumentError);
    CHECK_THROWS_AS(Coefficient::rational(1, 0), ArgumentError);
}

TEST_CASE("add")
{
    const Monomial p3{.p = 3};
    const Monomial x2{.x = 2};
    CHECK((mono(1, 1, p3) + mono(-1, 1, p3)).is_zero());
    CHECK(mono(1, 1, x2) + mono(1, 1, x2) == mono(2, 1, x2));

    const auto h0 = mono(1, 2, {.p = 2}) + mono(1, 2, {.x = 2, .mu = 2});
    const auto h1 = imono(1, 1, {.x = 3, .g = 1});
    const auto sum = h0 + h1;
    CHECK(sum.size() == 3);
    CHECK(sum.coefficient({.p = 2}) == Coefficient::rational(1, 2));
    CHECK(sum.coefficient({.x = 2, .mu = 2}) == Coefficient::rational(1, 2));
    CHECK(sum.coefficient({.x = 3, .g = 1}) == Coefficient(0, 1));
    CHECK(sum == HamiltonianSpec::standard().h0 + HamiltonianSpec::standard().h1);
}

TEST_CASE("mul")
{
    CHECK(mono(1, 1, {.x = 2}) * mono(1, 1, {.p = 3}) == mono(1, 1, {.x = 2, .p = 3}));
    const auto h1 = imono(1, 1, {.x = 3, .g = 1});
    CHECK(h1 * h1 == mono(-1, 1, {.x = 6, .g = 2}));
    CHECK(mono(1, 1, {.p = 1, .mu = -4, .hbar = -1}) * mono(1, 1, {.x = 2, .mu = 2}) ==
          mono(1, 1, {.x = 2, .p = 1, .mu = -2, .hbar = -1}));

    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const auto a = testing::random_polynomial(rng);
        const auto b = testing::random_polynomial(rng);
        CHECK(a * b == b * a);
    }
}

TEST_CASE("poisson_bracket")
{
    CHECK(poisson_bracket(mono(1, 1, {.p = 3}), mono(1, 1, {.x = 3})) == mono(-9, 1, {.x = 2, .p = 2}));

    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        const auto f = testing::random_polynomial(rng);
        CHECK(poisson_bracket(f, f).is_zero());
    }

    const auto f = mono(1, 3, {.p = 3}) + mono(1, 2, {.x = 2, .p = 1, .mu = 2});
    const auto h0 = HamiltonianSpec::standard().h0;
    CHECK(poisson_bracket(f, h0) == mono(-1, 2, {.x = 3, .mu = 4}));
}

TEST_CASE("poisson_bracket agrees with finite differences")
{
    // Independent route: central differences of the numeric evaluations.
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> coord(-1.2, 1.2);
    const EvalParams params{0.7, 0.3, 1.3, 1.0, 0.9};
    for (int i = 0; i < 40; ++i) {
        const auto f = testing::random_polynomial(rng, 6, 4, false);
        const auto g = testing::random_polynomial(rng, 6, 4, false);
        const PhasePoint pt{coord(rng), coord(rng)};
        const double h = 1e-5;
        auto ev = [&](const PhasePolynomial& q, double dx, double dp) {
            return eval_numeric(q, params, {pt.x + dx, pt.p + dp}).real();
        };
        const double fx = (ev(f, h, 0) - ev(f, -h, 0)) / (2 * h);
        const double fp = (ev(f, 0, h) - ev(f, 0, -h)) / (2 * h);
        const double gx = (ev(g, h, 0) - ev(g, -h, 0)) / (2 * h);
        const double gp = (ev(g, 0, h) - ev(g, 0, -h)) / (2 * h);
        const double expected = fx * gp - fp * gx;
        const double actual = eval_numeric(poisson_bracket(f, g), params, pt).real();
        CHECK(actual == doctest::Approx(expected).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("commutator_leading")
{
    const auto spec = HamiltonianSpec::standard();
    CHECK(commutator_leading(q1_expected(), spec.h0) == imono(2, 1, {.x = 3, .g = 1}));
    CHECK(commutator_leading(spec.h0, spec.h0).is_zero());
    CHECK(commutator_leading(mono(1, 1, {.x = 1}), mono(1, 1, {.p = 1})) == imono(1, 1, {.hbar = 1}));

    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const auto f = testing::random_polynomial(rng);
        const auto g = testing::random_polynomial(rng);
        CHECK(commutator_leading(f, g) ==
              scale(poisson_bracket(f, g), Coefficient(0, 1)) * mono(1, 1, {.hbar = 1}));
    }
}

TEST_CASE("parity_flags")
{
    CHECK(parity_flags(q1_expected()) == ParityFlags{true, true});
    CHECK(parity_flags(mono(1, 1, {.x = 3})) == ParityFlags{false, false});
    CHECK(parity_flags(PhasePolynomial{}) == ParityFlags{true, true});
    CHECK(parity_flags(mono(1, 1, {.x = 2, .p = 2})) == ParityFlags{true, false});
}

TEST_CASE("eval_numeric")
{
    const EvalParams any{};
    CHECK(eval_numeric(mono(1, 1, {.x = 2, .p = 1}), any, {2.0, 3.0}) == std::complex<double>(12.0, 0.0));

    const EvalParams unit{1.0, 0.0, 1.0, 1.0, 1.0};
    const auto q1 = eval_numeric(q1_expected(), unit, {0.0, 1.0});
    CHECK(q1.real() == doctest::Approx(-4.0 / 3.0).epsilon(1e-15));
    CHECK(q1.imag() == 0.0);

    const EvalParams g2{2.0, 0.1, 1.0, 1.0, 1.0};
    CHECK(eval_numeric(imono(1, 1, {.x = 3, .g = 1}), g2, {1.0, 0.0}) == std::complex<double>(0.0, 2.0));

    CHECK_THROWS_AS(eval_numeric(mono(1, 1, {.lam = 1, .mu = -2}), EvalParams{0.1, 0.1, 0.0, 1.0, 1.0}, {1.0, 1.0}),
                    DomainError);
    CHECK(eval_numeric(mono(1, 1, {.x = 1}), any, {0.0, 1.0}) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("canonical form")
{
    const Monomial a{.x = 2, .p = 1};
    const Monomial b{.p = 3, .g = 1};
    const PhasePolynomial one({{a, Coefficient(1)}, {b, Coefficient(2)}, {a, Coefficient(-1)}, {b, Coefficient(1)}});
    const PhasePolynomial two({{b, Coefficient(3)}});
    CHECK(one == two);
    CHECK(to_text(one) == to_text(two));
    CHECK(to_json(one).dump() == to_json(two).dump());

    std::mt19937_64 rng(8);
    for (int i = 0; i < 50; ++i) {
        const auto f = testing::random_polynomial(rng);
        const auto g = testing::random_polynomial(rng);
        for (const auto& r : {f + g, f * g, poisson_bracket(f, g), f - f}) {
            for (const auto& t : r.terms()) {
                CHECK_FALSE(t.coeff.is_zero());
            }
            for (std::size_t k = 1; k < r.terms().size(); ++k) {
                CHECK(r.terms()[k - 1].mono < r.terms()[k].mono);
            }
        }
    }
}

TEST_CASE("negative exponents are rejected for x, p, g, lam")
{
    CHECK_THROWS_AS(PhasePolynomial::term(Coefficient(1), Monomial{.x = -1}), ArgumentError);
    CHECK_THROWS_AS(PhasePolynomial::term(Coefficient(1), Monomial{.lam = -1}), ArgumentError);
    CHECK_NOTHROW(PhasePolynomial::term(Coefficient(1), Monomial{.mu = -1, .hbar = -3}));
}

TEST_CASE("grading: bracket lowers phase degree by two")
{
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> deg(0, 8);
    for (int i = 0; i < 200; ++i) {
        const int d1 = deg(rng);
        const int d2 = deg(rng);
        std::uniform_int_distribution<int> s1(0, d1);
        std::uniform_int_distribution<int> s2(0, d2);
        const int x1 = s1(rng);
        const int x2 = s2(rng);
        const auto b = poisson_bracket(mono(1, 1, {.x = x1, .p = d1 - x1}), mono(1, 1, {.x = x2, .p = d2 - x2}));
        for (const auto& t : b.terms()) {
            CHECK(t.mono.phase_degree() == d1 + d2 - 2);
        }
    }
}

TEST_CASE("text serialization format")
{
    const auto p = mono(-4, 3, {.p = 3, .g = 1, .mu = -4, .hbar = -1}) + imono(2, 1, {.x = 3, .g = 1});
    CHECK(to_text(p) == "-4/3 * x^0 p^3 g^1 lam^0 mu^-4 hbar^-1 + 2i * x^3 p^0 g^1 lam^0 mu^0 hbar^0");
    CHECK(to_text(PhasePolynomial{}) == "0");
}

TEST_CASE("JSON round trip")
{
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
        const auto f = testing::random_polynomial(rng);
        CHECK(polynomial_from_json(to_json(f)) == f);
    }
    const auto j = to_json(mono(-4, 3, {.p = 3, .g = 1, .mu = -4, .hbar = -1}));
    CHECK(j[0]["coeff_re"] == "-4/3");
    CHECK(j[0]["coeff_im"] == "0");
    CHECK(j[0]["exponents"]["mu"] == -4);
}

TEST_CASE("LaTeX")
{
    CHECK(to_latex(q1_expected()) == "-\\frac{4}{3} g\\mu^{-4}\\hbar^{-1}p^{3}-2 g\\mu^{-2}\\hbar^{-1}px^{2}");
    CHECK(to_latex(imono(1, 1, {.x = 3, .g = 1})) == "i gx^{3}");
    CHECK(to_latex(mono(1, 1, {.p = 2, .lam = 1})) == "\\lambda p^{2}");
}

TEST_CASE("bracket identities on random polynomials")
{
    std::mt19937_64 rng(29);
    const Coefficient a = Coefficient(mpq_class(3, 5), mpq_class(-1, 2));
    const Coefficient b = Coefficient::rational(-7, 3);
    for (int i = 0; i < 100; ++i) {
        const auto f = testing::random_polynomial(rng);
        const auto g = testing::random_polynomial(rng);
        const auto h = testing::random_polynomial(rng);
        CHECK(poisson_bracket(f, g) == -poisson_bracket(g, f));
        CHECK(poisson_bracket(a * f + b * g, h) == a * poisson_bracket(f, h) + b * poisson_bracket(g, h));
        CHECK(poisson_bracket(f, g * h) == poisson_bracket(f, g) * h + g * poisson_bracket(f, h));
        CHECK((poisson_bracket(f, poisson_bracket(g, h)) + poisson_bracket(g, poisson_bracket(h, f)) +
               poisson_bracket(h, poisson_bracket(f, g)))
                  .is_zero());
    }
}

TEST_CASE("parity_transform and truncate_g")
{
    const auto p = mono(1, 1, {.x = 3}) + mono(2, 1, {.x = 2, .p = 1, .g = 2});
    CHECK(parity_transform(p) == mono(-1, 1, {.x = 3}) + mono(-2, 1, {.x = 2, .p = 1, .g = 2}));
    CHECK(truncate_g(p, 1) == mono(1, 1, {.x = 3}));
    CHECK(truncate_g(p, 2) == p);
}
