#include "doctest.h"
#include "hw/coeff.hpp"
#include "hw/error.hpp"

using namespace hw;

TEST_CASE("eps squares to one")
{
    const Coefficient e = Coefficient::eps();
    CHECK(e * e == Coefficient(1));
    CHECK(e.pow(5) == e);
    CHECK(e.is_unit());
    CHECK((Coefficient(-3) * e).unit_inverse() == Coefficient(Rational(-1, 3)) * e);
    CHECK_FALSE((e + Coefficient(1)).is_unit());
}

TEST_CASE("symbols")
{
    CHECK(Symbol::parse("eps").is_eps());
    CHECK(Symbol::parse("a_3") == Symbol::eigen(3));
    CHECK(Symbol::parse("a3") == Symbol::eigen(3));
    CHECK(Symbol::eigen(12).name() == "a_12");
    CHECK_THROWS_AS(Symbol::parse("b_2"), Error);
}

TEST_CASE("polynomial arithmetic")
{
    const Coefficient a2 = Coefficient::eigen(2), a3 = Coefficient::eigen(3);
    const Coefficient x = a2 + a3;
    CHECK(x * x == a2 * a2 + Coefficient(2) * a2 * a3 + a3 * a3);
    CHECK((x - x).is_zero());
    CHECK(x.has_eigen_symbols());
    CHECK_FALSE(x.has_eps());
    CHECK(Coefficient(Rational(3, 4)).is_rational());
    CHECK((a2 + Coefficient(5)).rational_part() == 5);
}

TEST_CASE("Hecke relations among eigenvalues")
{
    const RuleSet r = hecke_rules(11, 2, 12);
    const Coefficient a2 = Coefficient::eigen(2), a3 = Coefficient::eigen(3);
    CHECK(substitute(Coefficient::eigen(4), r) == a2 * a2 - Coefficient(2));
    CHECK(substitute(Coefficient::eigen(6), r) == a2 * a3);
    CHECK(substitute(Coefficient::eigen(8), r) == a2 * a2 * a2 - Coefficient(4) * a2);
    CHECK(substitute(Coefficient::eigen(12), r) == (a2 * a2 - Coefficient(2)) * a3);
    // p | N: a_{p^2} = a_p^2
    const RuleSet r11 = hecke_rules(11, 2, 121);
    CHECK(substitute(Coefficient::eigen(121), r11) == Coefficient::eigen(11).pow(2));
    // weight 4: a_4 = a_2^2 - 8
    CHECK(substitute(Coefficient::eigen(4), hecke_rules(13, 4, 4)) == a2 * a2 - Coefficient(8));
}

TEST_CASE("cyclic rules are rejected")
{
    try {
        RuleSet r({{Symbol::eigen(2), Coefficient::eigen(3)}, {Symbol::eigen(3), Coefficient::eigen(2)}});
        FAIL("expected CyclicRules");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::CyclicRules);
    }
    CHECK_THROWS_AS(RuleSet({{Symbol::eigen(4), Coefficient::eigen(4) + Coefficient(1)}}), Error);
}

TEST_CASE("evaluation")
{
    const Coefficient x = Coefficient(2) * Coefficient::eigen(2) - Coefficient::eps();
    auto v = x.evaluate([](Symbol s) -> std::optional<std::complex<double>> {
        if (s.is_eps()) return -1.0;
        if (s == Symbol::eigen(2)) return -2.0;
        return std::nullopt;
    });
    CHECK(v.real() == doctest::Approx(-3.0));
    try {
        Coefficient::eigen(5).evaluate([](Symbol) { return std::optional<std::complex<double>>{}; });
        FAIL("expected UnresolvedSymbol");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnresolvedSymbol);
    }
}
