#include "doctest.h"
#include "hw/error.hpp"
#include "hw/expr.hpp"
#include "hw/hecke.hpp"

using namespace hw;

namespace {

Element E(const char* text, long level)
{
    ExprContext c;
    c.level = level;
    return parse_element(text, c);
}

} // namespace

TEST_CASE("named matrices")
{
    CHECK(M2(11) == ProjMatrix::from_integers(2, -1, -11, 6));
    CHECK(W(13) == ProjMatrix::from_integers(1, 0, 13, 1));
    CHECK(fricke(13) * fricke(13) == ProjMatrix{});
    CHECK(beta(Rational(1, 3)) == ProjMatrix::from_integers(3, 1, 0, 3));
    // H T H = W^-1
    CHECK(fricke(13) * translation() * fricke(13) == inv(W(13)));
    try {
        M2(12);
        FAIL("expected EvenLevelForM2");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EvenLevelForM2);
    }
}

TEST_CASE("Hecke operators")
{
    CHECK(T_prime(3, 11).size() == 4);
    CHECK(T_prime(11, 11).size() == 11);   // U_11: no diagonal term
    CHECK(T_composite(4, 11).size() == 7);
    CHECK(T_composite(6, 11).size() == 12);
    CHECK(T_composite(9, 13) == T_composite(9, 13));
    try {
        T_prime(9, 11);
        FAIL("expected NotPrime");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotPrime);
    }
    CHECK(hecke_scale(5, 2) == 1);
    CHECK(hecke_scale(4, 4) == 4);
    CHECK(T_prime(2, 11, 4).coefficient(diag(2, 1)) == Coefficient(2));
}

TEST_CASE("standard corrections")
{
    const auto c = standard_corrections(6);
    REQUIRE(c.size() == 4);
    CHECK(c[0].m == 2);
    CHECK(c[0].side == diag(3, 1));
    CHECK(standard_corrections(7).empty());
    CHECK(standard_corrections(4).size() == 2);
}

TEST_CASE("D_n matches hand computations")
{
    CHECK(build_D(2, 11, {}).value == E("[2 0; -11 1] - [1 1; 0 2]", 11));
    CHECK(build_D(3, 11, {}).value == E("-[1 1; 0 3] - [1 2; 0 3] + [3 0; -11 1] + [3 0; -22 1]", 11));
    CHECK(build_D(4, 11, standard_corrections(4)).value ==
          E("-[1 1; 0 4] + [4 0; -33 1] - [1 3; 0 4] + [4 0; -11 1]", 11));
    CHECK(build_D(6, 13, standard_corrections(6)).value ==
          E("-[1 1; 0 6] + [6 0; -65 1] - [1 5; 0 6] + [6 0; -13 1]", 13));
}

TEST_CASE("D_n certificates expand to the value")
{
    for (long n : {2, 3, 4, 6, 9}) {
        const DResult d = build_D(n, 13, standard_corrections(n));
        CHECK(equal(d.certificate.expand(), d.value, hecke_rules(13, 2, 9)));
    }
}

TEST_CASE("eigenvalues cancel in D_n")
{
    for (int n : {2, 3, 4, 6}) {
        const DResult d = build_D(n, 11, {});
        for (const auto& [m, c] : d.value.terms()) CHECK_FALSE(c.has_eigen_symbols());
    }
}
