#include <numeric>
#include "doctest.h"
#include "hw/error.hpp"
#include "hw/expr.hpp"
#include "hw/hecke.hpp"
#include "hw/oracle.hpp"

using namespace hw;

namespace {

Element E(const char* text)
{
    ExprContext c;
    c.level = 11;
    return parse_element(text, c);
}

} // namespace

TEST_CASE("eta product coefficients")
{
    const QExpansion f = eta_square_11(200);
    const std::vector<std::int64_t> first = {1, -2, -1, 2, 1, 2, -2, 0, -2, -2, 1, -2};
    for (std::size_t i = 0; i < first.size(); ++i) CHECK(f.a[i] == first[i]);
    // multiplicativity and the prime-power recursion
    for (long m = 1; m <= 14; ++m)
        for (long n = 1; n <= 14; ++n)
            if (std::gcd(m, n) == 1) CHECK(f.coeff(m * n) == f.coeff(m) * f.coeff(n));
    for (long p : {2L, 3L, 5L, 7L, 13L}) CHECK(f.coeff(p * p) == f.coeff(p) * f.coeff(p) - p);
    CHECK(f.coeff(121) == f.coeff(11) * f.coeff(11));
    // Hasse bound
    for (long p : {2L, 3L, 5L, 7L, 13L, 17L, 19L, 23L})
        CHECK(static_cast<double>(f.coeff(p) * f.coeff(p)) <= 4.0 * static_cast<double>(p));
    CHECK_THROWS_AS(eta_square_11(5), Error);
}

TEST_CASE("truncation bound")
{
    CHECK(truncation_bound(100, 0.5) < 1e-100);
    CHECK(truncation_bound(10, 0.5) > truncation_bound(20, 0.5));
    CHECK(truncation_bound(10, 0.5) > truncation_bound(10, 1.0));
}

TEST_CASE("slash action")
{
    const QExpansion f = eta_square_11(6000);
    const cplx z(0.1, 0.7);
    const SlashValue id = slash_eval(f, ProjMatrix{}, z);
    const SlashValue t = slash_eval(f, translation(), z);
    CHECK(std::abs(id.value - t.value) < 1e-12);
    const SlashValue g = slash_eval(f, ProjMatrix::from_integers(3, -1, -11, 4), z);
    CHECK(std::abs(id.value - g.value) < 1e-10);
    CHECK(measure_fricke_sign(f) == -1);
    try {
        slash_eval(f, ProjMatrix{}, cplx(0, 0.3));
        FAIL("expected PointTooLow");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PointTooLow);
    }
    try {
        slash_eval(eta_square_11(20), ProjMatrix::from_integers(1, 0, 11, 1), cplx(0, 0.5));
        FAIL("expected InsufficientTerms");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InsufficientTerms);
    }
}

TEST_CASE("relations annihilate the newform")
{
    const QExpansion f = eta_square_11(6000);
    const auto pts = sample_points(5);
    REQUIRE(pts.size() == 5);
    for (const auto& z : pts) {
        CHECK(z.imag() >= 0.5);
        CHECK(z.imag() <= 2.0);
    }
    const int s = measure_fricke_sign(f);
    for (const char* rel : {"1 - T", "1 - [3 -1; -11 4]", "H - eps", "T(2) - a_2", "T(3) - a_3", "T(5) - a_5",
                            "T(11) - a_11", "(1 - [3 -1; -11 4]) (1 - [1 -2/3; 11/2 -8/3])"}) {
        const ResidualReport r = check_relation(f, E(rel), pts, s);
        CHECK_MESSAGE(r.max_residual < 1e-8, rel);
        CHECK(r.max_truncation < 1e-12);
    }
    // something that is not in the ideal
    CHECK(check_relation(f, E("1 - [2 1; 1 1]"), pts, s).max_residual > 1e-3);
    CHECK(check_relation(f, E("H + eps"), pts, s).max_residual > 1e-3);
    // serial and parallel series evaluation agree
    const auto a = check_relation(f, E("T(2) - a_2"), pts, s, Exec::serial);
    const auto b = check_relation(f, E("T(2) - a_2"), pts, s, Exec::parallel);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(a.residuals[i] == b.residuals[i]);
    try {
        check_relation(f, E("a_2"), pts, s);
    } catch (const Error& e) {
        FAIL("a_2 should resolve from the coefficients");
    }
}
