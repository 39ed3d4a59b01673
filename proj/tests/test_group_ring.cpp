#include <random>

#include "doctest.h"
#include "hw/group_ring.hpp"
#include "hw/hecke.hpp"

using namespace hw;

namespace {

Element random_element(std::mt19937_64& rng)
{
    std::uniform_int_distribution<long> d(-4, 4);
    Element x;
    for (int i = 0; i < 3; ++i) {
        long a, b, c, e;
        do {
            a = d(rng), b = d(rng), c = d(rng), e = d(rng);
        } while (a * e - b * c <= 0);
        Coefficient k(d(rng));
        if (i == 1) k = k * Coefficient::eps();
        if (i == 2) k = k + Coefficient::eigen(2);
        x.add_term(ProjMatrix::from_integers(a, b, c, e), k);
    }
    return x;
}

} // namespace

TEST_CASE("ring axioms")
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        const Element x = random_element(rng), y = random_element(rng), z = random_element(rng);
        CHECK((x * y) * z == x * (y * z));
        CHECK(x * (y + z) == x * y + x * z);
        CHECK((x + y) * z == x * z + y * z);
        CHECK(x * Element::one() == x);
        CHECK((x - x).is_zero());
        CHECK((x * y).augmentation() == x.augmentation() * y.augmentation());
    }
}

TEST_CASE("terms merge and cancel")
{
    const ProjMatrix t = translation();
    Element x = Element::one_minus(t);
    x += Element::term(t);
    CHECK(x == Element::one());
    CHECK(Element::term(ProjMatrix::from_integers(2, 0, 0, 2)) == Element::one());
    CHECK((Element::term(t) * inv(t)) == Element::one());
}

TEST_CASE("rule substitution")
{
    const RuleSet r = hecke_rules(11, 2, 6);
    const Element x = Element::term(ProjMatrix{}, Coefficient::eigen(4));
    const Element y = Element::term(ProjMatrix{}, Coefficient::eigen(2) * Coefficient::eigen(2) - Coefficient(2));
    CHECK_FALSE(x == y);
    CHECK(equal(x, y, r));
}

TEST_CASE("display")
{
    const Element x = Element::one_minus(ProjMatrix::from_integers(3, -1, -11, 4));
    CHECK(x.to_string() == "1 - [3 -1; -11 4]");
    CHECK(Element().to_string() == "0");
    const Element e = Element::term(fricke(11), Coefficient::eps());
    CHECK(e.to_string(11) == "eps*[0 sqrt(11)/11; -sqrt(11) 0]");
}
