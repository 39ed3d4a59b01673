#include <random>

#include "doctest.h"
#include "hw/error.hpp"
#include "hw/hecke.hpp"
#include "hw/words.hpp"

using namespace hw;

namespace {

std::vector<NamedGen> gens13()
{
    return {{"T", translation()}, {"H", fricke(13)}, {"M2", M2(13)}};
}

} // namespace

TEST_CASE("alphabet drops self-inverse letters")
{
    const auto a = alphabet(gens13());
    REQUIRE(a.size() == 5);
    CHECK(a[0] == Letter{0, false});
    CHECK(a[1] == Letter{0, true});
    CHECK(a[2] == Letter{1, false});
    CHECK(a[3] == Letter{2, false});
}

TEST_CASE("words parse, print and evaluate")
{
    const auto g = gens13();
    const Word w = parse_word("M2^-1 H T^-1 H T^-1", g);
    CHECK(to_string(w, g) == "M2^-1 H T^-1 H T^-1");
    CHECK(evaluate(w, g) == inv(M2(13)) * fricke(13) * inv(translation()) * fricke(13) * inv(translation()));
    CHECK(evaluate(parse_word("I", g), g) == ProjMatrix{});
    CHECK_THROWS_AS(parse_word("X", g), Error);
}

TEST_CASE("meet in the middle agrees with plain enumeration")
{
    const auto g = gens13();
    std::mt19937_64 rng(5);
    const auto letters = alphabet(g);
    std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
    for (int trial = 0; trial < 40; ++trial) {
        Word w;
        const int len = 1 + trial % 6;
        for (int i = 0; i < len; ++i) w.push_back(letters[pick(rng)]);
        const ProjMatrix target = evaluate(w, g);
        const auto fast = word_search(target, g, 6, Exec::serial);
        const auto par = word_search(target, g, 6, Exec::parallel);
        const auto slow = word_search_naive(target, g, 6);
        REQUIRE(slow.has_value());
        REQUIRE(fast.has_value());
        CHECK(*fast == *slow);
        CHECK(*par == *slow);
        CHECK(evaluate(*fast, g) == target);
    }
}

TEST_CASE("words for the level 13 matrices")
{
    const auto g = gens13();
    const auto w = word_search(ProjMatrix::from_integers(6, -1, -65, 11), g, 12);
    REQUIRE(w.has_value());
    CHECK(to_string(*w, g) == "H T M2 T H");
    const auto v = word_search(ProjMatrix::from_integers(6, -5, -13, 11), g, 12);
    REQUIRE(v.has_value());
    CHECK(to_string(*v, g) == "T^-1 M2^-1 T^-1");
    CHECK_FALSE(word_search(ProjMatrix::from_integers(3, 1, -13, -4), g, 6).has_value());
    CHECK(word_search(ProjMatrix{}, g, 3)->empty());
}

TEST_CASE("membership report")
{
    HypothesisSet h(13);
    h.add_invariant(M2(13));
    const MembershipReport r = membership_report(ProjMatrix::from_integers(6, -1, -65, 11), h, 8);
    CHECK(r.in_gamma0);
    REQUIRE(r.word.has_value());
    CHECK(evaluate(*r.word, r.gens) == ProjMatrix::from_integers(6, -1, -65, 11));
}
