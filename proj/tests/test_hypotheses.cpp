#include "doctest.h"
#include "hw/error.hpp"
#include "hw/expr.hpp"
#include "hw/hecke.hpp"
#include "hw/hypotheses.hpp"

using namespace hw;

namespace {

ProjMatrix M(long a, long b, long c, long d) { return ProjMatrix::from_integers(a, b, c, d); }

HypothesisSet level13()
{
    HypothesisSet h(13);
    h.add_invariant(M2(13));
    return h;
}

} // namespace

TEST_CASE("ball size")
{
    CHECK(level13().ball_size() == 4020);
    HypothesisSet h(13, 2, 0);
    CHECK(h.ball_size() == 1);
}

TEST_CASE("reduction of matrices")
{
    const HypothesisSet h = level13();
    const Reduction r = h.reduce_matrix(M(6, -5, -13, 11));
    CHECK(r.rep.is_identity());
    CHECK(r.eps == 0);
    const Reduction f = h.reduce_matrix(fricke(13));
    CHECK(f.rep.is_identity());
    CHECK(f.eps == 1);
    // serial and parallel give the same representative
    for (const auto& m : {M(7, 3, 2, 1), M(29, 5, -91, -14), M(4, -1, 13, -3)}) {
        const Reduction s = h.reduce_matrix(m, Exec::serial);
        const Reduction p = h.reduce_matrix(m, Exec::parallel);
        CHECK(s.rep == p.rep);
        CHECK(s.eps == p.eps);
        CHECK(s.word == p.word);
    }
}

TEST_CASE("reduction certificates")
{
    const HypothesisSet h = level13();
    for (const auto& m : {M(6, -5, -13, 11), M(5, 2, 2, 1), M(3, 1, -13, -4)}) {
        const Reduction r = h.reduce_matrix(m);
        const Certificate c = h.reduction_certificate(m, r, Coefficient(3));
        Element want = Element::term(m, Coefficient(3));
        want -= Element::term(r.rep, r.eps ? Coefficient(3) * Coefficient::eps() : Coefficient(3));
        std::string why;
        CHECK_MESSAGE(h.verify(want, c, &why), why);
    }
}

TEST_CASE("element reduction with certificate")
{
    HypothesisSet h = level13();
    h.assume_hecke(2);
    ExprContext ctx;
    ctx.level = 13;
    const Element x = parse_element("[6 -5; -13 11] - 1 + a_4 - a_2 a_2 H + [7 3; 2 1]", ctx);
    Certificate c;
    const Element r = h.reduce(x, &c);
    CHECK(h.verify(x - r, c));
    Certificate c2;
    const Element r2 = h.reduce_cancel(x, &c2);
    CHECK(h.verify(x - r2, c2));
    CHECK(r2.coefficient(M(7, 3, 2, 1)) == Coefficient(1));
}

TEST_CASE("verification rejects what the hypotheses do not give")
{
    HypothesisSet h(11);
    Certificate c;
    c.add(Generator::hecke(11, 2, 3), Element::one());
    const Element claim = hecke_generator(3, 11);
    std::string why;
    CHECK_FALSE(h.verify(claim, c, &why));
    CHECK(why.find("not among the hypotheses") != std::string::npos);
    h.assume_hecke(3);
    CHECK(h.verify(claim, c));

    // wrong claim
    CHECK_FALSE(h.verify(claim + Element::one(), c, &why));

    // an invariant that was never assumed
    Certificate bad;
    bad.add(Generator::invariant(M(3, -1, -11, 4)), Element::one());
    CHECK_FALSE(h.verify(Element::one_minus(M(3, -1, -11, 4)), bad));
}

TEST_CASE("derived invariants flatten to their proofs")
{
    HypothesisSet h(13);
    Certificate proof;
    proof.add(Generator::invariant(translation()), Element::one());   // 1 - T
    const RelationPtr rel = make_relation("T", Element::one_minus(translation()), proof);
    CHECK_THROWS_AS(h.add_invariant(M2(13), rel), Error);
}

TEST_CASE("invariant bookkeeping")
{
    HypothesisSet h(13);
    CHECK(h.has_invariant(translation()));
    h.add_invariant(W(13));
    h.add_invariant(W(13));
    CHECK(h.invariants().size() == 2);
    h.remove_invariants_except({translation()});
    CHECK(h.invariants().size() == 1);
    CHECK_THROWS_AS(HypothesisSet(0), Error);
    CHECK_THROWS_AS(HypothesisSet(11, 3), Error);
}

TEST_CASE("derivation log text")
{
    DerivationLog log;
    Step s;
    s.rule = "reduce";
    s.inputs = {"x"};
    s.output = Element::one();
    s.justification = "why";
    s.detail = "line";
    log.push(s);
    CHECK(log.to_text() == "[1] reduce(x): 1  (why)\n    line\n");
}
