#include "doctest.h"
#include "hw/cases.hpp"
#include "hw/error.hpp"
#include "hw/expr.hpp"
#include "hw/hecke.hpp"

using namespace hw;

TEST_CASE("built-in cases")
{
    const auto& cases = builtin_cases();
    CHECK(cases.size() == 15);
    CHECK(find_case("gamma11") != nullptr);
    CHECK(find_case("missing") == nullptr);
    for (const auto& r : run_cases({})) {
        CHECK_MESSAGE(r.ok, to_text(r));
        for (std::size_t i = 0; i < r.log.steps().size(); ++i) {
            const Step& s = r.log.steps()[i];
            if (!s.has_certificate || s.axiom || s.certificate.uses_axiom()) continue;
            std::string why;
            CHECK_MESSAGE(r.verify_step(i, &why), r.name, " step ", i + 1, ": ", why);
        }
    }
    CHECK_THROWS_AS(run_cases({"missing"}), Error);
}

TEST_CASE("runs are reproducible across execution policies")
{
    const CaseScript* c = find_case("t13-T7");
    REQUIRE(c);
    set_default_exec(Exec::serial);
    const std::string a = to_text(run_case(*c));
    set_default_exec(Exec::parallel);
    const std::string b = to_text(run_case(*c));
    CHECK(a == b);
}

TEST_CASE("Weil step ends the level 11 log")
{
    const RunResult r = run_case(*find_case("gamma11"));
    REQUIRE(r.ok);
    const Step& last = r.log.steps().back();
    CHECK(last.rule == "weil_cancel");
    CHECK(last.axiom);
    CHECK(last.output == Element::one_minus(ProjMatrix::from_integers(3, -1, -11, 4)));
    CHECK(r.final_hyp->has_invariant(ProjMatrix::from_integers(3, -1, -11, 4)));
    CHECK(to_text(r).find("1 - [3 -1; -11 4] ≡ 0  (Weil)") != std::string::npos);
}

TEST_CASE("flags")
{
    const RunResult r = run_case(*find_case("curiosity-T6"));
    CHECK(r.ok);
    REQUIRE(r.flags.size() == 1);
    CHECK(r.flags[0].find("hyperbolic") != std::string::npos);
    CHECK(r.flags[0].find("tau=0") != std::string::npos);
}

TEST_CASE("script errors")
{
    try {
        run_script("level = 11\n[[step]]\nkind = \"build_D\"\nn = 3\nname = \"x\"\n", "s");
    } catch (...) {
        FAIL("a failing step must not throw");
    }
    const RunResult r = run_script("level = 11\n[[step]]\nkind = \"build_D\"\nn = 3\n", "s");
    CHECK_FALSE(r.ok);
    CHECK(r.error.find("step 1") != std::string::npos);
    CHECK(r.error.find("T(3) is not assumed") != std::string::npos);

    const RunResult u = run_script("level = 11\n[[step]]\nkind = \"frobnicate\"\n", "s");
    CHECK_FALSE(u.ok);
    CHECK(u.error.find("unknown step kind") != std::string::npos);

    try {
        run_script("level = 11\n[[step]\n", "s");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }

    const RunResult bad_expect =
        run_script("level = 11\nhecke = [2]\n[[step]]\nkind = \"build_D\"\nn = 2\nexpect = \"1 - T\"\n", "s");
    CHECK_FALSE(bad_expect.ok);
    CHECK(bad_expect.error.empty());
    REQUIRE(bad_expect.checks.size() == 1);
    CHECK_FALSE(bad_expect.checks[0].ok);

    const RunResult expected_error = run_script(
        "level = 13\n[[step]]\nkind = \"weil_cancel\"\ninput = \"x\"\nexpect_error = \"StepFailed\"\n", "s");
    CHECK_FALSE(expected_error.ok);
}

TEST_CASE("assert_equiv_zero")
{
    HypothesisSet h(13);
    ExprContext c;
    c.level = 13;
    const std::string script = R"toml(
[[step]]
kind = "build_D"
n = 2
corrections = "none"
name = "D2"

[[step]]
kind = "right_multiply"
input = "D2"
by = "inv([1 1; 0 2])"
name = "R"

[[step]]
kind = "conclude_invariant"
input = "R"
matrix = "M2"
)toml";
    h.assume_hecke(2);
    const DerivationLog log = assert_equiv_zero(parse_element("[6 -5; -13 11] - 1", c), h, script);
    CHECK(log.steps().size() == 4);
    try {
        assert_equiv_zero(parse_element("[3 1; -13 -4] - 1", c), h, script);
        FAIL("expected StepFailed");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::StepFailed);
        CHECK(std::string(e.what()).find("step 4") != std::string::npos);
    }
}
