#include "hw/derivation.hpp"

#include <sstream>

#include "toml.hpp"

#include "hw/error.hpp"
#include "hw/expr.hpp"
#include "hw/hecke.hpp"
#include "hw/words.hpp"

namespace hw {

namespace {

struct StepFailure : Error {
    using Error::Error;
};

std::string fmt_coeff(const Coefficient& c) { return c.to_string(); }

class Interp {
public:
    Interp(RunResult& out, HypothesisSet hyp) : out_(out), hyp_(std::move(hyp)) {}

    void run(const toml::array& steps)
    {
        for (std::size_t i = 0; i < steps.size(); ++i) {
            index_ = i + 1;
            const toml::table* t = steps[i].as_table();
            if (!t) fail("step is not a table");
            step(*t);
        }
    }

    const HypothesisSet& hyp() const { return hyp_; }
    std::map<std::string, Value>& values() { return values_; }

private:
    // -- plumbing -----------------------------------------------------------

    [[noreturn]] void fail(const std::string& why) const
    {
        throw StepFailure(ErrorKind::StepFailed, "step " + std::to_string(index_) + ": " + why);
    }

    std::optional<std::string> opt_str(const toml::table& t, std::string_view key) const
    {
        if (auto v = t[key].value<std::string>()) return *v;
        if (t.contains(key) && !t[key].is_string()) fail(std::string(key) + " must be a string");
        return std::nullopt;
    }

    std::string req_str(const toml::table& t, std::string_view key) const
    {
        auto v = opt_str(t, key);
        if (!v) fail("missing '" + std::string(key) + "'");
        return *v;
    }

    std::optional<long> opt_int(const toml::table& t, std::string_view key) const
    {
        if (auto v = t[key].value<std::int64_t>()) return static_cast<long>(*v);
        if (t.contains(key)) fail(std::string(key) + " must be an integer");
        return std::nullopt;
    }

    long req_int(const toml::table& t, std::string_view key) const
    {
        auto v = opt_int(t, key);
        if (!v) fail("missing '" + std::string(key) + "'");
        return *v;
    }

    std::optional<bool> opt_bool(const toml::table& t, std::string_view key) const
    {
        if (auto v = t[key].value<bool>()) return *v;
        if (t.contains(key)) fail(std::string(key) + " must be a boolean");
        return std::nullopt;
    }

    std::vector<std::string> str_list(const toml::table& t, std::string_view key) const
    {
        std::vector<std::string> out;
        const toml::array* a = t[key].as_array();
        if (!a) return out;
        for (const auto& n : *a) {
            auto s = n.value<std::string>();
            if (!s) fail(std::string(key) + " must be a list of strings");
            out.push_back(*s);
        }
        return out;
    }

    ExprContext ctx() const
    {
        ExprContext c;
        c.level = hyp_.level();
        c.weight = hyp_.weight();
        for (const auto& [k, v] : values_) c.vars[k] = v.element;
        return c;
    }

    Element eval(const std::string& text) const { return parse_element(text, ctx()); }
    ProjMatrix mat(const std::string& text) const { return parse_matrix_expr(text, ctx()); }

    const Value& value(const std::string& name) const
    {
        auto it = values_.find(name);
        if (it == values_.end()) fail("no value named '" + name + "'");
        return it->second;
    }

    RelationPtr fact(const std::string& name) const
    {
        const Value& v = value(name);
        if (!v.fact) fail("'" + name + "' is not an established relation");
        return v.fact;
    }

    Value make_fact(const std::string& name, const Element& e, const Certificate& cert)
    {
        Value v;
        v.element = e;
        v.fact = make_relation(name, e, cert);
        return v;
    }

    void check(std::string what, bool ok, std::string detail = {})
    {
        out_.checks.push_back({index_, std::move(what), ok, std::move(detail)});
    }

    void record(const std::string& rule, std::vector<std::string> inputs, const Value& v, std::string justification,
                std::string detail = {}, bool axiom = false)
    {
        Step s;
        s.rule = rule;
        s.inputs = std::move(inputs);
        s.output = v.element;
        s.justification = std::move(justification);
        s.detail = std::move(detail);
        if (v.fact) {
            s.has_certificate = true;
            s.claimed = v.fact->element;
            s.certificate = v.fact->proof;
        }
        s.axiom = axiom;
        out_.log.push(std::move(s));
    }

    std::string show(const Element& x) const { return x.to_string(hyp_.level()); }
    std::string show(const ProjMatrix& m) const { return to_normalized_string(m, hyp_.level()); }

    void store(const toml::table& t, Value v)
    {
        last_ = v;
        if (auto name = opt_str(t, "name")) values_[*name] = std::move(v);
    }

    // -- generic expectations -----------------------------------------------

    void expectations(const toml::table& t, const Element& out)
    {
        if (auto e = opt_str(t, "expect")) {
            const Element want = eval(*e);
            check("output equals " + *e, out == want, "got " + show(out));
        }
        if (auto e = opt_str(t, "expect_reduced")) {
            const Element want = hyp_.reduce(eval(*e));
            const Element got = hyp_.reduce(out);
            check("output reduces like " + *e, got == want, "reduced output " + show(got));
        }
        if (auto e = opt_bool(t, "expect_zero")) check("output is zero", out.is_zero() == *e, show(out));
    }

    void expect_class(const toml::table& t, const ProjMatrix& m)
    {
        const toml::table* c = t["expect_class"].as_table();
        if (!c) return;
        const MatrixClass cls = classify(m);
        const std::string got = cls.describe();
        if (auto kind = opt_str(*c, "kind"))
            check("class of " + show(m) + " is " + *kind, std::string(to_string(cls.kind)) == *kind, got);
        if (c->contains("order")) {
            if (auto s = (*c)["order"].value<std::string>()) {
                check("order is " + *s, *s == "infinite" && !cls.order, got);
            } else {
                const long o = req_int(*c, "order");
                check("order is " + std::to_string(o), cls.order && *cls.order == o, got);
            }
        }
        if (auto tau_s = opt_str(*c, "tau")) {
            Rational want(*tau_s);
            want.canonicalize();
            check("tau is " + *tau_s, cls.tau == want, got);
        }
        if (auto label = opt_str(*c, "printed_label")) {
            const bool differs = *label != std::string(to_string(cls.kind));
            if (differs)
                out_.flags.push_back(show(m) + " is labelled " + *label + ", but its entries give " + got);
            const bool want_flag = opt_bool(*c, "expect_discrepancy").value_or(false);
            check("discrepancy with the printed label is " + std::string(want_flag ? "flagged" : "absent"),
                  differs == want_flag, got);
        }
    }

    // -- steps ----------------------------------------------------------------

    void step(const toml::table& t)
    {
        const std::string kind = req_str(t, "kind");
        const auto expected_error = opt_str(t, "expect_error");
        try {
            dispatch(kind, t);
        } catch (const StepFailure&) {
            throw;
        } catch (const Error& e) {
            if (!expected_error) fail(std::string(to_string(e.kind())) + ": " + e.what());
            const bool ok = std::string(to_string(e.kind())) == *expected_error;
            check("fails with " + *expected_error, ok, std::string(to_string(e.kind())) + ": " + e.what());
            Step s;
            s.rule = kind;
            s.justification = "blocked: " + std::string(to_string(e.kind()));
            s.detail = e.what();
            out_.log.push(std::move(s));
            return;
        }
        if (expected_error) check("fails with " + *expected_error, false, "step succeeded");
    }

    void dispatch(const std::string& kind, const toml::table& t)
    {
        if (kind == "define") return define(t);
        if (kind == "build_D") return build_d(t);
        if (kind == "subtract_correction") return subtract_correction(t);
        if (kind == "reduce") return reduce(t);
        if (kind == "right_multiply") return right_multiply(t);
        if (kind == "pair") return pair(t);
        if (kind == "chain") return chain(t);
        if (kind == "conjugate") return conjugate(t);
        if (kind == "weil_cancel") return weil(t);
        if (kind == "conclude_invariant") return conclude_invariant(t);
        if (kind == "derive_invariant") return derive_invariant(t);
        if (kind == "right_normalize") return right_norm(t);
        if (kind == "left_factor") return left_factor(t);
        if (kind == "factor") return factor(t);
        if (kind == "involution_transform") return involution(t);
        if (kind == "orbit_scan") return orbit_scan(t);
        if (kind == "word_search") return word_search_step(t);
        if (kind == "classify") return classify_step(t);
        if (kind == "expect") return expect_step(t);
        if (kind == "assert_zero") return assert_zero(t);
        if (kind == "combine") return combine(t);
        if (kind == "rewrite") return rewrite(t);
        fail("unknown step kind '" + kind + "'");
    }

    void define(const toml::table& t)
    {
        Value v;
        v.element = eval(req_str(t, "value"));
        record("define", {req_str(t, "value")}, v, "definition");
        expectations(t, v.element);
        if (v.element.size() == 1) expect_class(t, v.element.terms().begin()->first);
        store(t, std::move(v));
    }

    void build_d(const toml::table& t)
    {
        const long n = req_int(t, "n");
        std::vector<Correction> corr;
        std::string corr_text = "standard";
        if (auto s = t["corrections"].value<std::string>()) corr_text = *s;
        if (const toml::array* a = t["corrections"].as_array()) {
            corr_text = "listed";
            for (const auto& node : *a) {
                const toml::table* c = node.as_table();
                if (!c) fail("corrections must be tables {m, side}");
                corr.push_back({req_int(*c, "m"), mat(req_str(*c, "side"))});
            }
        } else if (corr_text == "standard") {
            corr = standard_corrections(n);
        } else if (corr_text != "none") {
            fail("corrections must be \"standard\", \"none\" or a list");
        }
        for (const auto& c : corr)
            if (!hyp_.hecke().count(static_cast<int>(c.m))) fail("T(" + std::to_string(c.m) + ") is not assumed");
        if (!hyp_.hecke().count(static_cast<int>(n))) fail("T(" + std::to_string(n) + ") is not assumed");
        DResult d = build_D(n, hyp_.level(), corr, hyp_.weight());
        Value v = make_fact("D" + std::to_string(n), d.value, d.certificate);
        std::ostringstream detail;
        for (const auto& c : corr) detail << "minus D_" << c.m << " * " << show(c.side) << "\n";
        record("build_D", {std::to_string(n), corr_text}, v, "H (T_n - a_n) H - (T_n - a_n)", detail.str());
        expectations(t, v.element);
        store(t, std::move(v));
    }

    void subtract_correction(const toml::table& t)
    {
        const std::string in = req_str(t, "input");
        const long m = req_int(t, "m");
        const ProjMatrix side = mat(req_str(t, "side"));
        DResult d = build_D(m, hyp_.level(), {}, hyp_.weight());
        const Coefficient s(-1 / hecke_scale(m, hyp_.weight()));
        const Element out = value(in).element + s * (d.value * side);
        Certificate c;
        c.add(Generator::relation(fact(in)), Element::one());
        c.append(d.certificate.right_mul(Element::term(side)).scaled(s));
        Value v = make_fact(in + "'", out, c);
        record("subtract_correction", {in, std::to_string(m), show(side)}, v, "D_m * side is a relation");
        expectations(t, v.element);
        store(t, std::move(v));
    }

    void reduce(const toml::table& t)
    {
        const std::string in = req_str(t, "input");
        const std::string mode = opt_str(t, "mode").value_or("canonical");
        Certificate diff;
        Element out;
        if (mode == "canonical") out = hyp_.reduce(value(in).element, &diff);
        else if (mode == "cancel") out = hyp_.reduce_cancel(value(in).element, &diff);
        else fail("mode must be canonical or cancel");
        Value v;
        if (value(in).fact) {
            Certificate c = diff.scaled(Coefficient(-1));
            c.add(Generator::relation(fact(in)), Element::one());
            v = make_fact(in + "/reduced", out, c);
        } else {
            v.element = out;
        }
        record("reduce", {in, mode}, v,
               "left multiplication by words of length <= " + std::to_string(hyp_.depth()) + " in the invariants and H");
        expectations(t, v.element);
        store(t, std::move(v));
    }

    void right_multiply(const toml::table& t)
    {
        const std::string in = req_str(t, "input");
        const std::string by = req_str(t, "by");
        const Element m = eval(by);
        Value v;
        if (value(in).fact) {
            Certificate c;
            c.add(Generator::relation(fact(in)), m);
            v = make_fact(in + "*", value(in).element * m, c);
        } else {
            v.element = value(in).element * m;
        }
        record("right_multiply", {in, by}, v, "right ideal");
        expectations(t, v.element);
        store(t, std::move(v));
    }

    void pair(const toml::table& t)
    {
        const std::string in = req_str(t, "input");
        const std::string strat = opt_str(t, "strategy").value_or("prefer_gamma0");
        PairStrategy s;
        if (strat == "prefer_gamma0") s = PairStrategy::prefer_gamma0;
        else if (strat == "exhaustive") s = PairStrategy::exhaustive;
        else fail("strategy must be prefer_gamma0 or exhaustive");
        const bool beta_form = opt_bool(t, "beta_form").value_or(true);
        auto all = pair_terms(value(in).element, hyp_.level(), s, beta_form);
        std::size_t choice = static_cast<std::size_t>(opt_int(t, "choice").value_or(0));
        if (auto sel = opt_str(t, "select_gamma")) {
            const ProjMatrix g = mat(*sel);
            choice = all.size();
            for (std::size_t i = 0; i < all.size() && choice == all.size(); ++i)
                for (const auto& p : all[i].pairs)
                    if (p.gamma == g) choice = i;
            if (choice == all.size()) fail("no pairing uses " + *sel);
        }
        if (choice >= all.size()) fail("pairing choice out of range");
        const PairedRelation& pr = all[choice];
        Certificate c;
        c.add(Generator::relation(fact(in)), Element::term(pr.post, pr.normalizer));
        Value v = make_fact(in + "/paired", pr.expand(), c);
        v.paired = pr;
        std::ostringstream detail;
        detail << all.size() << " admissible pairing(s); using #" << choice + 1 << " with " << pr.gamma0_count
               << " of " << pr.pairs.size() << " gamma in Gamma_0(" << hyp_.level() << ")\n"
               << pr.to_string(hyp_.level());
        record("pair", {in, strat}, v, "[1 a; 0 p] - [p 0; c 1] = -(1 - gamma) [1 a; 0 p]", detail.str());
        if (const toml::array* exp = t["expect_pairs"].as_array()) {
            std::vector<Pair> want;
            for (const auto& node : *exp) {
                const toml::array* a = node.as_array();
                if (!a || a->size() < 2) fail("expect_pairs entries are [gamma, right(, coeff)]");
                Pair p;
                p.gamma = mat(*(*a)[0].value<std::string>());
                p.right = mat(*(*a)[1].value<std::string>());
                p.coeff = a->size() > 2 ? eval(*(*a)[2].value<std::string>()).coefficient(ProjMatrix{}) : Coefficient(1);
                want.push_back(std::move(p));
            }
            bool ok = want.size() == pr.pairs.size();
            for (const auto& w : want) {
                bool found = false;
                for (const auto& p : pr.pairs)
                    if (p.gamma == w.gamma && p.right == w.right && p.coeff == w.coeff) found = true;
                ok = ok && found;
            }
            check("pairing matches the printed relation", ok, pr.to_string(hyp_.level()));
        }
        if (auto want = opt_int(t, "expect_gamma0_count"))
            check("gamma in Gamma_0 count is " + std::to_string(*want), pr.gamma0_count == *want,
                  std::to_string(pr.gamma0_count));
        expectations(t, v.element);
        store(t, std::move(v));
    }

    void chain(const toml::table& t)
    {
        std::vector<ChainInput> rels;
        const auto names = str_list(t, "relations");
        for (const auto& n : names) {
            const Value& v = value(n);
            if (!v.paired) fail("'" + n + "' is not a paired relation");
            rels.push_back({*v.paired, fact(n)});
        }
        const ProjMatrix g0 = mat(req_str(t, "target"));
        const int max_moves = static_cast<int>(opt_int(t, "max_moves").value_or(6));
        ChainResult r = chain_combine(rels, g0, hyp_, max_moves);
        Value v = make_fact("chain", r.relation, r.certificate);
        v.left_gamma = g0;
        v.right_factor = Element::one() - Element::term(r.E, r.sign);
        v.eps_matrix = r.E;
        v.eps_sign = r.sign;
        std::ostringstream detail;
        detail << "(1 - g0) = s (1 - g) M along:\n";
        for (const auto& m : r.moves)
            detail << "  " << m.kind << ": g = " << show(m.g) << ", M = " << show(m.M) << ", s = " << fmt_coeff(m.s)
                   << "\n";
        detail << "E = " << show(r.E) << " (" << classify(r.E).describe() << "), sign " << fmt_coeff(r.sign);
        record("chain", names, v, "relations combined until the first factor returns", detail.str());
        if (auto e = opt_str(t, "expect_eps"))
            check("E equals " + *e, r.E == mat(*e), show(r.E));
        if (auto e = opt_str(t, "expect_sign"))
            check("sign is " + *e, r.sign == eval(*e).coefficient(ProjMatrix{}), fmt_coeff(r.sign));
        expect_class(t, r.E);
        if (auto n = opt_str(t, "eps_name")) {
            Value ev;
            ev.element = Element::term(r.E);
            values_[*n] = ev;
        }
        expectations(t, v.element);
        store(t, std::move(v));
    }

    void conjugate(const toml::table& t)
    {
        const std::string in = req_str(t, "input");
        const Value& src = value(in);
        if (!src.left_gamma || !src.right_factor) fail("'" + in + "' has no recorded (1 - g) Y form");
        const ProjMatrix target = mat(req_str(t, "target"));
        ConjugateResult r = conjugate_relation(fact(in), *src.left_gamma, *src.right_factor, target, hyp_);
        Value v = make_fact(in + "/conj", r.relation, r.certificate);
        v.left_gamma = target;
        v.right_factor = r.delta * *src.right_factor * inv(r.delta);
        if (src.eps_matrix) {
            v.eps_matrix = r.delta * *src.eps_matrix * inv(r.delta);
            v.eps_sign = src.eps_sign;
        }
        std::string detail = "delta = " + show(r.delta);
        if (v.eps_matrix) detail += "\nE = " + show(*v.eps_matrix) + " (" + classify(*v.eps_matrix).describe() + ")";
        record("conjugate", {in, show(target)}, v, "delta ≡ 1 up to eps; conjugate the relation by delta", detail);
        if (auto e = opt_str(t, "expect_eps"))
            check("E equals " + *e, v.eps_matrix && *v.eps_matrix == mat(*e), v.eps_matrix ? show(*v.eps_matrix) : "");
        if (v.eps_matrix) expect_class(t, *v.eps_matrix);
        if (auto n = opt_str(t, "eps_name"); n && v.eps_matrix) {
            Value ev;
            ev.element = Element::term(*v.eps_matrix);
            values_[*n] = ev;
        }
        expectations(t, v.element);
        store(t, std::move(v));
    }

    void weil(const toml::table& t)
    {
        const std::string in = req_str(t, "input");
        const Value& src = value(in);
        Element Y;
        ProjMatrix E;
        if (auto l = opt_str(t, "left")) Y = eval(*l);
        else if (src.left_gamma) Y = Element::one_minus(*src.left_gamma);
        else fail("weil_cancel needs 'left'");
        if (auto e = opt_str(t, "eps")) E = mat(*e);
        else if (src.eps_matrix) E = *src.eps_matrix;
        else fail("weil_cancel needs 'eps'");
        WeilResult r = weil_cancel(src.element, Y, E);
        Certificate c;
        c.add(Generator::axiom(Y, "Weil: f|Y is invariant under " + E.to_string()), Element::one());
        Value v = make_fact(in + "/weil", Y, c);
        std::string detail = "E = " + show(E) + ", " + r.cls.describe() + "; sign " + fmt_coeff(r.sign);
        if (r.sign != Coefficient(1)) detail += "; multiplied by (1 + s E) to reach 1 - E^2";
        detail += "\nf|Y is fixed by an elliptic element of infinite order, hence constant;"
                  " it vanishes at the cusp, so f|Y = 0";
        record("weil_cancel", {in}, v, "Weil", detail, true);
        if (auto m = opt_str(t, "conclude_invariant")) {
            const ProjMatrix M = mat(*m);
            if (Y != Element::one_minus(M)) fail("Y is not 1 - " + *m);
            hyp_.add_invariant(M, v.fact);
            check("concluded " + *m + " ≡ 1", true);
        }
        expectations(t, v.element);
        store(t, std::move(v));
    }

    void conclude_invariant(const toml::table& t)
    {
        const std::string in = req_str(t, "input");
        const ProjMatrix M = mat(req_str(t, "matrix"));
        const Element& x = value(in).element;
        const Element target = Element::one_minus(M);
        const Coefficient u = x.coefficient(ProjMatrix{});
        if (!u.is_unit() || x != u * target) fail("input is not a unit multiple of 1 - " + show(M));
        Certificate c;
        c.add(Generator::relation(fact(in)), Element::term(ProjMatrix{}, u.unit_inverse()));
        Value v = make_fact("1 - " + M.to_string(), target, c);
        hyp_.add_invariant(M, v.fact);
        const MembershipReport rep = membership_report(M, hyp_, 0);
        record("conclude_invariant", {in}, v,
               show(M) + " ≡ 1" + (rep.in_gamma0 ? " (in Gamma_0)" : " (outside Gamma_0)"));
        check("concluded " + show(M) + " ≡ 1", true);
        if (auto e = opt_bool(t, "expect_in_gamma0"))
            check("in Gamma_0 is " + std::string(*e ? "true" : "false"), rep.in_gamma0 == *e);
        expectations(t, v.element);
        store(t, std::move(v));
    }

    void derive_invariant(const toml::table& t)
    {
        const ProjMatrix M = mat(req_str(t, "matrix"));
        const Reduction r = hyp_.reduce_matrix(M);
        if (!r.rep.is_identity() || r.eps != 0)
            fail(show(M) + " does not reduce to the identity (got " + show(r.rep) + ")");
        // 1 - M = (-M) - (-1) * eps^0 * I
        Certificate c = hyp_.reduction_certificate(M, r, Coefficient(-1));
        Value v = make_fact("1 - " + M.to_string(), Element::one_minus(M), c);
        const auto gens = hyp_.search_gens();
        std::string word;
        // The ball word w gives delta * M = I with delta = g_k ... g_1, so M = g_1^-1 ... g_k^-1.
        for (int gi : r.word) {
            const auto& g = gens[static_cast<std::size_t>(gi)];
            std::string name = "H";
            if (g.invariant >= 0) {
                const ProjMatrix base = g.inverse ? inv(g.m) : g.m;
                name = g.invariant == 0 ? "T" : show(base);
                if (!g.inverse && inv(base) != base) name += "^-1";
            }
            if (!word.empty()) word += " ";
            word += name;
        }
        hyp_.add_invariant(M, v.fact);
        record("derive_invariant", {show(M)}, v, show(M) + " ≡ 1", "M = " + (word.empty() ? "I" : word));
        if (auto e = opt_str(t, "expect_word"))
            check("word for " + show(M) + " is " + *e, word == *e, word);
        expectations(t, v.element);
        store(t, std::move(v));
    }

    void right_norm(const toml::table& t)
    {
        const std::string in = req_str(t, "input");
        const ProjMatrix P = mat(req_str(t, "pivot"));
        const Element& x = value(in).element;
        const Coefficient c = x.coefficient(P);
        const Element out = right_normalize(x, P);
        Value v;
        if (value(in).fact) {
            Certificate cert;
            cert.add(Generator::relation(fact(in)), Element::term(inv(P), c.unit_inverse()));
            v = make_fact(in + "/normalized", out, cert);
        } else {
            v.element = out;
        }
        record("right_normalize", {in, show(P)}, v, "right multiplication by the pivot inverse");
        expectations(t, v.element);
        store(t, std::move(v));
    }

    void left_factor(const toml::table& t)
    {
        const std::string in = req_str(t, "input");
        const ProjMatrix g = mat(req_str(t, "gamma"));
        const std::string qtext = req_str(t, "factor");
        const Element Q = eval(qtext);
        auto m = left_factor_search(fact(in), g, Q, hyp_);
        if (!m) fail("no pivot makes (1 - gamma) Q P reduce like the input");
        Value v = make_fact(in + "/factored", m->relation, m->certificate);
        v.left_gamma = g;
        v.right_factor = Q * m->pivot;
        record("left_factor", {in, show(g)}, v, "both sides reduce to the same element",
               "P = " + show(m->pivot) + ", unit " + fmt_coeff(m->unit) + "\nQ = " + show(Q));
        check("(1 - " + show(g) + ") Q P ≡ input for some pivot P", true, show(m->pivot));
        if (auto p = opt_str(t, "expect_pivot")) check("pivot is " + *p, m->pivot == mat(*p), show(m->pivot));
        if (auto n = opt_str(t, "factor_name")) {
            Value q;
            q.element = Q;
            values_[*n] = q;
        }
        expectations(t, v.element);
        store(t, std::move(v));
    }

    void factor(const toml::table& t)
    {
        const std::string in = req_str(t, "input");
        const Element x = eval(in);
        const auto fs = factor_1ABC(x);
        std::ostringstream detail;
        for (const auto& f : fs) detail << "(" << show(f.left) << ") * (" << show(f.right) << ")\n";
        const FourTerm shape = four_term_shape(x);
        std::vector<std::string> invs;
        for (const auto& [m, c] : shape.others)
            if (is_involution(m)) invs.push_back(show(m));
        for (const auto& s : invs) detail << "order 2: " << s << "\n";
        Value v;
        v.element = x;
        record("factor", {in}, v, std::to_string(fs.size()) + " factorization(s)", detail.str());
        if (const toml::array* exp = t["expect_factorizations"].as_array()) {
            for (const auto& node : *exp) {
                const toml::array* a = node.as_array();
                if (!a || a->size() != 2) fail("expect_factorizations entries are [left, right]");
                const Element l = eval(*(*a)[0].value<std::string>());
                const Element r = eval(*(*a)[1].value<std::string>());
                bool found = false;
                for (const auto& f : fs) found = found || (f.left == l && f.right == r);
                check("factors as (" + *(*a)[0].value<std::string>() + ")(" + *(*a)[1].value<std::string>() + ")",
                      found, detail.str());
            }
        }
        if (auto n = opt_int(t, "expect_count"))
            check(std::to_string(*n) + " factorization(s)", static_cast<long>(fs.size()) == *n,
                  std::to_string(fs.size()));
        if (auto b = opt_str(t, "expect_involution")) {
            const ProjMatrix B = mat(*b);
            check(*b + " squares to 1", is_involution(B), show(B * B));
        }
        store(t, std::move(v));
    }

    void involution(const toml::table& t)
    {
        const std::string in = req_str(t, "input");
        std::optional<ProjMatrix> hint;
        if (auto b = opt_str(t, "b")) hint = mat(*b);
        const Element x = eval(in);
        InvolutionResult r = involution_transform(x, hint);
        Value v;
        v.element = r.product;
        std::string detail = "(" + show(r.first) + ") * (" + show(r.second) + ") * " + show(r.A);
        if (r.vacuous) detail += "\nC A^-1 = A B A^-1 has order 2; the product vanishes";
        record("involution_transform", {in}, v, "(1 + A - B - C)(1 + B) = (1 - C A^-1)(1 + A B A^-1) A", detail);
        if (auto e = opt_bool(t, "expect_vacuous"))
            check(std::string("transform is ") + (*e ? "vacuous" : "informative"), r.vacuous == *e, detail);
        store(t, std::move(v));
    }

    void orbit_scan(const toml::table& t)
    {
        std::vector<NamedGen> gens;
        for (const auto& g : str_list(t, "gens")) gens.push_back({g, mat(g)});
        const int bound = static_cast<int>(opt_int(t, "bound").value_or(10));
        const auto entries = group_orbit_scan(gens, bound);
        long infinite = 0, hyperbolic = 0, finite = 0;
        for (const auto& e : entries) {
            if (e.cls.elliptic_infinite()) ++infinite;
            else if (e.cls.kind == MatrixKind::hyperbolic) ++hyperbolic;
            else if (e.cls.finite_order()) ++finite;
        }
        std::ostringstream detail;
        detail << entries.size() << " distinct elements up to length " << bound << ": " << finite
               << " of finite order, " << hyperbolic << " hyperbolic, " << infinite << " elliptic of infinite order";
        Value v;
        record("orbit_scan", str_list(t, "gens"), v, "classification of every word", detail.str());
        if (auto n = opt_int(t, "expect_elliptic_infinite"))
            check(std::to_string(*n) + " elliptic element(s) of infinite order", infinite == *n, detail.str());
        if (auto n = opt_int(t, "expect_elements"))
            check(std::to_string(*n) + " distinct elements", static_cast<long>(entries.size()) == *n, detail.str());
    }

    void word_search_step(const toml::table& t)
    {
        const std::string ttext = req_str(t, "target");
        const ProjMatrix target = mat(ttext);
        std::vector<NamedGen> gens;
        for (const auto& g : str_list(t, "gens")) gens.push_back({g, mat(g)});
        const int max_len = static_cast<int>(opt_int(t, "max_len").value_or(8));
        const auto w = word_search(target, gens, max_len);
        Value v;
        v.element = Element::term(target);
        std::string found = w ? to_string(*w, gens) : "none";
        record("word_search", {ttext}, v, "bidirectional search up to length " + std::to_string(max_len),
               "shortest word: " + found);
        if (auto n = opt_int(t, "expect_length"))
            check("shortest word has length " + std::to_string(*n), w && static_cast<long>(w->size()) == *n, found);
        if (auto e = opt_bool(t, "expect_found")) check(std::string("word ") + (*e ? "found" : "absent"), w.has_value() == *e, found);
        if (auto e = opt_str(t, "expect_word")) check("shortest word is " + *e, found == *e, found);
        if (auto c = opt_str(t, "certify")) {
            const Word pw = parse_word(*c, gens);
            const ProjMatrix got = evaluate(pw, gens);
            const bool holds = got == target;
            const bool want = opt_bool(t, "expect_certified").value_or(true);
            if (!holds)
                out_.flags.push_back("the printed word " + *c + " evaluates to " + show(got) + ", not " + show(target));
            check(ttext + (want ? " = " : " != ") + *c, holds == want, show(got));
        }
    }

    void classify_step(const toml::table& t)
    {
        const std::string mtext = req_str(t, "matrix");
        const ProjMatrix m = mat(mtext);
        Value v;
        v.element = Element::term(m);
        record("classify", {mtext}, v, classify(m).describe(), "canonical " + m.to_string());
        expect_class(t, m);
        if (auto e = opt_bool(t, "expect_in_gamma0"))
            check("in Gamma_0 is " + std::string(*e ? "true" : "false"), in_gamma0(m, hyp_.level()) == *e);
        if (auto e = opt_str(t, "expect_canonical")) check("canonical form is " + *e, m.to_string() == *e, m.to_string());
        store(t, std::move(v));
    }

    void expect_step(const toml::table& t)
    {
        const std::string lhs = req_str(t, "lhs");
        const std::string rhs = req_str(t, "equals");
        const std::string mode = opt_str(t, "mode").value_or("exact");
        const Element l = eval(lhs), r = eval(rhs);
        bool ok;
        if (mode == "exact") ok = l == r;
        else if (mode == "reduced") ok = hyp_.reduce(l) == hyp_.reduce(r);
        else fail("mode must be exact or reduced");
        Value v;
        v.element = l;
        record("expect", {lhs, rhs}, v, mode + " comparison");
        check(lhs + " == " + rhs + " (" + mode + ")", ok, show(l) + " vs " + show(r));
    }

    // Replaces the input by any element with the same reduction.
    void rewrite(const toml::table& t)
    {
        const std::string in = req_str(t, "input");
        const std::string to = req_str(t, "to");
        const Element y = eval(to);
        Certificate cx, cy;
        const Element rx = hyp_.reduce(value(in).element, &cx);
        const Element ry = hyp_.reduce(y, &cy);
        if (rx != ry) fail("'" + to + "' does not reduce like " + in + " (" + show(ry) + " vs " + show(rx) + ")");
        Value v;
        if (value(in).fact) {
            // x - (x - rx) + (y - ry) = y
            Certificate c = cx.scaled(Coefficient(-1));
            c.add(Generator::relation(fact(in)), Element::one());
            c.append(cy);
            v = make_fact(in + "/rewritten", y, c);
        } else {
            v.element = y;
        }
        record("rewrite", {in}, v, "both reduce to the same element");
        expectations(t, v.element);
        store(t, std::move(v));
    }

    void combine(const toml::table& t)
    {
        const toml::array* terms = t["terms"].as_array();
        if (!terms || terms->empty()) fail("combine needs terms = [[relation, right multiplier], ...]");
        Element sum;
        Certificate c;
        std::vector<std::string> inputs;
        for (const auto& node : *terms) {
            const toml::array* a = node.as_array();
            if (!a || a->size() != 2 || !(*a)[0].is_string() || !(*a)[1].is_string())
                fail("combine terms are [relation, right multiplier]");
            const std::string name = *(*a)[0].value<std::string>();
            const std::string by = *(*a)[1].value<std::string>();
            const Element m = eval(by);
            sum += fact(name)->element * m;
            c.add(Generator::relation(fact(name)), m);
            inputs.push_back(name + " * (" + by + ")");
        }
        Value v = make_fact("combination", sum, c);
        record("combine", inputs, v, "sum of relations times right multipliers");
        expectations(t, v.element);
        store(t, std::move(v));
    }

    void assert_zero(const toml::table& t)
    {
        const std::string in = req_str(t, "input");
        const Element x = eval(in);
        const Element r = hyp_.reduce(x);
        Value v;
        v.element = r;
        record("assert_zero", {in}, v, "reduces to 0 under the current hypotheses");
        check(in + " ≡ 0", r.is_zero(), show(r));
    }

    RunResult& out_;
    HypothesisSet hyp_;
    std::map<std::string, Value> values_;
    std::optional<Value> last_;
    std::size_t index_ = 0;
};

toml::table parse_toml(const std::string& text, const std::string& source)
{
    try {
        return toml::parse(text, source);
    } catch (const toml::parse_error& e) {
        throw ParseError(std::string(e.description()), static_cast<int>(e.source().begin.line),
                         static_cast<int>(e.source().begin.column));
    }
}

HypothesisSet initial_hypotheses(const toml::table& top, const RunOptions& opts)
{
    const auto level = top["level"].value<std::int64_t>();
    if (!level) throw Error(ErrorKind::InvalidArgument, "script needs an integer 'level'");
    const int weight = static_cast<int>(top["weight"].value_or<std::int64_t>(2));
    const int depth = opts.depth ? *opts.depth : static_cast<int>(top["depth"].value_or<std::int64_t>(6));
    HypothesisSet hyp(static_cast<long>(*level), weight, depth);
    ExprContext ctx;
    ctx.level = hyp.level();
    ctx.weight = weight;
    if (const toml::array* inv = top["invariants"].as_array())
        for (const auto& n : *inv) {
            auto s = n.value<std::string>();
            if (!s) throw Error(ErrorKind::InvalidArgument, "invariants must be strings");
            hyp.add_invariant(parse_matrix_expr(*s, ctx));
        }
    if (const toml::array* h = top["hecke"].as_array())
        for (const auto& n : *h) {
            auto v = n.value<std::int64_t>();
            if (!v) throw Error(ErrorKind::InvalidArgument, "hecke must list integers");
            hyp.assume_hecke(static_cast<int>(*v));
        }
    return hyp;
}

} // namespace

bool RunResult::verify_step(std::size_t i, std::string* why) const
{
    const Step& s = log.steps().at(i);
    if (!s.has_certificate) {
        if (why) *why = "step has no certificate";
        return false;
    }
    return base_hyp->verify(s.claimed, s.certificate, why);
}

RunResult run_script(const std::string& text, const std::string& source_name, const RunOptions& opts)
{
    RunResult out;
    out.name = source_name;
    const toml::table top = parse_toml(text, source_name);
    if (auto c = top["case"].value<std::string>()) out.name = *c;
    out.title = top["title"].value_or<std::string>("");
    HypothesisSet hyp = initial_hypotheses(top, opts);
    out.level = hyp.level();
    out.base_hyp = hyp;
    Interp interp(out, hyp);
    try {
        if (const toml::array* steps = top["step"].as_array()) interp.run(*steps);
        out.ok = true;
    } catch (const Error& e) {
        out.error = e.what();
        out.error_kind = e.kind();
        out.ok = false;
    }
    for (const auto& c : out.checks) out.ok = out.ok && c.ok;
    out.values = std::move(interp.values());
    out.final_hyp = interp.hyp();
    return out;
}

DerivationLog assert_equiv_zero(const Element& x, const HypothesisSet& hyp, const std::string& script)
{
    RunResult out;
    out.base_hyp = hyp;
    out.level = hyp.level();
    const toml::table top = parse_toml(script, "script");
    Interp interp(out, hyp);
    if (const toml::array* steps = top["step"].as_array()) interp.run(*steps);
    for (const auto& c : out.checks)
        if (!c.ok)
            throw Error(ErrorKind::StepFailed, "step " + std::to_string(c.step) + ": check failed: " + c.what);
    const Element r = interp.hyp().reduce(x);
    Step s;
    s.rule = "assert_equiv_zero";
    s.output = r;
    s.justification = r.is_zero() ? "reduces to 0" : "does not reduce to 0";
    out.log.push(s);
    if (!r.is_zero())
        throw Error(ErrorKind::StepFailed, "step " + std::to_string(out.log.steps().size()) +
                                               ": final element is " + r.to_string(hyp.level()) + ", not 0");
    return out.log;
}

std::string to_text(const RunResult& r)
{
    std::ostringstream os;
    os << "== " << r.name;
    if (!r.title.empty()) os << ": " << r.title;
    os << "\n" << r.log.to_text(r.level);
    for (const auto& c : r.checks)
        os << (c.ok ? "  ok   " : "  FAIL ") << "[" << c.step << "] " << c.what
           << (c.ok || c.detail.empty() ? "" : " -- " + c.detail) << "\n";
    for (const auto& f : r.flags) os << "  note: " << f << "\n";
    if (!r.error.empty()) os << "  error: " << r.error << "\n";
    os << (r.ok ? "PASS " : "FAIL ") << r.name << "\n";
    return os.str();
}

} // namespace hw
