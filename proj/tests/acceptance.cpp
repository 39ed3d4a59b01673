// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <iostream>
#include <random>
#include <sstream>

#include "hw/cases.hpp"
#include "hw/error.hpp"
#include "hw/expr.hpp"
#include "hw/hecke.hpp"
#include "hw/oracle.hpp"
#include "hw/transforms.hpp"
#include "hw/words.hpp"

using namespace hw;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream why;

    void require(bool cond, const std::string& what)
    {
        if (!cond) {
            if (ok) why << what;
            else why << "; " << what;
            ok = false;
        }
    }
};

Element E(const std::string& text, long level)
{
    ExprContext c;
    c.level = level;
    return parse_element(text, c);
}

ProjMatrix P(const std::string& text, long level)
{
    ExprContext c;
    c.level = level;
    return parse_matrix_expr(text, c);
}

std::map<std::string, RunResult> g_runs;

const RunResult& run(const std::string& name)
{
    return g_runs.at(name);
}

const Value* value(const RunResult& r, const std::string& name)
{
    auto it = r.values.find(name);
    return it == r.values.end() ? nullptr : &it->second;
}

void criterion1(Outcome& o)
{
    for (long n : {5L, 7L, 9L}) {
        const std::string name = "lemma-M2-" + std::to_string(n);
        const RunResult& r = run(name);
        o.require(r.ok, name + " failed");
        const ProjMatrix m2 = ProjMatrix::from_integers(2, -1, -n, (n + 1) / 2);
        o.require(r.final_hyp && r.final_hyp->has_invariant(m2), name + ": M2 not concluded");
        const DResult d = build_D(2, n, {});
        bool clean = true;
        for (const auto& [m, c] : d.value.terms()) clean = clean && c.is_rational();
        o.require(clean, name + ": symbols survive in D_2");
        o.require(d.value == E("[2 0; -" + std::to_string(n) + " 1] - [1 1; 0 2]", n), name + ": D_2 differs");
        o.require(d.value * inv(ProjMatrix::from_integers(1, 1, 0, 2)) == Element::term(m2) - Element::one(),
                  name + ": D_2 is not (M2 - 1)[1 1; 0 2]");
    }
}

void criterion2(Outcome& o)
{
    const RunResult& r = run("gamma11");
    o.require(r.ok, "gamma11 failed");
    const Value* p3 = value(r, "P3");
    const Value* p4 = value(r, "P4");
    const Value* c = value(r, "C");
    o.require(p3 && p3->element == E("(1 - [3 -1; -11 4]) beta(1/3) + (1 - [3 1; 11 4]) beta(-1/3)", 11),
              "T3 relation differs");
    o.require(p4 && p4->element == E("(1 - [4 -1; -11 3]) beta(1/4) + (1 - [4 1; 11 3]) beta(-1/4)", 11),
              "T4 relation differs");
    if (c && c->eps_matrix) {
        const MatrixClass cls = classify(*c->eps_matrix);
        o.require(*c->eps_matrix == P("[1 -2/3; 11/2 -8/3]", 11), "epsilon differs");
        o.require(cls.tau == Rational(25, 9), "tau is not 25/9");
        o.require(cls.elliptic_infinite(), "epsilon is not elliptic of infinite order");
    } else {
        o.require(false, "no chain result");
    }
    const Step& last = r.log.steps().back();
    o.require(last.rule == "weil_cancel" && last.output == Element::one_minus(P("[3 -1; -11 4]", 11)),
              "log does not end with the Weil step");
    o.require(r.final_hyp && r.final_hyp->has_invariant(P("[3 -1; -11 4]", 11)), "[3 -1; -11 4] not concluded");
}

void criterion3(Outcome& o)
{
    const RunResult& r = run("t13-combine");
    o.require(r.ok, "t13-combine failed");
    const Value* e1 = value(r, "E1");
    const Value* e2 = value(r, "E2");
    if (!e1 || !e2) {
        o.require(false, "epsilon values missing");
        return;
    }
    const ProjMatrix m1 = e1->element.terms().begin()->first;
    const ProjMatrix m2 = e2->element.terms().begin()->first;
    o.require(m1 == P("[sqrt(13) 14/(3*sqrt(13)); -3*sqrt(13) -sqrt(13)]", 13), "eps1 differs");
    o.require(m2 == P("[-sqrt(13) -4/sqrt(13); 7*sqrt(13)/2 sqrt(13)]", 13), "eps2 differs");
    o.require(m1.entries() == std::array<Integer, 4>{39, 14, -117, -39}, "eps1 canonical tuple");
    o.require(m2.entries() == std::array<Integer, 4>{26, 8, -91, -26}, "eps2 canonical tuple");
    o.require(tau(m1) == 0 && classify(m1).order == 2, "eps1 is not of order 2");
    o.require(tau(m2) == 0 && classify(m2).order == 2, "eps2 is not of order 2");
    const ProjMatrix prod = m1 * m2;
    o.require(prod == P("[10/3 2/3; -13/2 -1]", 13), "eps1 eps2 differs");
    o.require(tau(prod) == Rational(49, 9) && classify(prod).kind == MatrixKind::hyperbolic,
              "eps1 eps2 is not hyperbolic with tau 49/9");
    const auto orbit = group_orbit_scan({{"E1", m1}, {"E2", m2}}, 20);
    for (const auto& e : orbit) o.require(!e.cls.elliptic_infinite(), "elliptic element of infinite order found");
}

void criterion4(Outcome& o)
{
    const RunResult& r = run("t13-T6");
    o.require(r.ok, "t13-T6 failed");
    const DResult d = build_D(6, 13, standard_corrections(6));
    o.require(d.value == E("-[1 1; 0 6] + [6 0; -65 1] - [1 5; 0 6] + [6 0; -13 1]", 13),
              "D_6 differs from the four-term display");
    const ProjMatrix g = ProjMatrix::from_integers(6, -1, -65, 11);
    const ProjMatrix k = ProjMatrix::from_integers(6, -5, -13, 11);
    o.require(r.final_hyp && r.final_hyp->has_invariant(g), "[6 -1; -65 11] not concluded");
    const std::vector<NamedGen> gens = {{"T", translation()}, {"H", fricke(13)}, {"M2", M2(13)}};
    o.require(word_search(g, gens, 12).has_value(), "no word for [6 -1; -65 11]");
    const ProjMatrix w1 = evaluate(parse_word("H T H T H M2 H", gens), gens);
    const ProjMatrix w2 = evaluate(parse_word("M2^-1 H T^-1 H T^-1", gens), gens);
    o.require(w1 == g, "H T H T H M2 H evaluates to " + w1.to_string() + ", not " + g.to_string());
    o.require(w2 == k, "M2^-1 H T^-1 H T^-1 evaluates to " + w2.to_string() + ", not " + k.to_string());
}

void criterion5(Outcome& o)
{
    const std::map<long, std::array<std::string, 3>> abc = {
        {7, {"[29/7 5/7; -13 -2]", "[5*sqrt(13)/7 17/(7*sqrt(13)); -22*sqrt(13)/7 -5*sqrt(13)/7]",
             "[5*sqrt(13)/7 24/(7*sqrt(13)); -3*sqrt(13) -sqrt(13)]"}},
        {9, {"[10/3 1; -13/3 -1]", "[2*sqrt(13) 9/sqrt(13); -53*sqrt(13)/9 -2*sqrt(13)]",
             "[7*sqrt(13)/9 4/sqrt(13); -25*sqrt(13)/9 -sqrt(13)]"}},
        {10, {"[21/5 2/5; -13 -1]", "[2*sqrt(13)/5 7/(5*sqrt(13)); -11*sqrt(13)/5 -2*sqrt(13)/5]",
              "[4*sqrt(13)/5 19/(5*sqrt(13)); -3*sqrt(13) -sqrt(13)]"}},
        {15, {"[16/5 1; -117/5 -7]", "[4*sqrt(13) 15/sqrt(13); -209*sqrt(13)/15 -4*sqrt(13)]",
              "[17*sqrt(13)/15 4/sqrt(13); -59*sqrt(13)/15 -sqrt(13)]"}},
    };
    for (const auto& [n, m] : abc) {
        const std::string name = "t13-T" + std::to_string(n);
        const RunResult& r = run(name);
        o.require(r.ok, name + " failed");
        const ProjMatrix A = P(m[0], 13), B = P(m[1], 13), C = P(m[2], 13);
        // the reduced D-combination equals (1 - g)(1 + A - eps B - eps C) P for a pivot P
        const Value* f = value(r, "F");
        const Element q = Element::one() + Element::term(A) - Element::term(B, Coefficient::eps()) -
                          Element::term(C, Coefficient::eps());
        o.require(f && f->right_factor && f->left_gamma && *f->left_gamma == P("[3 1; -13 -4]", 13) &&
                      f->element == Element::one_minus(*f->left_gamma) * *f->right_factor &&
                      right_normalize(*f->right_factor, f->right_factor->terms().rbegin()->first).size() == 4,
                  name + ": no left factorization");
        bool pivot_ok = false;
        if (f && f->right_factor)
            for (const auto& [pm, pc] : f->right_factor->terms()) pivot_ok = pivot_ok || q * pm == *f->right_factor;
        o.require(pivot_ok, name + ": second factor is not the printed 1 + A - B - C");
        o.require(A == C * B, name + ": A != CB");
        o.require(A * B == C, name + ": AB != C");
        o.require(is_involution(B), name + ": B^2 != 1");
        const auto fs = factor_1ABC(q);
        bool cb = false, ab = false;
        for (const auto& fz : fs) {
            cb = cb || (fz.left == Element::one() - Element::term(C, Coefficient::eps()) &&
                        fz.right == Element::one() - Element::term(B, Coefficient::eps()));
            ab = ab || (fz.left == Element::one() + Element::term(A) &&
                        fz.right == Element::one() - Element::term(B, Coefficient::eps()));
        }
        o.require(cb && ab, name + ": factorizations missing");
        if (n == 7) o.require(involution_transform(q, B).vacuous, "T7 involution transform is not vacuous");
    }
    HypothesisSet h(13);
    h.add_invariant(W(13));
    h.add_invariant(M2(13));
    o.require(h.reduce_cancel(build_D(7, 13, {}).value) ==
                  E("-[1 2; 0 7] + [7 0; -52 1] - [1 3; 0 7] + [7 0; -65 1] - [1 4; 0 7] + [7 0; -26 1]"
                    " - [1 5; 0 7] + [7 0; -39 1]",
                    13),
              "T7 display differs");
}

void criterion6(Outcome& o)
{
    const std::map<int, std::string> printed = {
        {3, "(1 - [3 -1; 11 -10/3]) beta(1/3) + (1 - [3 1; -11 -10/3]) beta(-1/3)"},
        {4, "(1 - [4 -1; 11 -5/2]) beta(1/4) + (1 - [4 1; -11 -5/2]) beta(-1/4)"},
        {6, "(1 - [6 -1; 11 -5/3]) beta(1/6) + (1 - [6 1; -11 -5/3]) beta(-1/6)"},
    };
    const std::map<int, std::string> eps = {
        {3, "[sqrt(11) -4/sqrt(11); 3*sqrt(11) -sqrt(11)]"},
        {4, "[sqrt(11) -3/sqrt(11); 4*sqrt(11) -sqrt(11)]"},
        {6, "[sqrt(11) -2/sqrt(11); 6*sqrt(11) -sqrt(11)]"},
    };
    for (const auto& [n, text] : printed) {
        const std::string name = "curiosity-T" + std::to_string(n);
        const RunResult& r = run(name);
        o.require(r.ok, name + " failed");
        const Value* p = value(r, "P" + std::to_string(n));
        o.require(p && p->element == E(text, 11), name + ": pairing differs");
        const Value* c = value(r, "C" + std::to_string(n));
        o.require(c && c->eps_matrix && *c->eps_matrix == P(eps.at(n), 11), name + ": E differs");
        if (c && c->eps_matrix) o.require(classify(*c->eps_matrix).order == 2, name + ": E is not of order 2");
    }
    const RunResult& t6 = run("curiosity-T6");
    bool flagged = false;
    for (const auto& f : t6.flags) flagged = flagged || f.find("hyperbolic") != std::string::npos;
    o.require(flagged, "T6 discrepancy not flagged");
}

// Brute-force order: smallest k <= 60 with x^k projectively trivial.
std::optional<int> brute_order(const ProjMatrix& x)
{
    Integer a = 1, b = 0, c = 0, d = 1;
    for (int k = 1; k <= 60; ++k) {
        Integer na = a * x.a() + b * x.c(), nb = a * x.b() + b * x.d();
        Integer nc = c * x.a() + d * x.c(), nd = c * x.b() + d * x.d();
        a = na, b = nb, c = nc, d = nd;
        if (b == 0 && c == 0 && a == d) return k;
    }
    return std::nullopt;
}

void criterion7(Outcome& o)
{
    std::mt19937_64 rng(20240607);
    std::uniform_int_distribution<long> ent(-50, 50);
    std::uniform_int_distribution<long> small(-3, 3);
    const std::vector<ProjMatrix> finite = {ProjMatrix::from_integers(0, -1, 1, 0), ProjMatrix::from_integers(0, -1, 1, 1),
                                            ProjMatrix::from_integers(0, -1, 1, -1), ProjMatrix::from_integers(1, -1, 1, 1)};
    int tested = 0, finite_seen = 0;
    while (tested < 1000) {
        ProjMatrix x;
        if (tested % 4 == 0) {
            long p, q, r, s;
            do {
                p = small(rng), q = small(rng), r = small(rng), s = small(rng);
            } while (p * s - q * r <= 0);
            const ProjMatrix g = ProjMatrix::from_integers(p, q, r, s);
            x = g * finite[static_cast<std::size_t>(tested / 4) % finite.size()] * inv(g);
            bool fits = true;
            for (const auto& e : x.entries()) fits = fits && abs(e) <= 50;
            if (!fits) continue;
        } else {
            long a = ent(rng), b = ent(rng), c = ent(rng), d = ent(rng);
            if (a * d - b * c <= 0) continue;
            x = ProjMatrix::from_integers(a, b, c, d);
        }
        ++tested;
        const MatrixClass cls = classify(x);
        const auto bo = brute_order(x);
        if (bo) ++finite_seen;
        if (cls.order != bo) {
            o.require(false, "classify disagrees with powering on " + x.to_string());
            return;
        }
    }
    o.require(finite_seen >= 200, "too few finite-order samples");
}

void criterion8(Outcome& o)
{
    const QExpansion f = eta_square_11(8000);
    o.require(f.coeff(4) == f.coeff(2) * f.coeff(2) - 2, "a_4 != a_2^2 - 2");
    o.require(f.coeff(6) == f.coeff(2) * f.coeff(3), "a_6 != a_2 a_3");
    const int sign = measure_fricke_sign(f);
    const auto pts = sample_points(5);
    for (const auto& z : pts) o.require(z.imag() >= 0.5 && z.imag() <= 2.0, "sample point outside the strip");
    std::vector<Element> rels = {Element::one_minus(translation()), Element::one_minus(P("[3 -1; -11 4]", 11)),
                                 Element::one_minus(M2(11)), Element::one_minus(W(11))};
    for (const char* c : {"curiosity-T3", "curiosity-T4", "curiosity-T6"}) {
        const RunResult& r = run(c);
        const std::string key = std::string("C") + c[std::strlen(c) - 1];
        const Value* v = value(r, key);
        if (v) rels.push_back(v->element);
        else o.require(false, std::string(c) + ": relation missing");
    }
    for (const auto& x : rels) {
        const ResidualReport rep = check_relation(f, x, pts, sign);
        std::ostringstream s;
        s << "residual " << rep.max_residual << " for " << x.to_string(11);
        o.require(rep.max_residual < 1e-8, s.str());
        o.require(rep.max_truncation < 1e-12, "truncation bound too large");
    }
}

void criterion9(Outcome& o)
{
    std::mt19937_64 rng(9);
    for (const auto& [name, r] : g_runs) {
        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i < r.log.steps().size(); ++i) {
            const Step& s = r.log.steps()[i];
            if (s.has_certificate && !s.axiom && !s.certificate.uses_axiom()) candidates.push_back(i);
        }
        if (candidates.size() < 3) {
            o.require(false, name + ": fewer than 3 certified steps");
            continue;
        }
        std::shuffle(candidates.begin(), candidates.end(), rng);
        for (int k = 0; k < 3; ++k) {
            std::string why;
            if (!r.verify_step(candidates[static_cast<std::size_t>(k)], &why))
                o.require(false, name + " step " + std::to_string(candidates[static_cast<std::size_t>(k)] + 1) + ": " + why);
        }
    }
}

} // namespace

int main()
{
    for (auto& r : run_cases({})) g_runs.emplace(r.name, std::move(r));

    const std::vector<std::pair<std::string, void (*)(Outcome&)>> criteria = {
        {"M2 from T2 at levels 5, 7, 9", criterion1},
        {"Gamma_0(11) end to end", criterion2},
        {"level 13 obstruction", criterion3},
        {"T6 collapse", criterion4},
        {"T7/T9/T10/T15 factorizations", criterion5},
        {"curiosity cases", criterion6},
        {"classification against powering", criterion7},
        {"numeric annihilation", criterion8},
        {"certificate spot checks", criterion9},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        std::cout << (o.ok ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first;
        if (!o.ok) std::cout << " -- " << o.why.str();
        std::cout << "\n";
        failed += o.ok ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
