#pragma once

// Coefficient ring: sparse polynomials over Q in the formal Hecke
// eigenvalues a_n and the Fricke sign eps, with eps^2 = 1.

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hw/exact.hpp"

namespace hw {

// Symbol 0 is eps; symbol n >= 1 is a_n.
struct Symbol {
    int id = 0;

    static Symbol eps() { return {0}; }
    static Symbol eigen(int n) { return {n}; }
    bool is_eps() const { return id == 0; }
    std::string name() const;
    // Accepts "eps", "a_3", "a3".
    static Symbol parse(const std::string& s);

    friend auto operator<=>(Symbol, Symbol) = default;
};

class Monomial {
public:
    Monomial() = default;
    explicit Monomial(Symbol s, unsigned exponent = 1);

    // Sorted by symbol id, exponents > 0, eps exponent reduced mod 2.
    const std::vector<std::pair<Symbol, unsigned>>& factors() const { return factors_; }
    unsigned degree() const;
    unsigned exponent(Symbol s) const;
    bool is_one() const { return factors_.empty(); }

    friend Monomial operator*(const Monomial& x, const Monomial& y);
    // Graded lexicographic.
    friend bool operator<(const Monomial& x, const Monomial& y);
    friend bool operator==(const Monomial& x, const Monomial& y) { return x.factors_ == y.factors_; }

    std::string to_string() const;

private:
    std::vector<std::pair<Symbol, unsigned>> factors_;
    friend class Coefficient;
};

class Coefficient {
public:
    using Terms = std::map<Monomial, Rational>;

    Coefficient() = default;
    Coefficient(long q) : Coefficient(Rational(q)) {}
    Coefficient(const Rational& q);
    static Coefficient symbol(Symbol s, unsigned exponent = 1);
    static Coefficient eps() { return symbol(Symbol::eps()); }
    static Coefficient eigen(int n) { return symbol(Symbol::eigen(n)); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_rational() const;
    Rational rational_part() const;  // coefficient of the monomial 1
    bool has_eigen_symbols() const;
    bool has_eps() const;

    // q * eps^e with q != 0; these are exactly the invertible elements we use.
    bool is_unit() const;
    Coefficient unit_inverse() const;

    Coefficient operator-() const;
    Coefficient& operator+=(const Coefficient& y);
    Coefficient& operator-=(const Coefficient& y);
    friend Coefficient operator+(Coefficient x, const Coefficient& y) { return x += y; }
    friend Coefficient operator-(Coefficient x, const Coefficient& y) { return x -= y; }
    friend Coefficient operator*(const Coefficient& x, const Coefficient& y);
    friend bool operator==(const Coefficient& x, const Coefficient& y) { return x.terms_ == y.terms_; }

    Coefficient pow(unsigned e) const;

    // Evaluates with the given symbol values; throws UnresolvedSymbol when a
    // symbol has no value.
    std::complex<double> evaluate(const std::function<std::optional<std::complex<double>>(Symbol)>& value) const;

    std::string to_string() const;

private:
    void add_term(const Monomial& m, const Rational& q);
    Terms terms_;
};

struct SubstitutionRule {
    Symbol lhs;
    Coefficient rhs;
};

class RuleSet {
public:
    RuleSet() = default;
    // Throws CyclicRules when some symbol depends on itself.
    explicit RuleSet(std::vector<SubstitutionRule> rules);

    const std::vector<SubstitutionRule>& rules() const { return rules_; }
    bool empty() const { return rules_.empty(); }

private:
    std::vector<SubstitutionRule> rules_;
};

// Applies rules until no left-hand symbol remains.
Coefficient substitute(const Coefficient& x, const RuleSet& rules);

// Hecke relations among eigenvalues for trivial character, weight k:
//   a_{mn} = a_m a_n for coprime m, n
//   a_{p^{e+1}} = a_p a_{p^e} - chi(p) p^{k-1} a_{p^{e-1}},  chi(p) = 0 if p | level
// One rule per composite n in [4, n_max].
RuleSet hecke_rules(long level, int weight, int n_max);

} // namespace hw
