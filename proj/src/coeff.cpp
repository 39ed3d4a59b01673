#include "hw/coeff.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "hw/error.hpp"

namespace hw {

std::string Symbol::name() const
{
    return id == 0 ? "eps" : "a_" + std::to_string(id);
}

Symbol Symbol::parse(const std::string& s)
{
    if (s == "eps" || s == "e") return eps();
    std::string digits;
    if (s.rfind("a_", 0) == 0) digits = s.substr(2);
    else if (s.rfind("a", 0) == 0) digits = s.substr(1);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit))
        throw Error(ErrorKind::InvalidArgument, "unknown coefficient symbol '" + s + "'");
    const int n = std::stoi(digits);
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "eigenvalue index must be positive");
    return eigen(n);
}

Monomial::Monomial(Symbol s, unsigned exponent)
{
    if (s.is_eps()) exponent %= 2;
    if (exponent) factors_.emplace_back(s, exponent);
}

unsigned Monomial::degree() const
{
    unsigned d = 0;
    for (const auto& [s, e] : factors_) d += e;
    return d;
}

unsigned Monomial::exponent(Symbol s) const
{
    for (const auto& [t, e] : factors_)
        if (t == s) return e;
    return 0;
}

Monomial operator*(const Monomial& x, const Monomial& y)
{
    Monomial r;
    auto i = x.factors_.begin(), j = y.factors_.begin();
    while (i != x.factors_.end() || j != y.factors_.end()) {
        if (j == y.factors_.end() || (i != x.factors_.end() && i->first < j->first)) {
            r.factors_.push_back(*i++);
        } else if (i == x.factors_.end() || j->first < i->first) {
            r.factors_.push_back(*j++);
        } else {
            unsigned e = i->second + j->second;
            if (i->first.is_eps()) e %= 2;
            if (e) r.factors_.emplace_back(i->first, e);
            ++i;
            ++j;
        }
    }
    return r;
}

bool operator<(const Monomial& x, const Monomial& y)
{
    const unsigned dx = x.degree(), dy = y.degree();
    if (dx != dy) return dx < dy;
    return x.factors_ < y.factors_;
}

std::string Monomial::to_string() const
{
    std::string s;
    for (const auto& [sym, e] : factors_) {
        if (!s.empty()) s += "*";
        s += sym.name();
        if (e > 1) s += "^" + std::to_string(e);
    }
    return s.empty() ? "1" : s;
}

Coefficient::Coefficient(const Rational& q)
{
    if (q != 0) terms_.emplace(Monomial{}, q);
}

Coefficient Coefficient::symbol(Symbol s, unsigned exponent)
{
    Coefficient c;
    c.terms_.emplace(Monomial(s, exponent), Rational(1));
    return c;
}

void Coefficient::add_term(const Monomial& m, const Rational& q)
{
    if (q == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, q);
    if (!inserted) {
        it->second += q;
        if (it->second == 0) terms_.erase(it);
    }
}

bool Coefficient::is_rational() const
{
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Coefficient::rational_part() const
{
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
}

bool Coefficient::has_eigen_symbols() const
{
    for (const auto& [m, q] : terms_)
        for (const auto& [s, e] : m.factors())
            if (!s.is_eps()) return true;
    return false;
}

bool Coefficient::has_eps() const
{
    for (const auto& [m, q] : terms_)
        if (m.exponent(Symbol::eps())) return true;
    return false;
}

bool Coefficient::is_unit() const
{
    if (terms_.size() != 1) return false;
    const Monomial& m = terms_.begin()->first;
    return m.is_one() || (m.factors().size() == 1 && m.factors()[0].first.is_eps());
}

Coefficient Coefficient::unit_inverse() const
{
    if (!is_unit()) throw Error(ErrorKind::InvalidArgument, "coefficient " + to_string() + " is not a unit");
    Coefficient r;
    const auto& [m, q] = *terms_.begin();
    r.terms_.emplace(m, Rational(1 / q));
    return r;
}

Coefficient Coefficient::operator-() const
{
    Coefficient r = *this;
    for (auto& [m, q] : r.terms_) q = -q;
    return r;
}

Coefficient& Coefficient::operator+=(const Coefficient& y)
{
    for (const auto& [m, q] : y.terms_) add_term(m, q);
    return *this;
}

Coefficient& Coefficient::operator-=(const Coefficient& y)
{
    for (const auto& [m, q] : y.terms_) add_term(m, -q);
    return *this;
}

Coefficient operator*(const Coefficient& x, const Coefficient& y)
{
    Coefficient r;
    for (const auto& [mx, qx] : x.terms_)
        for (const auto& [my, qy] : y.terms_) r.add_term(mx * my, qx * qy);
    return r;
}

Coefficient Coefficient::pow(unsigned e) const
{
    Coefficient r(1), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

std::complex<double> Coefficient::evaluate(
    const std::function<std::optional<std::complex<double>>(Symbol)>& value) const
{
    std::complex<double> total = 0;
    for (const auto& [m, q] : terms_) {
        std::complex<double> t = q.get_d();
        for (const auto& [s, e] : m.factors()) {
            auto v = value(s);
            if (!v) throw Error(ErrorKind::UnresolvedSymbol, "no value for symbol " + s.name());
            t *= std::pow(*v, static_cast<int>(e));
        }
        total += t;
    }
    return total;
}

std::string Coefficient::to_string() const
{
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, q] : terms_) {
        Rational a = abs(q);
        if (!first) os << (q < 0 ? " - " : " + ");
        else if (q < 0) os << "-";
        first = false;
        if (m.is_one()) os << a;
        else if (a == 1) os << m.to_string();
        else os << a << "*" << m.to_string();
    }
    return os.str();
}

RuleSet::RuleSet(std::vector<SubstitutionRule> rules) : rules_(std::move(rules))
{
    std::map<Symbol, std::set<Symbol>> deps;
    for (const auto& r : rules_) {
        auto& d = deps[r.lhs];
        for (const auto& [m, q] : r.rhs.terms())
            for (const auto& [s, e] : m.factors()) d.insert(s);
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    std::map<Symbol, int> state;
    std::function<void(Symbol)> visit = [&](Symbol s) {
        int& st = state[s];
        if (st == 2) return;
        if (st == 1) throw Error(ErrorKind::CyclicRules, "substitution rules are cyclic at " + s.name());
        st = 1;
        if (auto it = deps.find(s); it != deps.end())
            for (Symbol t : it->second) visit(t);
        state[s] = 2;
    };
    for (const auto& [s, d] : deps) visit(s);
}

Coefficient substitute(const Coefficient& x, const RuleSet& rules)
{
    if (rules.empty()) return x;
    std::map<Symbol, const Coefficient*> lookup;
    for (const auto& r : rules.rules()) lookup[r.lhs] = &r.rhs;

    Coefficient cur = x;
    // Terminates because the rule graph is acyclic.
    for (;;) {
        bool changed = false;
        Coefficient next;
        for (const auto& [m, q] : cur.terms()) {
            Coefficient term(q);
            for (const auto& [s, e] : m.factors()) {
                auto it = lookup.find(s);
                if (it != lookup.end()) {
                    term = term * it->second->pow(e);
                    changed = true;
                } else {
                    term = term * Coefficient::symbol(s, e);
                }
            }
            next += term;
        }
        cur = std::move(next);
        if (!changed) return cur;
    }
}

namespace {

std::vector<std::pair<long, int>> factorize(long n)
{
    std::vector<std::pair<long, int>> f;
    for (long p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) f.emplace_back(p, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

} // namespace

RuleSet hecke_rules(long level, int weight, int n_max)
{
    std::vector<SubstitutionRule> rules;
    auto a = [](long n) { return n == 1 ? Coefficient(1) : Coefficient::eigen(static_cast<int>(n)); };
    for (long n = 4; n <= n_max; ++n) {
        auto f = factorize(n);
        if (f.size() == 1 && f[0].second == 1) continue;  // prime
        Coefficient rhs;
        if (f.size() > 1) {
            rhs = Coefficient(1);
            for (const auto& [p, e] : f) {
                long pe = 1;
                for (int i = 0; i < e; ++i) pe *= p;
                rhs = rhs * a(pe);
            }
        } else {
            const long p = f[0].first;
            const long prev = n / p, prev2 = prev / p;
            rhs = a(p) * a(prev);
            if (level % p != 0) {
                Integer pk;
                mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(weight - 1));
                rhs -= Coefficient(Rational(pk)) * a(prev2);
            }
        }
        rules.push_back({Symbol::eigen(static_cast<int>(n)), std::move(rhs)});
    }
    return RuleSet(std::move(rules));
}

} // namespace hw
