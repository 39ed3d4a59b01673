#include "hw/group_ring.hpp"

namespace hw {

Element Element::term(const ProjMatrix& m, const Coefficient& c)
{
    Element x;
    x.add_term(m, c);
    return x;
}

Element Element::one_minus(const ProjMatrix& m)
{
    return one() - term(m);
}

Coefficient Element::coefficient(const ProjMatrix& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? Coefficient() : it->second;
}

void Element::add_term(const ProjMatrix& m, const Coefficient& c)
{
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Element Element::operator-() const
{
    Element r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

Element& Element::operator+=(const Element& y)
{
    for (const auto& [m, c] : y.terms_) add_term(m, c);
    return *this;
}

Element& Element::operator-=(const Element& y)
{
    for (const auto& [m, c] : y.terms_) add_term(m, -c);
    return *this;
}

Element operator*(const Element& x, const Element& y)
{
    Element r;
    for (const auto& [mx, cx] : x.terms_)
        for (const auto& [my, cy] : y.terms_) r.add_term(mx * my, cx * cy);
    return r;
}

Element operator*(const Coefficient& c, const Element& x)
{
    Element r;
    if (c.is_zero()) return r;
    for (const auto& [m, cx] : x.terms_) r.add_term(m, c * cx);
    return r;
}

Element operator*(const Element& x, const ProjMatrix& m)
{
    Element r;
    for (const auto& [mx, c] : x.terms_) r.add_term(mx * m, c);
    return r;
}

Element operator*(const ProjMatrix& m, const Element& x)
{
    Element r;
    for (const auto& [mx, c] : x.terms_) r.add_term(m * mx, c);
    return r;
}

Element Element::substitute(const RuleSet& rules) const
{
    if (rules.empty()) return *this;
    Element r;
    for (const auto& [m, c] : terms_) r.add_term(m, hw::substitute(c, rules));
    return r;
}

Coefficient Element::augmentation() const
{
    Coefficient s;
    for (const auto& [m, c] : terms_) s += c;
    return s;
}

std::string Element::to_string(long level) const
{
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        std::string cs = c.to_string();
        const bool simple = c.terms().size() == 1;
        bool neg = simple && cs[0] == '-';
        if (neg) cs.erase(0, 1);
        if (!simple) cs = "(" + cs + ")";
        if (first) s += neg ? "-" : "";
        else s += neg ? " - " : " + ";
        first = false;
        if (m == ProjMatrix{}) {
            s += cs;
            continue;
        }
        if (cs != "1") s += cs + "*";
        s += level > 0 ? to_normalized_string(m, level) : m.to_string();
    }
    return s;
}

bool equal(const Element& x, const Element& y, const RuleSet& rules)
{
    return (x - y).substitute(rules).is_zero();
}

} // namespace hw
