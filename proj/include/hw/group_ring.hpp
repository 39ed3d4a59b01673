#pragma once

// Finite formal sums of projective matrices with Coefficient scalars.

#include <map>
#include <string>

#include "hw/coeff.hpp"
#include "hw/exact.hpp"

namespace hw {

class Element {
public:
    using Terms = std::map<ProjMatrix, Coefficient>;

    Element() = default;
    static Element term(const ProjMatrix& m, const Coefficient& c = Coefficient(1));
    static Element one() { return term(ProjMatrix{}); }
    // 1 - m
    static Element one_minus(const ProjMatrix& m);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    Coefficient coefficient(const ProjMatrix& m) const;

    void add_term(const ProjMatrix& m, const Coefficient& c);

    Element operator-() const;
    Element& operator+=(const Element& y);
    Element& operator-=(const Element& y);
    friend Element operator+(Element x, const Element& y) { return x += y; }
    friend Element operator-(Element x, const Element& y) { return x -= y; }
    friend Element operator*(const Element& x, const Element& y);
    friend Element operator*(const Coefficient& c, const Element& x);
    friend Element operator*(const Element& x, const ProjMatrix& m);
    friend Element operator*(const ProjMatrix& m, const Element& x);
    friend bool operator==(const Element& x, const Element& y) { return x.terms_ == y.terms_; }

    Element substitute(const RuleSet& rules) const;
    // Sum of all coefficients (the augmentation).
    Coefficient augmentation() const;

    // "c1*[a b; c d] + c2*[...]"; with a level, matrices are printed scaled
    // to determinant 1.
    std::string to_string(long level = 0) const;

private:
    Terms terms_;
};

// Equality after substituting `rules` into both sides.
bool equal(const Element& x, const Element& y, const RuleSet& rules = {});

} // namespace hw
