#pragma once

// Structural moves on relations: pairing, chain combination, conjugation,
// four-term factorization, the involution transform, Weil cancellation and
// orbit scans.

#include <optional>
#include <string>
#include <vector>

#include "hw/group_ring.hpp"
#include "hw/hypotheses.hpp"
#include "hw/words.hpp"

namespace hw {

// coeff * (1 - gamma) * right
struct Pair {
    ProjMatrix gamma;
    ProjMatrix right;
    Coefficient coeff;
};

struct PairedRelation {
    std::vector<Pair> pairs;
    // expand() == normalizer * x * post for the element x that was paired.
    Coefficient normalizer = Coefficient(1);
    ProjMatrix post;
    int gamma0_count = 0;
    int integral_count = 0;

    Element expand() const;
    std::string to_string(long level = 0) const;
};

enum class PairStrategy { exhaustive, prefer_gamma0 };

// Matches each negative term nu with a positive term pi of opposite
// coefficient: c*(pi - nu) = -c*(1 - pi nu^-1) nu. All bijections are
// returned; prefer_gamma0 sorts them by the number of gamma in Gamma_0(N),
// then by the number with determinant 1, keeping enumeration order on ties.
// When every nu is [[1, a], [0, p]] with one p, the right factors are put
// in the beta(a/p) form by right multiplication with diag(1, p)^-1.
std::vector<PairedRelation> pair_terms(const Element& x, long level, PairStrategy strategy,
                                       bool beta_form = true);

struct ChainMove {
    std::string kind;     // "relation <i>" or "fricke"
    ProjMatrix g;
    ProjMatrix M;
    Coefficient s;
};

struct ChainResult {
    ProjMatrix g0;
    ProjMatrix E;
    Coefficient sign;              // relation is (1 - g0)(1 - sign*E)
    Element relation;
    Certificate certificate;
    std::vector<ChainMove> moves;
};

struct ChainInput {
    PairedRelation paired;
    RelationPtr fact;  // fact->element == paired.expand()
};

// Breadth-first over states (1 - g0) ≡ s (1 - g) M, using two-pair
// relations and conjugation by H, until g returns to g0. If g0 itself does
// not occur but g0^-1 does, the chain runs on g0^-1 and is conjugated back.
ChainResult chain_combine(const std::vector<ChainInput>& rels, const ProjMatrix& g0, const HypothesisSet& hyp,
                          int max_moves = 6);

struct ConjugateResult {
    Element relation;      // (1 - target) * delta Y delta^-1
    ProjMatrix delta;
    Reduction word;
    Certificate certificate;
};

// From R = (1 - g) Y ≡ 0 and a ball element delta with delta g delta^-1 =
// target, derives (1 - target) delta Y delta^-1 ≡ 0.
ConjugateResult conjugate_relation(const RelationPtr& fact, const ProjMatrix& g, const Element& Y,
                                   const ProjMatrix& target, const HypothesisSet& hyp);

// x = 1 + ca*A + cb*B + cc*C
struct FourTerm {
    std::vector<std::pair<ProjMatrix, Coefficient>> others;
};
FourTerm four_term_shape(const Element& x);

struct Factorization {
    Element left, right;
};

// Every ordered pair (1 + c_i M_i)(1 + c_j M_j) equal to x.
std::vector<Factorization> factor_1ABC(const Element& x);

bool is_involution(const ProjMatrix& m);

struct InvolutionResult {
    ProjMatrix A, B, C;
    Element first, second;   // (1 - C'A^-1) and (1 + A B' A^-1)
    Element product;         // first * second * A == x * (1 + B')
    bool vacuous = false;
};

// x = 1 + A - uB - vC with u^2 = 1 and B^2 = 1, B' = uB, C' = vC. When
// `b_hint` is given it selects B among the non-A terms.
InvolutionResult involution_transform(const Element& x, const std::optional<ProjMatrix>& b_hint = std::nullopt);

// u^-1 * x * P^-1 where u is the (unit) coefficient of P in x.
Element right_normalize(const Element& x, const ProjMatrix& pivot);

struct WeilResult {
    Element Y;
    ProjMatrix E;
    Coefficient sign;
    ProjMatrix rotation;   // E, or E^2 when the sign is not 1
    MatrixClass cls;
};

// x == Y (1 - sign*E) for a unit sign; Weil's lemma needs the relevant
// rotation to be elliptic of infinite order.
WeilResult weil_cancel(const Element& x, const Element& Y, const ProjMatrix& E);

struct OrbitEntry {
    Word word;
    ProjMatrix m;
    MatrixClass cls;
};

std::vector<OrbitEntry> group_orbit_scan(const std::vector<NamedGen>& gens, int word_len, Exec e = default_exec());

struct PivotMatch {
    ProjMatrix pivot;
    Coefficient unit;
    Element relation;        // (1 - gamma) Q P
    Certificate certificate;
};

// Finds P with reduce((1 - gamma) Q P) == u * reduce(X) for a unit u, from
// candidates s h t: s in {I, gamma, gamma^-1}, h in {I, H}, t a term of
// reduce(X).
std::optional<PivotMatch> left_factor_search(const RelationPtr& fact, const ProjMatrix& gamma, const Element& Q,
                                             const HypothesisSet& hyp);

} // namespace hw
