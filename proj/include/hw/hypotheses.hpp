#pragma once

// Hypothesis sets, ideal-membership certificates, and the reduction engine.
//
// "x ≡ 0" means x lies in the right ideal generated by 1 - M for invariant
// M, H - eps for the Fricke matrix H, and T_n - a_n for assumed Hecke
// eigenvalues. Every rewrite the engine performs carries a certificate: an
// explicit sum of generator * multiplier equal to the claimed element.

#include <memory>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hw/coeff.hpp"
#include "hw/group_ring.hpp"
#include "hw/kernels.hpp"

namespace hw {

struct Relation;
using RelationPtr = std::shared_ptr<const Relation>;

struct Generator {
    enum class Kind { invariant, fricke, hecke, relation, axiom };

    Kind kind = Kind::invariant;
    Element element;
    std::string label;
    RelationPtr source;  // set for relation, and for invariants that were derived

    static Generator invariant(const ProjMatrix& m, RelationPtr source = nullptr);
    static Generator fricke(long level);
    static Generator hecke(long level, int weight, int n);
    static Generator relation(RelationPtr r);
    static Generator axiom(const Element& e, std::string label);
};

struct CertTerm {
    Generator gen;
    Element multiplier;
};

struct Certificate {
    std::vector<CertTerm> terms;

    void add(const Generator& g, const Element& multiplier);
    void append(const Certificate& other);
    // Every term multiplied on the right by m, resp. scaled by c on the left.
    Certificate right_mul(const Element& m) const;
    Certificate scaled(const Coefficient& c) const;

    Element expand() const;
    // Replaces relation generators (and derived invariants) by their own
    // certificates until only base generators and axioms remain.
    Certificate flatten() const;
    bool uses_axiom() const;
};

// An established fact: element ≡ 0.
struct Relation {
    std::string id;
    Element element;
    Certificate proof;
};

RelationPtr make_relation(std::string id, Element element, Certificate proof);

struct Reduction {
    ProjMatrix rep;
    int eps = 0;                 // parity of Fricke factors used
    std::vector<int> word;       // generator indices, first applied first
};

class HypothesisSet {
public:
    explicit HypothesisSet(long level, int weight = 2, int depth = 6);

    long level() const { return level_; }
    int weight() const { return weight_; }
    int depth() const { return depth_; }
    void set_depth(int depth);
    const ProjMatrix& fricke_matrix() const { return fricke_; }

    // Known invariants in insertion order; T is present from the start.
    const std::vector<Generator>& invariants() const { return invariants_; }
    bool has_invariant(const ProjMatrix& m) const;
    // Adds M ≡ 1; `source` is the relation 1 - M ≡ 0 when M was derived.
    void add_invariant(const ProjMatrix& m, RelationPtr source = nullptr);
    void remove_invariants_except(const std::vector<ProjMatrix>& keep);

    const std::set<int>& hecke() const { return hecke_; }
    void assume_hecke(int n);
    const RuleSet& rules() const { return rules_; }

    // Generators searched by reduce_matrix: each invariant and its inverse,
    // then H.
    struct SearchGen {
        ProjMatrix m;
        int eps;
        int invariant;   // index into invariants(), -1 for H
        bool inverse;
    };
    std::vector<SearchGen> search_gens() const;
    std::size_t ball_size() const;

    Reduction reduce_matrix(const ProjMatrix& m, Exec e = default_exec()) const;
    // Certificate for c*m - c*eps^e*rep.
    Certificate reduction_certificate(const ProjMatrix& m, const Reduction& r, const Coefficient& c) const;
    // For the ball word w (product delta, Fricke parity e): certificate for
    // z - eps^e * delta * z.
    Certificate left_certificate(const std::vector<int>& word, const Element& z) const;
    // First ball element, in breadth-first order, satisfying `pred`; the
    // result's rep is that element itself.
    std::optional<Reduction> find_in_ball(const std::function<bool(const ProjMatrix&)>& pred) const;

    // Every term replaced by its reduced representative; like terms merged;
    // rules applied. When cert is given, it receives a proof of x - result.
    Element reduce(const Element& x, Certificate* cert = nullptr) const;
    // Only drops groups of terms whose reduced coefficients cancel, keeping
    // the original representatives of everything else.
    Element reduce_cancel(const Element& x, Certificate* cert = nullptr) const;

    // Generator admitted by the base hypotheses (used to check flattened
    // certificates).
    bool admits(const Generator& g) const;
    // Checks that cert expands to `claimed` (after rule substitution) and,
    // once flattened, uses only admitted generators or axioms.
    bool verify(const Element& claimed, const Certificate& cert, std::string* why = nullptr) const;

private:
    struct Ball;
    const Ball& ball() const;
    void invalidate();

    long level_;
    int weight_;
    int depth_;
    ProjMatrix fricke_;
    std::vector<Generator> invariants_;
    std::set<int> hecke_;
    RuleSet rules_;
    mutable std::shared_ptr<Ball> ball_;
    mutable std::shared_ptr<std::mutex> ball_mutex_;
};

struct Step {
    std::string rule;
    std::vector<std::string> inputs;
    Element output;
    std::string justification;
    std::string detail;          // human-readable extra lines
    bool has_certificate = false;
    Element claimed;             // element the certificate proves ≡ 0
    Certificate certificate;
    bool axiom = false;
};

class DerivationLog {
public:
    void push(Step s) { steps_.push_back(std::move(s)); }
    const std::vector<Step>& steps() const { return steps_; }
    std::vector<Step>& steps() { return steps_; }
    bool empty() const { return steps_.empty(); }
    std::string to_text(long level = 0) const;

private:
    std::vector<Step> steps_;
};

} // namespace hw
