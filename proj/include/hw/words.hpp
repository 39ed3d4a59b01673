#pragma once

// Bounded word search over a generating set, projectively.

#include <optional>
#include <string>
#include <vector>

#include "hw/hypotheses.hpp"
#include "hw/kernels.hpp"

namespace hw {

struct NamedGen {
    std::string name;
    ProjMatrix m;
};

// One letter: generator index and whether it is inverted.
struct Letter {
    int gen = 0;
    bool inverse = false;

    friend bool operator==(const Letter&, const Letter&) = default;
};
using Word = std::vector<Letter>;

// Letters in search order: g1, g1^-1, g2, g2^-1, ...; inverses that are
// projectively equal to the generator itself are omitted.
std::vector<Letter> alphabet(const std::vector<NamedGen>& gens);

ProjMatrix evaluate(const Word& w, const std::vector<NamedGen>& gens);
std::string to_string(const Word& w, const std::vector<NamedGen>& gens);

// Shortest word whose product is projectively `target`, ties broken by
// lexicographic order over alphabet(). Meets in the middle: both halves
// come from one breadth-first table of depth ceil(max_len / 2).
std::optional<Word> word_search(const ProjMatrix& target, const std::vector<NamedGen>& gens, int max_len,
                                Exec e = default_exec());

// Plain enumeration of all words in lexicographic order, length by length.
std::optional<Word> word_search_naive(const ProjMatrix& target, const std::vector<NamedGen>& gens, int max_len);

// Parses "H T H T H M2 H" or "M2^-1 H T^-1 H T^-1" against gens.
Word parse_word(const std::string& text, const std::vector<NamedGen>& gens);

struct MembershipReport {
    bool in_gamma0 = false;
    std::optional<Word> word;
    std::vector<NamedGen> gens;
    MatrixClass cls;
};

// Searches over the current invariants together with H.
MembershipReport membership_report(const ProjMatrix& target, const HypothesisSet& hyp, int max_len);

} // namespace hw
