#include "hw/words.hpp"

#include <sstream>
#include <unordered_map>

#include "hw/error.hpp"

namespace hw {

std::vector<Letter> alphabet(const std::vector<NamedGen>& gens)
{
    std::vector<Letter> out;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        out.push_back({static_cast<int>(i), false});
        if (inv(gens[i].m) != gens[i].m) out.push_back({static_cast<int>(i), true});
    }
    return out;
}

namespace {

ProjMatrix letter_matrix(const Letter& l, const std::vector<NamedGen>& gens)
{
    const ProjMatrix& m = gens[static_cast<std::size_t>(l.gen)].m;
    return l.inverse ? inv(m) : m;
}

// Layer i holds the matrices first reached by words of length i, each with
// the lexicographically least such word, in lexicographic order.
struct Layers {
    std::vector<std::vector<ProjMatrix>> mats;
    std::vector<std::vector<Word>> words;
    std::unordered_map<ProjMatrix, std::pair<int, std::size_t>, ProjMatrixHash> index;
};

Layers build_layers(const std::vector<NamedGen>& gens, int depth, Exec e)
{
    const auto letters = alphabet(gens);
    std::vector<ProjMatrix> lm;
    for (const auto& l : letters) lm.push_back(letter_matrix(l, gens));
    Layers L;
    L.mats.push_back({ProjMatrix{}});
    L.words.push_back({Word{}});
    L.index.emplace(ProjMatrix{}, std::make_pair(0, std::size_t{0}));
    for (int d = 1; d <= depth; ++d) {
        const auto products = expand_layer(L.mats.back(), lm, true, e);
        std::vector<ProjMatrix> mats;
        std::vector<Word> words;
        const auto& prev = L.words.back();
        for (std::size_t i = 0; i < products.size(); ++i) {
            if (L.index.count(products[i])) continue;
            L.index.emplace(products[i], std::make_pair(d, mats.size()));
            Word w = prev[i / letters.size()];
            w.push_back(letters[i % letters.size()]);
            mats.push_back(products[i]);
            words.push_back(std::move(w));
        }
        L.mats.push_back(std::move(mats));
        L.words.push_back(std::move(words));
        if (L.mats.back().empty()) break;
    }
    return L;
}

} // namespace

ProjMatrix evaluate(const Word& w, const std::vector<NamedGen>& gens)
{
    ProjMatrix r;
    for (const auto& l : w) r = r * letter_matrix(l, gens);
    return r;
}

std::string to_string(const Word& w, const std::vector<NamedGen>& gens)
{
    if (w.empty()) return "I";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ' ';
        s += gens[static_cast<std::size_t>(w[i].gen)].name;
        if (w[i].inverse) s += "^-1";
    }
    return s;
}

std::optional<Word> word_search(const ProjMatrix& target, const std::vector<NamedGen>& gens, int max_len, Exec e)
{
    if (gens.empty()) throw Error(ErrorKind::InvalidArgument, "word search needs at least one generator");
    if (max_len < 0) return std::nullopt;
    const Layers L = build_layers(gens, (max_len + 1) / 2, e);
    const int have = static_cast<int>(L.mats.size()) - 1;
    for (int len = 0; len <= max_len; ++len) {
        const int i = (len + 1) / 2, j = len - i;
        if (i > have) break;
        for (std::size_t k = 0; k < L.mats[static_cast<std::size_t>(i)].size(); ++k) {
            const ProjMatrix rest = inv(L.mats[static_cast<std::size_t>(i)][k]) * target;
            auto it = L.index.find(rest);
            if (it == L.index.end() || it->second.first != j) continue;
            Word w = L.words[static_cast<std::size_t>(i)][k];
            const Word& v = L.words[static_cast<std::size_t>(j)][it->second.second];
            w.insert(w.end(), v.begin(), v.end());
            return w;
        }
    }
    return std::nullopt;
}

std::optional<Word> word_search_naive(const ProjMatrix& target, const std::vector<NamedGen>& gens, int max_len)
{
    const auto letters = alphabet(gens);
    std::vector<std::pair<Word, ProjMatrix>> layer{{Word{}, ProjMatrix{}}};
    for (int len = 0; len <= max_len; ++len) {
        for (const auto& [w, m] : layer)
            if (m == target) return w;
        if (len == max_len) break;
        std::vector<std::pair<Word, ProjMatrix>> next;
        for (const auto& [w, m] : layer) {
            for (const auto& l : letters) {
                Word w2 = w;
                w2.push_back(l);
                next.emplace_back(std::move(w2), m * letter_matrix(l, gens));
            }
        }
        layer = std::move(next);
    }
    return std::nullopt;
}

Word parse_word(const std::string& text, const std::vector<NamedGen>& gens)
{
    std::istringstream in(text);
    Word w;
    for (std::string tok; in >> tok;) {
        bool inverse = false;
        if (tok.size() > 3 && tok.compare(tok.size() - 3, 3, "^-1") == 0) {
            inverse = true;
            tok.resize(tok.size() - 3);
        }
        if (tok == "I") continue;
        int found = -1;
        for (std::size_t i = 0; i < gens.size(); ++i)
            if (gens[i].name == tok) found = static_cast<int>(i);
        if (found < 0) throw Error(ErrorKind::InvalidArgument, "unknown generator '" + tok + "' in word");
        w.push_back({found, inverse});
    }
    return w;
}

MembershipReport membership_report(const ProjMatrix& target, const HypothesisSet& hyp, int max_len)
{
    MembershipReport r;
    r.in_gamma0 = in_gamma0(target, hyp.level());
    int k = 0;
    for (const auto& g : hyp.invariants()) {
        ProjMatrix m;
        for (const auto& [x, c] : g.element.terms())
            if (!x.is_identity()) m = x;
        r.gens.push_back({k == 0 ? "T" : "M" + std::to_string(k), m});
        ++k;
    }
    r.gens.push_back({"H", hyp.fricke_matrix()});
    r.word = word_search(target, r.gens, max_len);
    r.cls = classify(target);
    return r;
}

} // namespace hw
