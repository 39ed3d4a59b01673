#include "hw/hypotheses.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "hw/error.hpp"
#include "hw/hecke.hpp"

namespace hw {

Generator Generator::invariant(const ProjMatrix& m, RelationPtr source)
{
    Generator g;
    g.kind = Kind::invariant;
    g.element = Element::one_minus(m);
    g.label = "1 - " + m.to_string();
    g.source = std::move(source);
    return g;
}

Generator Generator::fricke(long level)
{
    Generator g;
    g.kind = Kind::fricke;
    g.element = Element::term(hw::fricke(level)) - Element::term(ProjMatrix{}, Coefficient::eps());
    g.label = "H - eps";
    return g;
}

Generator Generator::hecke(long level, int weight, int n)
{
    Generator g;
    g.kind = Kind::hecke;
    g.element = hecke_generator(n, level, weight);
    g.label = "T(" + std::to_string(n) + ") - a_" + std::to_string(n);
    return g;
}

Generator Generator::relation(RelationPtr r)
{
    Generator g;
    g.kind = Kind::relation;
    g.element = r->element;
    g.label = r->id;
    g.source = std::move(r);
    return g;
}

Generator Generator::axiom(const Element& e, std::string label)
{
    Generator g;
    g.kind = Kind::axiom;
    g.element = e;
    g.label = std::move(label);
    return g;
}

void Certificate::add(const Generator& g, const Element& multiplier)
{
    if (multiplier.is_zero()) return;
    terms.push_back({g, multiplier});
}

void Certificate::append(const Certificate& other)
{
    terms.insert(terms.end(), other.terms.begin(), other.terms.end());
}

Certificate Certificate::right_mul(const Element& m) const
{
    Certificate r;
    for (const auto& t : terms) r.add(t.gen, t.multiplier * m);
    return r;
}

Certificate Certificate::scaled(const Coefficient& c) const
{
    Certificate r;
    for (const auto& t : terms) r.add(t.gen, c * t.multiplier);
    return r;
}

Element Certificate::expand() const
{
    Element sum;
    for (const auto& t : terms) sum += t.gen.element * t.multiplier;
    return sum;
}

Certificate Certificate::flatten() const
{
    Certificate out;
    for (const auto& t : terms) {
        if (t.gen.source) out.append(t.gen.source->proof.flatten().right_mul(t.multiplier));
        else out.terms.push_back(t);
    }
    return out;
}

bool Certificate::uses_axiom() const
{
    for (const auto& t : terms) {
        if (t.gen.kind == Generator::Kind::axiom) return true;
        if (t.gen.source && t.gen.source->proof.uses_axiom()) return true;
    }
    return false;
}

RelationPtr make_relation(std::string id, Element element, Certificate proof)
{
    return std::make_shared<const Relation>(Relation{std::move(id), std::move(element), std::move(proof)});
}

// ---------------------------------------------------------------------------

struct HypothesisSet::Ball {
    std::vector<SearchGen> gens;
    std::vector<ProjMatrix> mats;
    std::vector<Mat64> m64;
    bool all64 = true;
    std::int64_t max_entry = 0;
    std::vector<std::uint8_t> eps;
    std::vector<std::int32_t> parent;
    std::vector<std::int16_t> gen;

    std::mutex cache_mutex;
    std::unordered_map<ProjMatrix, Reduction, ProjMatrixHash> cache;
};

HypothesisSet::HypothesisSet(long level, int weight, int depth)
    : level_(level), weight_(weight), depth_(depth), fricke_(hw::fricke(level)),
      ball_mutex_(std::make_shared<std::mutex>())
{
    if (level < 1) throw Error(ErrorKind::InvalidArgument, "level must be positive");
    if (weight < 2 || weight % 2 != 0) throw Error(ErrorKind::InvalidArgument, "weight must be even and >= 2");
    if (depth < 0) throw Error(ErrorKind::InvalidArgument, "search depth must be nonnegative");
    invariants_.push_back(Generator::invariant(translation()));
}

void HypothesisSet::invalidate()
{
    ball_mutex_ = std::make_shared<std::mutex>();
    ball_.reset();
}

void HypothesisSet::set_depth(int depth)
{
    if (depth < 0) throw Error(ErrorKind::InvalidArgument, "search depth must be nonnegative");
    depth_ = depth;
    invalidate();
}

namespace {

ProjMatrix invariant_matrix(const Generator& g)
{
    // element is 1 - M
    for (const auto& [m, c] : g.element.terms())
        if (!m.is_identity()) return m;
    return ProjMatrix{};
}

} // namespace

bool HypothesisSet::has_invariant(const ProjMatrix& m) const
{
    for (const auto& g : invariants_)
        if (invariant_matrix(g) == m) return true;
    return false;
}

void HypothesisSet::add_invariant(const ProjMatrix& m, RelationPtr source)
{
    if (m.is_identity() || has_invariant(m)) return;
    if (source && source->element != Element::one_minus(m))
        throw Error(ErrorKind::InvalidArgument, "source relation is not 1 - " + m.to_string());
    invariants_.push_back(Generator::invariant(m, std::move(source)));
    invalidate();
}

void HypothesisSet::remove_invariants_except(const std::vector<ProjMatrix>& keep)
{
    std::erase_if(invariants_, [&](const Generator& g) {
        return std::find(keep.begin(), keep.end(), invariant_matrix(g)) == keep.end();
    });
    invalidate();
}

void HypothesisSet::assume_hecke(int n)
{
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "Hecke index must be at least 2");
    hecke_.insert(n);
    const int top = std::max(*hecke_.rbegin(), 2);
    rules_ = hecke_rules(level_, weight_, top);
}

std::vector<HypothesisSet::SearchGen> HypothesisSet::search_gens() const
{
    std::vector<SearchGen> out;
    for (std::size_t i = 0; i < invariants_.size(); ++i) {
        const ProjMatrix m = invariant_matrix(invariants_[i]);
        out.push_back({m, 0, static_cast<int>(i), false});
        const ProjMatrix mi = inv(m);
        if (mi != m) out.push_back({mi, 0, static_cast<int>(i), true});
    }
    out.push_back({fricke_, 1, -1, false});
    return out;
}

const HypothesisSet::Ball& HypothesisSet::ball() const
{
    std::lock_guard lock(*ball_mutex_);
    if (ball_) return *ball_;
    auto b = std::make_shared<Ball>();
    b->gens = search_gens();
    std::unordered_map<ProjMatrix, std::int32_t, ProjMatrixHash> index;
    b->mats.push_back(ProjMatrix{});
    b->eps.push_back(0);
    b->parent.push_back(-1);
    b->gen.push_back(-1);
    index.emplace(ProjMatrix{}, 0);
    std::size_t begin = 0;
    for (int layer = 0; layer < depth_; ++layer) {
        const std::size_t end = b->mats.size();
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t g = 0; g < b->gens.size(); ++g) {
                ProjMatrix x = b->gens[g].m * b->mats[i];
                if (index.count(x)) continue;
                index.emplace(x, static_cast<std::int32_t>(b->mats.size()));
                b->mats.push_back(std::move(x));
                b->eps.push_back(static_cast<std::uint8_t>((b->eps[i] + b->gens[g].eps) % 2));
                b->parent.push_back(static_cast<std::int32_t>(i));
                b->gen.push_back(static_cast<std::int16_t>(g));
            }
        }
        begin = end;
    }
    for (const auto& m : b->mats) {
        auto m64 = to_mat64(m);
        if (!m64 || max_abs_entry(*m64) >= (std::int64_t{1} << 31)) {
            b->all64 = false;
            break;
        }
        b->m64.push_back(*m64);
        b->max_entry = std::max(b->max_entry, max_abs_entry(*m64));
    }
    ball_ = b;
    return *ball_;
}

std::size_t HypothesisSet::ball_size() const { return ball().mats.size(); }

Reduction HypothesisSet::reduce_matrix(const ProjMatrix& m, Exec e) const
{
    const Ball& b = ball();
    auto& bm = const_cast<Ball&>(b);
    {
        std::lock_guard lock(bm.cache_mutex);
        if (auto it = bm.cache.find(m); it != bm.cache.end()) return it->second;
    }
    std::size_t best = 0;
    auto m64 = to_mat64(m);
    if (b.all64 && m64 && ball_argmin_fits(b.max_entry, *m64)) {
        best = ball_argmin(b.m64, *m64, e);
    } else {
        SizeKey bk = size_metric(b.mats[0] * m);
        for (std::size_t i = 1; i < b.mats.size(); ++i) {
            SizeKey k = size_metric(b.mats[i] * m);
            if (k < bk) {
                bk = std::move(k);
                best = i;
            }
        }
    }
    Reduction r;
    r.rep = b.mats[best] * m;
    r.eps = b.eps[best];
    for (std::int32_t i = static_cast<std::int32_t>(best); b.parent[i] >= 0; i = b.parent[i]) r.word.push_back(b.gen[i]);
    std::reverse(r.word.begin(), r.word.end());
    std::lock_guard lock(bm.cache_mutex);
    bm.cache.emplace(m, r);
    return r;
}

Certificate HypothesisSet::left_certificate(const std::vector<int>& word, const Element& z) const
{
    const auto gens = search_gens();
    Certificate cert;
    Element x = z;
    int e = 0;
    const Coefficient eps = Coefficient::eps();
    for (int gi : word) {
        const SearchGen& sg = gens[static_cast<std::size_t>(gi)];
        const Element xe = e ? eps * x : x;
        if (sg.invariant < 0) {
            cert.add(Generator::fricke(level_), -(eps * xe));
        } else if (!sg.inverse) {
            cert.add(invariants_[static_cast<std::size_t>(sg.invariant)], xe);
        } else {
            cert.add(invariants_[static_cast<std::size_t>(sg.invariant)], -(sg.m * xe));
        }
        x = sg.m * x;
        e = (e + sg.eps) % 2;
    }
    return cert;
}

Certificate HypothesisSet::reduction_certificate(const ProjMatrix& m, const Reduction& r, const Coefficient& c) const
{
    return left_certificate(r.word, Element::term(m, c));
}

std::optional<Reduction> HypothesisSet::find_in_ball(const std::function<bool(const ProjMatrix&)>& pred) const
{
    const Ball& b = ball();
    for (std::size_t i = 0; i < b.mats.size(); ++i) {
        if (!pred(b.mats[i])) continue;
        Reduction r;
        r.rep = b.mats[i];
        r.eps = b.eps[i];
        for (std::int32_t k = static_cast<std::int32_t>(i); b.parent[k] >= 0; k = b.parent[k]) r.word.push_back(b.gen[k]);
        std::reverse(r.word.begin(), r.word.end());
        return r;
    }
    return std::nullopt;
}

Element HypothesisSet::reduce(const Element& x, Certificate* cert) const
{
    Element out;
    for (const auto& [m, c] : x.terms()) {
        Reduction r = reduce_matrix(m);
        out.add_term(r.rep, r.eps ? c * Coefficient::eps() : c);
        if (cert) cert->append(reduction_certificate(m, r, c));
    }
    return out.substitute(rules_);
}

Element HypothesisSet::reduce_cancel(const Element& x, Certificate* cert) const
{
    struct Group {
        Coefficient sum;
        std::vector<std::pair<ProjMatrix, Reduction>> members;
    };
    std::map<ProjMatrix, Group> groups;
    for (const auto& [m, c] : x.terms()) {
        Reduction r = reduce_matrix(m);
        Group& g = groups[r.rep];
        g.sum += r.eps ? c * Coefficient::eps() : c;
        g.members.emplace_back(m, std::move(r));
    }
    Element out;
    for (auto& [rep, g] : groups) {
        const bool cancels = substitute(g.sum, rules_).is_zero();
        for (const auto& [m, r] : g.members) {
            const Coefficient c = x.coefficient(m);
            if (!cancels) out.add_term(m, c);
            else if (cert) cert->append(reduction_certificate(m, r, c));
        }
    }
    return out.substitute(rules_);
}

bool HypothesisSet::admits(const Generator& g) const
{
    switch (g.kind) {
    case Generator::Kind::axiom:
        return true;
    case Generator::Kind::relation:
        return false;
    case Generator::Kind::fricke:
        return g.element == Generator::fricke(level_).element;
    case Generator::Kind::hecke:
        for (int n : hecke_)
            if (g.element == hecke_generator(n, level_, weight_)) return true;
        return false;
    case Generator::Kind::invariant:
        if (g.source) return false;
        for (const auto& inv : invariants_)
            if (!inv.source && inv.element == g.element) return true;
        return false;
    }
    return false;
}

bool HypothesisSet::verify(const Element& claimed, const Certificate& cert, std::string* why) const
{
    const Certificate flat = cert.flatten();
    if (!equal(flat.expand(), claimed, rules_)) {
        if (why) *why = "certificate does not expand to the claimed element";
        return false;
    }
    for (const auto& t : flat.terms) {
        if (!admits(t.gen)) {
            if (why) *why = "generator '" + t.gen.label + "' is not among the hypotheses";
            return false;
        }
    }
    return true;
}

std::string DerivationLog::to_text(long level) const
{
    std::ostringstream os;
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        const Step& s = steps_[i];
        os << "[" << i + 1 << "] " << s.rule;
        if (!s.inputs.empty()) {
            os << "(";
            for (std::size_t j = 0; j < s.inputs.size(); ++j) os << (j ? ", " : "") << s.inputs[j];
            os << ")";
        }
        os << ": " << s.output.to_string(level);
        if (s.has_certificate) os << " ≡ 0";
        if (!s.justification.empty()) os << "  (" << s.justification << ")";
        os << "\n";
        if (!s.detail.empty()) {
            std::istringstream in(s.detail);
            for (std::string line; std::getline(in, line);) os << "    " << line << "\n";
        }
    }
    return os.str();
}

} // namespace hw
