#include "hw/transforms.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

#include "hw/error.hpp"
#include "hw/hecke.hpp"

namespace hw {

Element PairedRelation::expand() const
{
    Element x;
    for (const auto& p : pairs) x += p.coeff * (Element::one_minus(p.gamma) * p.right);
    return x;
}

std::string PairedRelation::to_string(long level) const
{
    std::ostringstream os;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& p = pairs[i];
        std::string c = p.coeff.to_string();
        if (i) os << " + ";
        if (c == "-1") os << "-";
        else if (c != "1") os << "(" << c << ")";
        const std::string g = level ? to_normalized_string(p.gamma, level) : p.gamma.to_string();
        const std::string r = level ? to_normalized_string(p.right, level) : p.right.to_string();
        os << "(1 - " << g << ")*" << r;
    }
    return os.str();
}

namespace {

bool negative(const Coefficient& c)
{
    return !c.is_zero() && c.terms().begin()->second < 0;
}

} // namespace

std::vector<PairedRelation> pair_terms(const Element& x, long level, PairStrategy strategy, bool beta_form)
{
    std::vector<std::pair<ProjMatrix, Coefficient>> neg, pos;
    for (const auto& [m, c] : x.terms()) (negative(c) ? neg : pos).emplace_back(m, c);
    if (neg.empty() || neg.size() != pos.size())
        throw Error(ErrorKind::NoAdmissiblePairing, "terms do not split into matching signed halves");
    if (neg.size() > 8) throw Error(ErrorKind::NoAdmissiblePairing, "too many terms to pair exhaustively");

    std::optional<Integer> common_p;
    bool upper = true;
    for (const auto& [m, c] : neg) {
        if (!(m.a() == 1 && m.c() == 0)) upper = false;
        else if (!common_p) common_p = m.d();
        else if (*common_p != m.d()) upper = false;
    }
    ProjMatrix post;
    if (beta_form && upper && common_p)
        post = ProjMatrix::from_integers(*common_p, Integer(0), Integer(0), Integer(1));

    std::vector<std::size_t> perm(pos.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<PairedRelation> out;
    do {
        PairedRelation r;
        bool ok = true;
        for (std::size_t i = 0; i < neg.size() && ok; ++i) {
            const auto& [nu, cn] = neg[i];
            const auto& [pi, cp] = pos[perm[i]];
            if (!(cn + cp).is_zero()) {
                ok = false;
                break;
            }
            Pair p{pi * inv(nu), nu * post, cn};
            r.gamma0_count += in_gamma0(p.gamma, level);
            r.integral_count += p.gamma.det() == 1;
            r.pairs.push_back(std::move(p));
        }
        if (!ok || !r.pairs.front().coeff.is_unit()) continue;
        r.normalizer = r.pairs.front().coeff.unit_inverse();
        for (auto& p : r.pairs) p.coeff = r.normalizer * p.coeff;
        r.post = post;
        out.push_back(std::move(r));
    } while (std::next_permutation(perm.begin(), perm.end()));

    if (out.empty()) throw Error(ErrorKind::NoAdmissiblePairing, "no matching of opposite coefficients");
    if (strategy == PairStrategy::prefer_gamma0)
        std::stable_sort(out.begin(), out.end(), [](const PairedRelation& a, const PairedRelation& b) {
            if (a.gamma0_count != b.gamma0_count) return a.gamma0_count > b.gamma0_count;
            return a.integral_count > b.integral_count;
        });
    return out;
}

// ---------------------------------------------------------------------------

namespace {

struct ChainState {
    ProjMatrix g, M;
    Coefficient s;
    Certificate cert;
    std::vector<ChainMove> moves;
};

std::optional<ChainResult> run_chain(const std::vector<ChainInput>& rels, const ProjMatrix& g0,
                                     const HypothesisSet& hyp, int max_moves)
{
    const ProjMatrix H = hyp.fricke_matrix();
    std::deque<ChainState> queue;
    std::set<std::tuple<ProjMatrix, ProjMatrix, std::string>> seen;
    queue.push_back({g0, ProjMatrix{}, Coefficient(1), {}, {}});
    seen.emplace(g0, ProjMatrix{}, "1");

    while (!queue.empty()) {
        ChainState st = std::move(queue.front());
        queue.pop_front();
        if (static_cast<int>(st.moves.size()) >= max_moves) continue;

        std::vector<ChainState> next;
        for (std::size_t r = 0; r < rels.size(); ++r) {
            const auto& pairs = rels[r].paired.pairs;
            if (pairs.size() != 2) continue;
            for (int i = 0; i < 2; ++i) {
                const Pair& pi = pairs[static_cast<std::size_t>(i)];
                const Pair& pj = pairs[static_cast<std::size_t>(1 - i)];
                if (pi.gamma != st.g || !pi.coeff.is_unit()) continue;
                const Coefficient ci_inv = pi.coeff.unit_inverse();
                ChainState n;
                n.g = inv(pj.gamma);
                n.M = pj.gamma * pj.right * inv(pi.right) * st.M;
                n.s = st.s * pj.coeff * ci_inv;
                n.cert = st.cert;
                n.cert.add(Generator::relation(rels[r].fact),
                           Element::term(inv(pi.right) * st.M, st.s * ci_inv));
                n.moves = st.moves;
                n.moves.push_back({"relation " + std::to_string(r + 1), n.g, n.M, n.s});
                next.push_back(std::move(n));
            }
        }
        {
            ChainState n;
            n.g = H * st.g * H;
            n.M = H * st.M;
            n.s = Coefficient::eps() * st.s;
            n.cert = st.cert;
            n.cert.add(Generator::fricke(hyp.level()), st.s * (Element::one_minus(n.g) * (H * st.M)));
            n.moves = st.moves;
            n.moves.push_back({"fricke", n.g, n.M, n.s});
            next.push_back(std::move(n));
        }
        for (auto& n : next) {
            if (n.g == g0 && !(n.M.is_identity() && n.s == Coefficient(1))) {
                ChainResult res;
                res.g0 = g0;
                res.E = n.M;
                res.sign = n.s;
                res.relation = Element::one_minus(g0) * (Element::one() - Element::term(n.M, n.s));
                res.certificate = std::move(n.cert);
                res.moves = std::move(n.moves);
                return res;
            }
            if (seen.emplace(n.g, n.M, n.s.to_string()).second) queue.push_back(std::move(n));
        }
    }
    return std::nullopt;
}

bool occurs(const std::vector<ChainInput>& rels, const ProjMatrix& g)
{
    for (const auto& r : rels)
        for (const auto& p : r.paired.pairs)
            if (p.gamma == g) return true;
    return false;
}

} // namespace

ChainResult chain_combine(const std::vector<ChainInput>& rels, const ProjMatrix& g0, const HypothesisSet& hyp,
                          int max_moves)
{
    for (const auto& r : rels)
        if (!r.fact || r.fact->element != r.paired.expand())
            throw Error(ErrorKind::ChainStepMismatch, "paired relation does not match its established fact");
    if (occurs(rels, g0)) {
        if (auto res = run_chain(rels, g0, hyp, max_moves)) return *res;
    } else if (const ProjMatrix d = inv(g0); occurs(rels, d)) {
        if (auto res = run_chain(rels, d, hyp, max_moves)) {
            // (1 - g0)(1 - s d E d^-1) = -(1 - d)(1 - s E) d^-1
            ChainResult out = *res;
            out.g0 = g0;
            out.E = d * res->E * inv(d);
            out.relation = Element::one_minus(g0) * (Element::one() - Element::term(out.E, out.sign));
            out.certificate = res->certificate.right_mul(Element::term(inv(d))).scaled(Coefficient(-1));
            return out;
        }
    }
    throw Error(ErrorKind::ChainStepMismatch,
                "no chain returns to " + g0.to_string() + " within " + std::to_string(max_moves) + " moves");
}

ConjugateResult conjugate_relation(const RelationPtr& fact, const ProjMatrix& g, const Element& Y,
                                   const ProjMatrix& target, const HypothesisSet& hyp)
{
    if (fact->element != Element::one_minus(g) * Y)
        throw Error(ErrorKind::ChainStepMismatch, "relation is not (1 - " + g.to_string() + ") * Y");
    auto w = hyp.find_in_ball([&](const ProjMatrix& d) { return d * g * inv(d) == target; });
    if (!w) throw Error(ErrorKind::ChainStepMismatch, "no conjugator within the search ball");
    ConjugateResult out;
    out.delta = w->rep;
    out.word = *w;
    const ProjMatrix di = inv(out.delta);
    const Element Z = fact->element * di;
    out.relation = Element::one_minus(target) * (out.delta * Y * di);
    // delta Z = eps^e (Z - K), K = Z - eps^e delta Z
    const Coefficient u = w->eps ? Coefficient::eps() : Coefficient(1);
    out.certificate.add(Generator::relation(fact), Element::term(di, u));
    out.certificate.append(hyp.left_certificate(w->word, Z).scaled(-u));
    return out;
}

// ---------------------------------------------------------------------------

FourTerm four_term_shape(const Element& x)
{
    if (x.size() != 4 || x.coefficient(ProjMatrix{}) != Coefficient(1))
        throw Error(ErrorKind::NotFourTermShape, "expected 1 + A - B - C, got " + x.to_string());
    FourTerm f;
    for (const auto& [m, c] : x.terms())
        if (!m.is_identity()) f.others.emplace_back(m, c);
    return f;
}

std::vector<Factorization> factor_1ABC(const Element& x)
{
    const FourTerm f = four_term_shape(x);
    std::vector<Factorization> out;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            if (i == j) continue;
            Element l = Element::one() + Element::term(f.others[i].first, f.others[i].second);
            Element r = Element::one() + Element::term(f.others[j].first, f.others[j].second);
            if (l * r == x) out.push_back({std::move(l), std::move(r)});
        }
    return out;
}

bool is_involution(const ProjMatrix& m)
{
    return !m.is_identity() && (m * m).is_identity();
}

InvolutionResult involution_transform(const Element& x, const std::optional<ProjMatrix>& b_hint)
{
    const FourTerm f = four_term_shape(x);
    std::optional<std::size_t> ia, ib;
    for (std::size_t i = 0; i < 3; ++i)
        if (!ia && f.others[i].second == Coefficient(1)) ia = i;
    if (!ia) throw Error(ErrorKind::NotFourTermShape, "no term with coefficient 1 to serve as A");
    for (std::size_t i = 0; i < 3; ++i) {
        if (i == *ia) continue;
        if (b_hint ? f.others[i].first == *b_hint : is_involution(f.others[i].first)) {
            ib = i;
            break;
        }
    }
    if (!ib) throw Error(ErrorKind::BNotInvolution, "no term of projective order 2 to serve as B");
    const std::size_t ic = 3 - *ia - *ib;
    InvolutionResult r;
    r.A = f.others[*ia].first;
    r.B = f.others[*ib].first;
    r.C = f.others[ic].first;
    if (!is_involution(r.B)) throw Error(ErrorKind::BNotInvolution, r.B.to_string() + " does not square to 1");
    const Coefficient u = -f.others[*ib].second, v = -f.others[ic].second;
    if (u * u != Coefficient(1)) throw Error(ErrorKind::BNotInvolution, "coefficient of B does not square to 1");
    const ProjMatrix ai = inv(r.A);
    r.first = Element::one() - Element::term(r.C * ai, v);
    r.second = Element::one() + Element::term(r.A * r.B * ai, u);
    r.product = r.first * r.second * r.A;
    if (r.product != x * (Element::one() + Element::term(r.B, u)))
        throw Error(ErrorKind::InvalidArgument, "involution identity failed to re-expand");
    r.vacuous = (r.first * r.second).is_zero();
    return r;
}

Element right_normalize(const Element& x, const ProjMatrix& pivot)
{
    const Coefficient c = x.coefficient(pivot);
    if (c.is_zero()) throw Error(ErrorKind::BadPivot, pivot.to_string() + " is not a term");
    if (!c.is_unit()) throw Error(ErrorKind::BadPivot, "pivot coefficient " + c.to_string() + " is not a unit");
    return c.unit_inverse() * (x * inv(pivot));
}

WeilResult weil_cancel(const Element& x, const Element& Y, const ProjMatrix& E)
{
    const Coefficient signs[] = {Coefficient(1), Coefficient(-1), Coefficient::eps(), -Coefficient::eps()};
    for (const auto& s : signs) {
        if (Y * (Element::one() - Element::term(E, s)) != x) continue;
        WeilResult r;
        r.Y = Y;
        r.E = E;
        r.sign = s;
        r.cls = classify(E);
        if (r.cls.kind != MatrixKind::elliptic)
            throw Error(ErrorKind::LemmaInapplicable,
                        E.to_string() + " is " + std::string(to_string(r.cls.kind)) + ", not elliptic");
        if (r.cls.finite_order())
            throw Error(ErrorKind::EpsilonFiniteOrder,
                        E.to_string() + " is elliptic of order " + std::to_string(*r.cls.order));
        r.rotation = s == Coefficient(1) ? E : E * E;
        return r;
    }
    throw Error(ErrorKind::NoSuchFactorization, "element is not Y (1 - s E) for " + E.to_string());
}

std::vector<OrbitEntry> group_orbit_scan(const std::vector<NamedGen>& gens, int word_len, Exec e)
{
    const auto letters = alphabet(gens);
    std::vector<ProjMatrix> lm;
    for (const auto& l : letters) {
        const ProjMatrix& m = gens[static_cast<std::size_t>(l.gen)].m;
        lm.push_back(l.inverse ? inv(m) : m);
    }
    std::vector<OrbitEntry> out;
    std::set<ProjMatrix> seen{ProjMatrix{}};
    std::vector<ProjMatrix> frontier{ProjMatrix{}};
    std::vector<Word> fwords{Word{}};
    out.push_back({Word{}, ProjMatrix{}, {}});
    for (int d = 1; d <= word_len && !frontier.empty(); ++d) {
        const auto products = expand_layer(frontier, lm, true, e);
        std::vector<ProjMatrix> nf;
        std::vector<Word> nw;
        for (std::size_t i = 0; i < products.size(); ++i) {
            if (!seen.insert(products[i]).second) continue;
            Word w = fwords[i / lm.size()];
            w.push_back(letters[i % lm.size()]);
            nf.push_back(products[i]);
            nw.push_back(w);
            out.push_back({std::move(w), products[i], {}});
        }
        frontier = std::move(nf);
        fwords = std::move(nw);
    }
    std::vector<ProjMatrix> mats;
    for (const auto& o : out) mats.push_back(o.m);
    const auto cls = classify_batch(mats, e);
    for (std::size_t i = 0; i < out.size(); ++i) out[i].cls = cls[i];
    return out;
}

std::optional<PivotMatch> left_factor_search(const RelationPtr& fact, const ProjMatrix& gamma, const Element& Q,
                                             const HypothesisSet& hyp)
{
    Certificate cx;
    const Element red_x = hyp.reduce(fact->element, &cx);
    const ProjMatrix H = hyp.fricke_matrix();
    const Element head = Element::one_minus(gamma) * Q;
    const Coefficient units[] = {Coefficient(1), Coefficient(-1), Coefficient::eps(), -Coefficient::eps()};
    for (const auto& [t, c] : red_x.terms()) {
        for (const ProjMatrix& h : {ProjMatrix{}, H}) {
            for (const ProjMatrix& s : {ProjMatrix{}, gamma, inv(gamma)}) {
                const ProjMatrix P = s * h * t;
                const Element Y = head * P;
                const Element red_y = hyp.reduce(Y);
                for (const auto& u : units) {
                    if (red_y != u * red_x) continue;
                    PivotMatch m;
                    m.pivot = P;
                    m.unit = u;
                    m.relation = Y;
                    // Y = (Y - red Y) - u (X - red X) + u X
                    hyp.reduce(Y, &m.certificate);
                    m.certificate.append(cx.scaled(-u));
                    m.certificate.add(Generator::relation(fact), Element::term(ProjMatrix{}, u));
                    return m;
                }
            }
        }
    }
    return std::nullopt;
}

} // namespace hw
