#include "hw/exact.hpp"

#include <cctype>
#include <functional>
#include <sstream>

#include "hw/error.hpp"

namespace hw {

namespace {

Integer gcd4(const Integer& a, const Integer& b, const Integer& c, const Integer& d)
{
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
    return g;
}

bool is_square(const Integer& n)
{
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

Integer isqrt(const Integer& n)
{
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

} // namespace

ProjMatrix make_canonical(Integer a, Integer b, Integer c, Integer d)
{
    const Integer det = a * d - b * c;
    if (det == 0)
        throw Error(ErrorKind::ZeroDeterminant, "matrix has zero determinant");
    if (det < 0)
        throw Error(ErrorKind::NegativeDeterminant, "matrix has negative determinant");
    const Integer g = gcd4(a, b, c, d);
    if (g != 1) {
        mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(b.get_mpz_t(), b.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(d.get_mpz_t(), d.get_mpz_t(), g.get_mpz_t());
    }
    const int lead = a != 0 ? sgn(a) : (b != 0 ? sgn(b) : sgn(c));
    if (lead < 0) {
        a = -a;
        b = -b;
        c = -c;
        d = -d;
    }
    return ProjMatrix(ProjMatrix::Canonical{}, std::move(a), std::move(b), std::move(c), std::move(d));
}

ProjMatrix ProjMatrix::from_integers(Integer a, Integer b, Integer c, Integer d)
{
    return make_canonical(std::move(a), std::move(b), std::move(c), std::move(d));
}

std::string ProjMatrix::to_string() const
{
    std::ostringstream os;
    os << '[' << a_ << ' ' << b_ << "; " << c_ << ' ' << d_ << ']';
    return os.str();
}

int compare(const ProjMatrix& x, const ProjMatrix& y)
{
    if (int r = cmp(x.a_, y.a_)) return r < 0 ? -1 : 1;
    if (int r = cmp(x.b_, y.b_)) return r < 0 ? -1 : 1;
    if (int r = cmp(x.c_, y.c_)) return r < 0 ? -1 : 1;
    if (int r = cmp(x.d_, y.d_)) return r < 0 ? -1 : 1;
    return 0;
}

std::size_t ProjMatrixHash::operator()(const ProjMatrix& m) const noexcept
{
    auto h = [](const Integer& z) -> std::size_t {
        const std::size_t low = mpz_size(z.get_mpz_t()) ? mpz_getlimbn(z.get_mpz_t(), 0) : 0;
        return low * 0x9E3779B97F4A7C15ULL + static_cast<std::size_t>(sgn(z) + 1);
    };
    std::size_t seed = h(m.a());
    for (const Integer* z : {&m.b(), &m.c(), &m.d()})
        seed ^= h(*z) + 0x9E3779B97F4A7C15ULL + (seed << 6) + (seed >> 2);
    return seed;
}

ProjMatrix canonicalize(const std::array<Rational, 4>& raw)
{
    Integer den = 1;
    for (const auto& q : raw)
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
    std::array<Integer, 4> v;
    for (std::size_t i = 0; i < 4; ++i)
        v[i] = raw[i].get_num() * (den / raw[i].get_den());
    return make_canonical(v[0], v[1], v[2], v[3]);
}

ProjMatrix canonicalize(const std::array<Entry, 4>& raw, long level)
{
    bool any_surd = false, any_plain = false;
    for (const auto& e : raw) {
        if (e.value == 0) continue;
        (e.surd ? any_surd : any_plain) = true;
    }
    if (any_surd && any_plain)
        throw Error(ErrorKind::MixedSurdEntries, "matrix mixes rational and sqrt(N) entries");
    std::array<Rational, 4> q;
    for (std::size_t i = 0; i < 4; ++i)
        q[i] = any_surd ? Rational(raw[i].value * level) : raw[i].value;
    return canonicalize(q);
}

ProjMatrix mul(const ProjMatrix& x, const ProjMatrix& y)
{
    return make_canonical(x.a() * y.a() + x.b() * y.c(), x.a() * y.b() + x.b() * y.d(),
                          x.c() * y.a() + x.d() * y.c(), x.c() * y.b() + x.d() * y.d());
}

ProjMatrix inv(const ProjMatrix& x)
{
    return make_canonical(x.d(), -x.b(), -x.c(), x.a());
}

ProjMatrix power(const ProjMatrix& x, long n)
{
    ProjMatrix base = n < 0 ? inv(x) : x;
    unsigned long e = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    ProjMatrix r;
    while (e) {
        if (e & 1) r = mul(r, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return r;
}

Rational tau(const ProjMatrix& x)
{
    Rational t(x.trace() * x.trace(), x.det());
    t.canonicalize();
    return t;
}

std::string_view to_string(MatrixKind k)
{
    switch (k) {
    case MatrixKind::scalar: return "scalar";
    case MatrixKind::elliptic: return "elliptic";
    case MatrixKind::parabolic: return "parabolic";
    case MatrixKind::hyperbolic: return "hyperbolic";
    }
    return "?";
}

std::string MatrixClass::describe() const
{
    std::string s(to_string(kind));
    if (kind == MatrixKind::elliptic)
        s += order ? ", order " + std::to_string(*order) : ", infinite order";
    s += ", tau=" + tau.get_str();
    return s;
}

MatrixClass classify(const ProjMatrix& x)
{
    MatrixClass r;
    r.tau = tau(x);
    if (x.b() == 0 && x.c() == 0 && x.a() == x.d()) {
        r.kind = MatrixKind::scalar;
        r.order = 1;
        return r;
    }
    if (r.tau == 4) {
        r.kind = MatrixKind::parabolic;
    } else if (r.tau > 4) {
        r.kind = MatrixKind::hyperbolic;
    } else {
        r.kind = MatrixKind::elliptic;
        // Rational tau below 4 gives finite order only for 2cos(theta) with
        // cos^2 in {0, 1/4, 1/2, 3/4} (Niven).
        if (r.tau == 0) r.order = 2;
        else if (r.tau == 1) r.order = 3;
        else if (r.tau == 2) r.order = 4;
        else if (r.tau == 3) r.order = 6;
    }
    return r;
}

bool in_gamma0(const ProjMatrix& x, long level)
{
    if (x.det() != 1) return false;
    return mpz_divisible_ui_p(x.c().get_mpz_t(), static_cast<unsigned long>(level)) != 0;
}

bool is_surd_type(const ProjMatrix& x, long level)
{
    const Integer det = x.det();
    if (level <= 1 || is_square(Integer(level))) return false;
    if (!mpz_divisible_ui_p(det.get_mpz_t(), static_cast<unsigned long>(level))) return false;
    return is_square(Integer(det / level));
}

std::string to_normalized_string(const ProjMatrix& x, long level)
{
    const Integer det = x.det();
    auto fmt = [](const Rational& q, bool surd, long n) {
        std::string s;
        if (!surd || q == 0) return q.get_str();
        Rational a = abs(q);
        if (q < 0) s += "-";
        if (a.get_num() != 1) s += a.get_num().get_str() + "*";
        s += "sqrt(" + std::to_string(n) + ")";
        if (a.get_den() != 1) s += "/" + a.get_den().get_str();
        return s;
    };
    auto emit = [&](const Rational& scale, bool surd) {
        std::ostringstream os;
        std::array<Integer, 4> e = x.entries();
        std::array<Rational, 4> q;
        for (std::size_t i = 0; i < 4; ++i) {
            q[i] = Rational(e[i]) * scale;
            q[i].canonicalize();
        }
        os << '[' << fmt(q[0], surd, level) << ' ' << fmt(q[1], surd, level) << "; "
           << fmt(q[2], surd, level) << ' ' << fmt(q[3], surd, level) << ']';
        return os.str();
    };
    if (is_square(det)) return emit(Rational(1, isqrt(det)), false);
    if (is_surd_type(x, level)) {
        // entries / (s*sqrt(N)) = entries * sqrt(N) / (s*N)
        Rational scale(1, isqrt(Integer(det / level)) * level);
        scale.canonicalize();
        return emit(scale, true);
    }
    return x.to_string();
}

bool operator<(const SizeKey& x, const SizeKey& y)
{
    if (int r = cmp(x.sum_squares, y.sum_squares)) return r < 0;
    for (std::size_t i = 0; i < 4; ++i)
        if (int r = cmp(x.tuple[i], y.tuple[i])) return r < 0;
    return false;
}

SizeKey size_metric(const ProjMatrix& x)
{
    SizeKey k;
    k.tuple = x.entries();
    k.sum_squares = 0;
    for (const auto& e : k.tuple) k.sum_squares += e * e;
    return k;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class EntryParser {
public:
    EntryParser(std::string_view s, int column0) : s_(s), col0_(column0) {}

    SurdValue parse()
    {
        SurdValue v = sum();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const
    {
        throw ParseError(msg, 1, col0_ + static_cast<int>(pos_) + 1);
    }

    bool eat(char ch)
    {
        if (pos_ < s_.size() && s_[pos_] == ch) {
            ++pos_;
            return true;
        }
        return false;
    }

    void merge_radicand(SurdValue& into, long r)
    {
        if (into.radicand != 0 && into.radicand != r) fail("different radicands in one entry");
        into.radicand = r;
    }

    SurdValue sum()
    {
        SurdValue v = product();
        while (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
            const bool minus = s_[pos_++] == '-';
            SurdValue w = product();
            if (v.value != 0 && w.value != 0 && v.surd != w.surd)
                throw Error(ErrorKind::MixedSurdEntries, "sum mixes rational and surd parts");
            if (w.radicand) merge_radicand(v, w.radicand);
            if (v.value == 0) v.surd = w.surd;
            v.value += minus ? Rational(-w.value) : w.value;
        }
        return v;
    }

    SurdValue product()
    {
        SurdValue v = unary();
        while (pos_ < s_.size() && (s_[pos_] == '*' || s_[pos_] == '/')) {
            const bool divide = s_[pos_++] == '/';
            SurdValue w = unary();
            if (w.radicand) merge_radicand(v, w.radicand);
            const long n = v.radicand;
            if (divide) {
                if (w.value == 0) fail("division by zero");
                v.value /= w.value;
                if (w.surd) {
                    // x / sqrt(n) = x * sqrt(n) / n
                    v.value /= n;
                    if (v.surd) v.value *= n;
                    v.surd = !v.surd;
                }
            } else {
                v.value *= w.value;
                if (v.surd && w.surd) {
                    v.value *= n;
                    v.surd = false;
                } else {
                    v.surd = v.surd || w.surd;
                }
            }
        }
        return v;
    }

    SurdValue unary()
    {
        if (eat('-')) {
            SurdValue v = unary();
            v.value = -v.value;
            return v;
        }
        if (eat('+')) return unary();
        return atom();
    }

    SurdValue atom()
    {
        if (eat('(')) {
            SurdValue v = sum();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (s_.substr(pos_, 5) == "sqrt(") {
            pos_ += 5;
            Integer n = integer();
            if (!eat(')')) fail("expected ')'");
            if (n <= 0) fail("sqrt of a non-positive integer");
            SurdValue v;
            if (is_square(n)) {
                v.value = isqrt(n);
            } else {
                v.value = 1;
                v.surd = true;
                v.radicand = n.get_si();
            }
            return v;
        }
        SurdValue v;
        v.value = integer();
        return v;
    }

    Integer integer()
    {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer");
        return Integer(std::string(s_.substr(start, pos_ - start)));
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    int col0_;
};

} // namespace

SurdValue parse_surd_entry(std::string_view text)
{
    return EntryParser(text, 0).parse();
}

ProjMatrix parse_matrix(std::string_view text, std::optional<long> level)
{
    std::size_t pos = 0;
    auto fail = [&](const std::string& msg, std::size_t at) -> void {
        throw ParseError(msg, 1, static_cast<int>(at) + 1);
    };
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    skip_ws();
    if (pos >= text.size() || text[pos] != '[') fail("expected '['", pos);
    ++pos;
    const std::size_t close = text.find(']', pos);
    if (close == std::string_view::npos) fail("expected ']'", text.size());

    std::array<SurdValue, 4> vals;
    std::size_t count = 0;
    std::size_t row_break = 0;
    while (pos < close) {
        while (pos < close && (std::isspace(static_cast<unsigned char>(text[pos])) || text[pos] == ','))
            ++pos;
        if (pos >= close) break;
        if (text[pos] == ';') {
            if (count != 2 || row_break) fail("each row needs exactly two entries", pos);
            row_break = count;
            ++pos;
            continue;
        }
        const std::size_t start = pos;
        while (pos < close && !std::isspace(static_cast<unsigned char>(text[pos])) && text[pos] != ','
               && text[pos] != ';')
            ++pos;
        if (count == 4) fail("too many entries", start);
        vals[count++] = EntryParser(text.substr(start, pos - start), static_cast<int>(start)).parse();
    }
    if (count != 4 || row_break != 2) fail("expected a 2x2 matrix \"[a b; c d]\"", close);
    pos = close + 1;

    skip_ws();
    bool scale_surd = false;
    long radicand = 0;
    if (pos < text.size()) {
        if (text[pos] != '*') fail("unexpected trailing text", pos);
        ++pos;
        skip_ws();
        SurdValue s = EntryParser(text.substr(pos), static_cast<int>(pos)).parse();
        if (!s.surd || s.value != 1) fail("matrix suffix must be *sqrt(N)", pos);
        scale_surd = true;
        radicand = s.radicand;
    }

    for (const auto& v : vals) {
        if (!v.radicand) continue;
        if (radicand && radicand != v.radicand)
            throw ParseError("entries use different radicands", 1, 1);
        radicand = v.radicand;
    }
    if (level && radicand && *level != radicand)
        throw Error(ErrorKind::InvalidArgument,
                    "matrix uses sqrt(" + std::to_string(radicand) + ") but level is " + std::to_string(*level));

    std::array<Entry, 4> raw;
    for (std::size_t i = 0; i < 4; ++i) {
        raw[i].value = vals[i].value;
        raw[i].surd = vals[i].surd != scale_surd;
        if (vals[i].surd && scale_surd) raw[i].value *= radicand;
    }
    return canonicalize(raw, radicand ? radicand : 1);
}

} // namespace hw
