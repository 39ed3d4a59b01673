#include "hw/expr.hpp"

#include <cctype>

#include "hw/error.hpp"
#include "hw/hecke.hpp"

namespace hw {

namespace {

class Parser {
public:
    Parser(std::string_view s, const ExprContext& ctx) : s_(s), ctx_(ctx) {}

    Element parse()
    {
        Element x = expr();
        ws();
        if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return x;
    }

private:
    [[noreturn]] void fail(const std::string& msg, std::size_t at) const
    {
        int line = 1, col = 1;
        for (std::size_t i = 0; i < at && i < s_.size(); ++i) {
            if (s_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(msg, line, col);
    }
    [[noreturn]] void fail(const std::string& msg) const { fail(msg, pos_); }

    void ws()
    {
        while (pos_ < s_.size()) {
            if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
            } else if (s_[pos_] == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    bool peek(char c)
    {
        ws();
        return pos_ < s_.size() && s_[pos_] == c;
    }

    bool accept(char c)
    {
        if (!peek(c)) return false;
        ++pos_;
        return true;
    }

    void expect(char c)
    {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    bool starts_factor()
    {
        ws();
        if (pos_ >= s_.size()) return false;
        const char c = s_[pos_];
        return c == '(' || c == '[' || c == '$' || std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }

    Element expr()
    {
        Element x;
        bool neg = false;
        if (accept('-')) neg = true;
        else accept('+');
        Element t = term();
        x += neg ? -t : t;
        for (;;) {
            if (accept('+')) x += term();
            else if (accept('-')) x -= term();
            else return x;
        }
    }

    Element term()
    {
        Element x = factor();
        for (;;) {
            if (accept('*')) {
                x = x * factor();
            } else if (starts_factor()) {
                x = x * factor();
            } else {
                return x;
            }
        }
    }

    Element factor()
    {
        const std::size_t at = pos_;
        Element x = atom();
        if (accept('^')) {
            bool neg = accept('-');
            ws();
            const long n = integer();
            if (neg) x = inverse(x, at);
            Element r = Element::one();
            for (long i = 0; i < n; ++i) r = r * x;
            x = std::move(r);
        }
        return x;
    }

    Element inverse(const Element& x, std::size_t at) const
    {
        if (x.size() != 1 || !x.terms().begin()->second.is_unit())
            fail("only a single matrix with a unit coefficient can be inverted", at);
        const auto& [m, c] = *x.terms().begin();
        return Element::term(hw::inv(m), c.unit_inverse());
    }

    long integer()
    {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer");
        return std::stol(std::string(s_.substr(start, pos_ - start)));
    }

    Rational rational()
    {
        ws();
        bool neg = false;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) neg = s_[pos_++] == '-';
        ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected number");
        Rational q(Integer(std::string(s_.substr(start, pos_ - start))));
        if (pos_ + 1 < s_.size() && s_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
            ++pos_;
            const std::size_t ds = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            Integer den(std::string(s_.substr(ds, pos_ - ds)));
            if (den == 0) fail("division by zero", ds);
            q /= Rational(den);
            q.canonicalize();
        }
        return neg ? Rational(-q) : q;
    }

    std::string ident()
    {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    long need_level(std::size_t at) const
    {
        if (ctx_.level <= 0) fail("a level is required here", at);
        return ctx_.level;
    }

    Element matrix_literal()
    {
        const std::size_t start = pos_;
        const std::size_t close = s_.find(']', pos_);
        if (close == std::string_view::npos) fail("expected ']'");
        std::size_t end = close + 1;
        // optional "*sqrt(N)" suffix belongs to the literal
        std::size_t p = end;
        while (p < s_.size() && std::isspace(static_cast<unsigned char>(s_[p]))) ++p;
        if (p < s_.size() && s_[p] == '*') {
            std::size_t q = p + 1;
            while (q < s_.size() && std::isspace(static_cast<unsigned char>(s_[q]))) ++q;
            if (s_.substr(q, 5) == "sqrt(") {
                const std::size_t rp = s_.find(')', q);
                if (rp == std::string_view::npos) fail("expected ')'", q);
                end = rp + 1;
            }
        }
        pos_ = end;
        try {
            std::optional<long> level;
            if (ctx_.level > 0) level = ctx_.level;
            return Element::term(parse_matrix(s_.substr(start, end - start), level));
        } catch (const ParseError& e) {
            fail(e.reason(), start + static_cast<std::size_t>(e.column()) - 1);
        }
    }

    Element atom()
    {
        ws();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        const std::size_t at = pos_;
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Element x = expr();
            expect(')');
            return x;
        }
        if (c == '[') return matrix_literal();
        if (std::isdigit(static_cast<unsigned char>(c))) return Element::term(ProjMatrix{}, Coefficient(rational()));
        if (c == '$') {
            ++pos_;
            const std::string name = ident();
            auto it = ctx_.vars.find(name);
            if (it == ctx_.vars.end()) fail("unknown variable $" + name, at);
            return it->second;
        }
        const std::string name = ident();
        if (name.empty()) fail("unexpected '" + std::string(1, c) + "'");
        if (name == "eps") return Element::term(ProjMatrix{}, Coefficient::eps());
        if (name == "I") return Element::one();
        if (name == "H") return Element::term(fricke(need_level(at)));
        if (name == "W") return Element::term(W(need_level(at)));
        if (name == "M2") return Element::term(M2(need_level(at)));
        if (name == "T") {
            if (accept('(')) {
                ws();
                const long n = integer();
                expect(')');
                if (n < 1) fail("Hecke index must be positive", at);
                return T_composite(n, need_level(at), ctx_.weight);
            }
            return Element::term(translation());
        }
        if (name == "beta") {
            expect('(');
            const Rational q = rational();
            expect(')');
            return Element::term(beta(q));
        }
        if (name == "diag") {
            expect('(');
            const Rational a = rational();
            expect(',');
            const Rational d = rational();
            expect(')');
            return Element::term(canonicalize(std::array<Rational, 4>{a, Rational(0), Rational(0), d}));
        }
        if (name == "inv") {
            expect('(');
            Element x = expr();
            expect(')');
            return inverse(x, at);
        }
        if (name.size() > 1 && name[0] == 'a') {
            try {
                return Element::term(ProjMatrix{}, Coefficient::symbol(Symbol::parse(name)));
            } catch (const Error&) {
            }
        }
        fail("unknown name '" + name + "'", at);
    }

    std::string_view s_;
    const ExprContext& ctx_;
    std::size_t pos_ = 0;
};

} // namespace

Element parse_element(std::string_view text, const ExprContext& ctx)
{
    return Parser(text, ctx).parse();
}

ProjMatrix parse_matrix_expr(std::string_view text, const ExprContext& ctx)
{
    const Element x = parse_element(text, ctx);
    if (x.size() != 1 || x.terms().begin()->second != Coefficient(1))
        throw Error(ErrorKind::InvalidArgument, "expected a single matrix, got " + x.to_string());
    return x.terms().begin()->first;
}

} // namespace hw
