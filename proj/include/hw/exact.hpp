#pragma once

// Exact projective 2x2 matrices.
//
// A ProjMatrix is the canonical representative of a rational 2x2 matrix
// with positive determinant, taken up to nonzero rational scaling: integer
// entries, primitive (content 1), and the first nonzero entry positive.
// Matrices with every entry in Q*sqrt(N) are brought into the same monoid
// by multiplying through by sqrt(N).

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace hw {

using Integer = mpz_class;
using Rational = mpq_class;

// One matrix entry before canonicalization: `value` or `value * sqrt(N)`.
struct Entry {
    Rational value;
    bool surd = false;
};

class ProjMatrix {
public:
    ProjMatrix() : a_(1), b_(0), c_(0), d_(1) {}

    // Canonicalizes (a, b, c, d); throws on det <= 0.
    static ProjMatrix from_integers(Integer a, Integer b, Integer c, Integer d);
    static ProjMatrix from_integers(long a, long b, long c, long d)
    {
        return from_integers(Integer(a), Integer(b), Integer(c), Integer(d));
    }

    const Integer& a() const noexcept { return a_; }
    const Integer& b() const noexcept { return b_; }
    const Integer& c() const noexcept { return c_; }
    const Integer& d() const noexcept { return d_; }
    std::array<Integer, 4> entries() const { return {a_, b_, c_, d_}; }

    Integer det() const { return a_ * d_ - b_ * c_; }
    Integer trace() const { return a_ + d_; }
    bool is_identity() const { return a_ == 1 && b_ == 0 && c_ == 0 && d_ == 1; }

    // "[a b; c d]" with the canonical integer entries.
    std::string to_string() const;

    friend int compare(const ProjMatrix& x, const ProjMatrix& y);
    friend bool operator==(const ProjMatrix& x, const ProjMatrix& y)
    {
        return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.d_ == y.d_;
    }
    friend bool operator!=(const ProjMatrix& x, const ProjMatrix& y) { return !(x == y); }
    friend bool operator<(const ProjMatrix& x, const ProjMatrix& y) { return compare(x, y) < 0; }

private:
    struct Canonical {};
    ProjMatrix(Canonical, Integer a, Integer b, Integer c, Integer d)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {}

    Integer a_, b_, c_, d_;

    friend ProjMatrix make_canonical(Integer a, Integer b, Integer c, Integer d);
};

struct ProjMatrixHash {
    std::size_t operator()(const ProjMatrix& m) const noexcept;
};

ProjMatrix canonicalize(const std::array<Rational, 4>& raw);
// Surd mode: entries flagged `surd` are multiples of sqrt(level). Either all
// nonzero entries are surd or none are.
ProjMatrix canonicalize(const std::array<Entry, 4>& raw, long level);

ProjMatrix mul(const ProjMatrix& x, const ProjMatrix& y);
ProjMatrix inv(const ProjMatrix& x);
ProjMatrix power(const ProjMatrix& x, long n);
inline ProjMatrix operator*(const ProjMatrix& x, const ProjMatrix& y) { return mul(x, y); }

// tr^2 / det, invariant under scaling and conjugation.
Rational tau(const ProjMatrix& x);

enum class MatrixKind { scalar, elliptic, parabolic, hyperbolic };
std::string_view to_string(MatrixKind k);

struct MatrixClass {
    MatrixKind kind = MatrixKind::scalar;
    // Projective order; empty means infinite. Scalars have order 1.
    std::optional<int> order;
    Rational tau;

    bool finite_order() const { return order.has_value(); }
    bool elliptic_infinite() const { return kind == MatrixKind::elliptic && !order; }
    std::string describe() const;
};

MatrixClass classify(const ProjMatrix& x);

// det == 1 and c == 0 mod level.
bool in_gamma0(const ProjMatrix& x, long level);

// det is level times a square: the matrix came from an odd number of
// Fricke factors (entries in Q*sqrt(level) once scaled to det 1).
bool is_surd_type(const ProjMatrix& x, long level);

// Entries of x scaled to determinant 1, printed as rationals or rational
// multiples of sqrt(level) when that is possible; otherwise to_string().
std::string to_normalized_string(const ProjMatrix& x, long level);

// Primary key: sum of squares of the canonical entries; ties broken by the
// entry tuple.
struct SizeKey {
    Integer sum_squares;
    std::array<Integer, 4> tuple;

    friend bool operator<(const SizeKey& x, const SizeKey& y);
    friend bool operator==(const SizeKey& x, const SizeKey& y)
    {
        return x.sum_squares == y.sum_squares && x.tuple == y.tuple;
    }
};
SizeKey size_metric(const ProjMatrix& x);

// Matrix text syntax: "[a b; c d]" with entries such as 3, -2/3,
// 14/3/sqrt(13), -209*sqrt(13)/15; an optional trailing "*sqrt(N)" scales
// every entry. `level`, when given, must agree with any radicand used.
ProjMatrix parse_matrix(std::string_view text, std::optional<long> level = std::nullopt);

// Entry-level parser used by parse_matrix and by the expression language.
struct SurdValue {
    Rational value;
    bool surd = false;
    long radicand = 0;
};
SurdValue parse_surd_entry(std::string_view text);

} // namespace hw
