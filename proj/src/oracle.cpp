#include "hw/oracle.hpp"

#include <cmath>
#include <limits>

#include "hw/error.hpp"

namespace hw {

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;
constexpr double tail_tol = 1e-12;

std::int64_t checked_add(std::int64_t x, std::int64_t y)
{
    std::int64_t r;
    if (__builtin_add_overflow(x, y, &r)) throw Error(ErrorKind::InvalidArgument, "q-expansion overflow");
    return r;
}

std::int64_t checked_mul(std::int64_t x, std::int64_t y)
{
    std::int64_t r;
    if (__builtin_mul_overflow(x, y, &r)) throw Error(ErrorKind::InvalidArgument, "q-expansion overflow");
    return r;
}

// prod (1 - q^{step n})^2 truncated below q^len, via Euler's pentagonal series.
std::vector<std::int64_t> euler_square(long len, long step)
{
    std::vector<std::pair<long, int>> sparse;  // exponent, sign
    for (long k = 0;; ++k) {
        bool any = false;
        const std::vector<long> js = k == 0 ? std::vector<long>{0} : std::vector<long>{k, -k};
        for (long s : js) {
            const long e = step * (s * (3 * s - 1) / 2);
            if (e < len) {
                sparse.emplace_back(e, (k % 2) ? -1 : 1);
                any = true;
            }
        }
        if (!any) break;
    }
    std::vector<std::int64_t> sq(static_cast<std::size_t>(len), 0);
    for (const auto& [e1, s1] : sparse)
        for (const auto& [e2, s2] : sparse)
            if (e1 + e2 < len) sq[static_cast<std::size_t>(e1 + e2)] += s1 * s2;
    return sq;
}

} // namespace

QExpansion eta_square_11(long n_max)
{
    if (n_max < 20) throw Error(ErrorKind::InvalidArgument, "eta_square_11 needs n_max >= 20");
    const long len = n_max;  // exponents 0 .. n_max - 1 of the product
    const auto p1 = euler_square(len, 1);
    const auto p11 = euler_square(len, 11);
    QExpansion f;
    f.level = 11;
    f.weight = 2;
    f.a.assign(static_cast<std::size_t>(n_max), 0);
    for (long j = 0; j < len; j += 11) {
        const std::int64_t c = p11[static_cast<std::size_t>(j)];
        if (c == 0) continue;
        for (long i = 0; i + j < len; ++i) {
            auto& slot = f.a[static_cast<std::size_t>(i + j)];
            slot = checked_add(slot, checked_mul(c, p1[static_cast<std::size_t>(i)]));
        }
    }
    return f;
}

double truncation_bound(long n_max, double y)
{
    // sum_{n > m} 2 n r^n = 2 r^{m+1} ((m + 1) - m r) / (1 - r)^2
    const double r = std::exp(-two_pi * y);
    const double m = static_cast<double>(n_max);
    return 2 * std::pow(r, m + 1) * ((m + 1) - m * r) / ((1 - r) * (1 - r));
}

namespace {

struct Prepared {
    cplx w;         // gamma z
    cplx factor;    // det^{k/2} (cz + d)^{-k}
    long terms;
    double tail;
};

Prepared prepare(const QExpansion& f, const ProjMatrix& g, cplx z)
{
    if (z.imag() < 0.5) throw Error(ErrorKind::PointTooLow, "sample point needs Im z >= 0.5");
    const double a = g.a().get_d(), b = g.b().get_d(), c = g.c().get_d(), d = g.d().get_d();
    const double det = g.det().get_d();
    const cplx den = c * z + d;
    Prepared p;
    p.w = (a * z + b) / den;
    p.factor = std::pow(det, f.weight / 2.0) * std::pow(den, -f.weight);
    const double y = p.w.imag();
    // Fewest terms whose tail is below tolerance.
    long lo = 1, hi = f.n_max();
    if (truncation_bound(hi, y) >= tail_tol)
        throw Error(ErrorKind::InsufficientTerms,
                    "Im(gamma z) = " + std::to_string(y) + " needs more than " + std::to_string(hi) + " terms");
    while (lo < hi) {
        const long mid = (lo + hi) / 2;
        if (truncation_bound(mid, y) < tail_tol) hi = mid;
        else lo = mid + 1;
    }
    p.terms = lo;
    p.tail = truncation_bound(lo, y);
    return p;
}

} // namespace

SlashValue slash_eval(const QExpansion& f, const ProjMatrix& gamma, cplx z)
{
    return slash_eval_many(f, gamma, {z}, Exec::serial).front();
}

std::vector<SlashValue> slash_eval_many(const QExpansion& f, const ProjMatrix& gamma,
                                        const std::vector<cplx>& zs, Exec e)
{
    std::vector<Prepared> prep;
    long terms = 1;
    for (auto z : zs) {
        prep.push_back(prepare(f, gamma, z));
        terms = std::max(terms, prep.back().terms);
    }
    std::vector<std::int64_t> coeffs(f.a.begin(), f.a.begin() + terms);
    std::vector<cplx> qs;
    for (const auto& p : prep) qs.push_back(std::exp(cplx(0, two_pi) * p.w));
    const auto sums = eval_series(coeffs, qs, e);
    std::vector<SlashValue> out;
    for (std::size_t i = 0; i < prep.size(); ++i) {
        const double tail = truncation_bound(terms, prep[i].w.imag());
        out.push_back({prep[i].factor * sums[i], tail * std::abs(prep[i].factor), terms});
    }
    return out;
}

int measure_fricke_sign(const QExpansion& f)
{
    const cplx z(0.1, 1.0);
    const auto h = slash_eval(f, ProjMatrix::from_integers(0, -1, f.level, 0), z);
    const auto id = slash_eval(f, ProjMatrix{}, z);
    return (h.value / id.value).real() > 0 ? 1 : -1;
}

ResidualReport check_relation(const QExpansion& f, const Element& x, const std::vector<cplx>& points,
                              int fricke_sign, Exec e)
{
    ResidualReport rep;
    rep.points = points;
    std::vector<cplx> acc(points.size(), 0);
    auto value = [&](Symbol s) -> std::optional<cplx> {
        if (s.is_eps()) return cplx(fricke_sign);
        if (s.id <= f.n_max()) return cplx(static_cast<double>(f.coeff(s.id)));
        return std::nullopt;
    };
    for (const auto& [m, c] : x.terms()) {
        const cplx cv = c.evaluate(value);
        const auto vals = slash_eval_many(f, m, points, e);
        for (std::size_t i = 0; i < points.size(); ++i) {
            acc[i] += cv * vals[i].value;
            rep.max_truncation = std::max(rep.max_truncation, std::abs(cv) * vals[i].truncation);
        }
    }
    for (auto v : acc) {
        rep.residuals.push_back(std::abs(v));
        rep.max_residual = std::max(rep.max_residual, std::abs(v));
    }
    return rep;
}

std::vector<cplx> sample_points(int count)
{
    std::vector<cplx> out;
    for (int i = 0; i < count; ++i) {
        const double t = count > 1 ? static_cast<double>(i) / (count - 1) : 0.0;
        out.emplace_back(-0.37 + 0.61 * t, 0.5 + 1.5 * t);
    }
    return out;
}

} // namespace hw
