#include "hw/kernels.hpp"

#include <atomic>
#include <numeric>

#include <omp.h>

namespace hw {

namespace {

std::atomic<Exec> g_exec{Exec::parallel};

using i128 = __int128;

struct Key {
    i128 ss;
    std::int64_t t[4];
};

bool less(const Key& x, const Key& y)
{
    if (x.ss != y.ss) return x.ss < y.ss;
    for (int i = 0; i < 4; ++i)
        if (x.t[i] != y.t[i]) return x.t[i] < y.t[i];
    return false;
}

std::int64_t gcd64(std::int64_t x, std::int64_t y)
{
    return std::gcd(x < 0 ? -x : x, y < 0 ? -y : y);
}

Key product_key(const Mat64& w, const Mat64& m)
{
    std::int64_t t[4] = {w.a * m.a + w.b * m.c, w.a * m.b + w.b * m.d,
                         w.c * m.a + w.d * m.c, w.c * m.b + w.d * m.d};
    std::int64_t g = gcd64(gcd64(t[0], t[1]), gcd64(t[2], t[3]));
    int first = t[0] != 0 ? 0 : (t[1] != 0 ? 1 : 2);
    if (t[first] < 0) g = -g;
    Key k{};
    for (int i = 0; i < 4; ++i) {
        k.t[i] = t[i] / g;
        k.ss += static_cast<i128>(k.t[i]) * k.t[i];
    }
    return k;
}

} // namespace

Exec default_exec() { return g_exec.load(); }
void set_default_exec(Exec e) { g_exec.store(e); }

std::optional<Mat64> to_mat64(const ProjMatrix& m)
{
    Mat64 r;
    std::int64_t* out[4] = {&r.a, &r.b, &r.c, &r.d};
    const Integer* in[4] = {&m.a(), &m.b(), &m.c(), &m.d()};
    for (int i = 0; i < 4; ++i) {
        if (!in[i]->fits_slong_p()) return std::nullopt;
        *out[i] = in[i]->get_si();
    }
    return r;
}

ProjMatrix from_mat64(const Mat64& m)
{
    return ProjMatrix::from_integers(Integer(static_cast<long>(m.a)), Integer(static_cast<long>(m.b)),
                                     Integer(static_cast<long>(m.c)), Integer(static_cast<long>(m.d)));
}

std::int64_t max_abs_entry(const Mat64& m)
{
    auto ab = [](std::int64_t x) { return x < 0 ? -x : x; };
    return std::max(std::max(ab(m.a), ab(m.b)), std::max(ab(m.c), ab(m.d)));
}

bool ball_argmin_fits(std::int64_t ball_max, const Mat64& m)
{
    const i128 bound = static_cast<i128>(2) * ball_max * max_abs_entry(m);
    return bound < (static_cast<i128>(1) << 62);
}

std::size_t ball_argmin_serial(const std::vector<Mat64>& ball, const Mat64& m)
{
    std::size_t best = 0;
    Key bk = product_key(ball[0], m);
    for (std::size_t i = 1; i < ball.size(); ++i) {
        Key k = product_key(ball[i], m);
        if (less(k, bk)) {
            bk = k;
            best = i;
        }
    }
    return best;
}

std::size_t ball_argmin_parallel(const std::vector<Mat64>& ball, const Mat64& m)
{
    const std::int64_t n = static_cast<std::int64_t>(ball.size());
    std::size_t best = 0;
    Key bk = product_key(ball[0], m);
#pragma omp parallel
    {
        std::size_t lbest = 0;
        Key lk = bk;
#pragma omp for schedule(static) nowait
        for (std::int64_t i = 1; i < n; ++i) {
            Key k = product_key(ball[i], m);
            if (less(k, lk)) {
                lk = k;
                lbest = static_cast<std::size_t>(i);
            }
        }
#pragma omp critical
        {
            // Keys of distinct products differ, so the minimum is unique.
            if (less(lk, bk)) {
                bk = lk;
                best = lbest;
            }
        }
    }
    return best;
}

std::size_t ball_argmin(const std::vector<Mat64>& ball, const Mat64& m, Exec e)
{
    if (e == Exec::parallel && ball.size() >= 4096) return ball_argmin_parallel(ball, m);
    return ball_argmin_serial(ball, m);
}

std::vector<MatrixClass> classify_batch_serial(const std::vector<ProjMatrix>& xs)
{
    std::vector<MatrixClass> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(classify(x));
    return out;
}

std::vector<MatrixClass> classify_batch_parallel(const std::vector<ProjMatrix>& xs)
{
    std::vector<MatrixClass> out(xs.size());
    const std::int64_t n = static_cast<std::int64_t>(xs.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) out[i] = classify(xs[i]);
    return out;
}

std::vector<MatrixClass> classify_batch(const std::vector<ProjMatrix>& xs, Exec e)
{
    return e == Exec::parallel ? classify_batch_parallel(xs) : classify_batch_serial(xs);
}

std::vector<ProjMatrix> expand_layer_serial(const std::vector<ProjMatrix>& frontier,
                                            const std::vector<ProjMatrix>& gens, bool right)
{
    std::vector<ProjMatrix> out;
    out.reserve(frontier.size() * gens.size());
    for (const auto& f : frontier)
        for (const auto& g : gens) out.push_back(right ? f * g : g * f);
    return out;
}

std::vector<ProjMatrix> expand_layer_parallel(const std::vector<ProjMatrix>& frontier,
                                              const std::vector<ProjMatrix>& gens, bool right)
{
    const std::size_t k = gens.size();
    std::vector<ProjMatrix> out(frontier.size() * k);
    const std::int64_t n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto& f = frontier[i / k];
        const auto& g = gens[i % k];
        out[i] = right ? f * g : g * f;
    }
    return out;
}

std::vector<ProjMatrix> expand_layer(const std::vector<ProjMatrix>& frontier,
                                     const std::vector<ProjMatrix>& gens, bool right, Exec e)
{
    if (e == Exec::parallel && frontier.size() * gens.size() >= 256)
        return expand_layer_parallel(frontier, gens, right);
    return expand_layer_serial(frontier, gens, right);
}

namespace {

std::complex<double> horner(const std::vector<std::int64_t>& coeffs, std::complex<double> q)
{
    std::complex<double> s = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) s = (s + static_cast<double>(coeffs[i])) * q;
    return s;
}

} // namespace

std::vector<std::complex<double>> eval_series_serial(const std::vector<std::int64_t>& coeffs,
                                                     const std::vector<std::complex<double>>& qs)
{
    std::vector<std::complex<double>> out;
    out.reserve(qs.size());
    for (auto q : qs) out.push_back(horner(coeffs, q));
    return out;
}

std::vector<std::complex<double>> eval_series_parallel(const std::vector<std::int64_t>& coeffs,
                                                       const std::vector<std::complex<double>>& qs)
{
    std::vector<std::complex<double>> out(qs.size());
    const std::int64_t n = static_cast<std::int64_t>(qs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) out[i] = horner(coeffs, qs[i]);
    return out;
}

std::vector<std::complex<double>> eval_series(const std::vector<std::int64_t>& coeffs,
                                              const std::vector<std::complex<double>>& qs, Exec e)
{
    return e == Exec::parallel ? eval_series_parallel(coeffs, qs) : eval_series_serial(coeffs, qs);
}

} // namespace hw
