#include <benchmark/benchmark.h>

#include <random>

#include "hw/hecke.hpp"
#include "hw/kernels.hpp"

using namespace hw;

namespace {

std::vector<ProjMatrix> random_matrices(std::size_t n, long bound)
{
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<long> d(-bound, bound);
    std::vector<ProjMatrix> out;
    while (out.size() < n) {
        long a = d(rng), b = d(rng), c = d(rng), e = d(rng);
        if (a * e - b * c > 0) out.push_back(ProjMatrix::from_integers(a, b, c, e));
    }
    return out;
}

std::vector<Mat64> ball64(std::size_t n)
{
    std::vector<Mat64> out;
    for (const auto& m : random_matrices(n, 1000)) out.push_back(*to_mat64(m));
    return out;
}

void BM_BallArgmin(benchmark::State& st, Exec e)
{
    const auto ball = ball64(static_cast<std::size_t>(st.range(0)));
    const Mat64 m = *to_mat64(ProjMatrix::from_integers(29, 5, -91, -14));
    for (auto _ : st) benchmark::DoNotOptimize(ball_argmin(ball, m, e));
}

void BM_ClassifyBatch(benchmark::State& st, Exec e)
{
    const auto xs = random_matrices(static_cast<std::size_t>(st.range(0)), 50);
    for (auto _ : st) benchmark::DoNotOptimize(classify_batch(xs, e));
}

void BM_ExpandLayer(benchmark::State& st, Exec e)
{
    const auto frontier = random_matrices(static_cast<std::size_t>(st.range(0)), 50);
    const std::vector<ProjMatrix> gens = {translation(), inv(translation()), fricke(13), M2(13), inv(M2(13))};
    for (auto _ : st) benchmark::DoNotOptimize(expand_layer(frontier, gens, true, e));
}

void BM_EvalSeries(benchmark::State& st, Exec e)
{
    std::vector<std::int64_t> c(400);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = static_cast<std::int64_t>(i % 5) - 2;
    std::vector<std::complex<double>> qs;
    for (long i = 0; i < st.range(0); ++i) qs.push_back(std::polar(0.04, 0.01 * static_cast<double>(i)));
    for (auto _ : st) benchmark::DoNotOptimize(eval_series(c, qs, e));
}

} // namespace

BENCHMARK_CAPTURE(BM_BallArgmin, serial, Exec::serial)->Arg(4096)->Arg(65536);
BENCHMARK_CAPTURE(BM_BallArgmin, parallel, Exec::parallel)->Arg(4096)->Arg(65536);
BENCHMARK_CAPTURE(BM_ClassifyBatch, serial, Exec::serial)->Arg(10000);
BENCHMARK_CAPTURE(BM_ClassifyBatch, parallel, Exec::parallel)->Arg(10000);
BENCHMARK_CAPTURE(BM_ExpandLayer, serial, Exec::serial)->Arg(2000);
BENCHMARK_CAPTURE(BM_ExpandLayer, parallel, Exec::parallel)->Arg(2000);
BENCHMARK_CAPTURE(BM_EvalSeries, serial, Exec::serial)->Arg(1000);
BENCHMARK_CAPTURE(BM_EvalSeries, parallel, Exec::parallel)->Arg(1000);

BENCHMARK_MAIN();
