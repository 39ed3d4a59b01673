#include <random>

#include "doctest.h"
#include "hw/hecke.hpp"
#include "hw/kernels.hpp"

using namespace hw;

namespace {

std::vector<ProjMatrix> random_matrices(std::size_t n, long bound, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> d(-bound, bound);
    std::vector<ProjMatrix> out;
    while (out.size() < n) {
        long a = d(rng), b = d(rng), c = d(rng), e = d(rng);
        if (a * e - b * c > 0) out.push_back(ProjMatrix::from_integers(a, b, c, e));
    }
    return out;
}

} // namespace

TEST_CASE("ball argmin: serial and parallel agree")
{
    std::vector<Mat64> ball;
    for (const auto& m : random_matrices(20000, 40, 1)) ball.push_back(*to_mat64(m));
    std::int64_t top = 0;
    for (const auto& m : ball) top = std::max(top, max_abs_entry(m));
    for (const auto& m : random_matrices(50, 1000, 2)) {
        const Mat64 x = *to_mat64(m);
        REQUIRE(ball_argmin_fits(top, x));
        const std::size_t s = ball_argmin_serial(ball, x);
        CHECK(ball_argmin_parallel(ball, x) == s);
        // the winner really is minimal under the exact metric
        const SizeKey best = size_metric(from_mat64(ball[s]) * m);
        for (std::size_t i = 0; i < ball.size(); i += 97)
            CHECK_FALSE(size_metric(from_mat64(ball[i]) * m) < best);
    }
}

TEST_CASE("classify batch: serial and parallel agree")
{
    const auto xs = random_matrices(3000, 50, 3);
    const auto s = classify_batch_serial(xs);
    const auto p = classify_batch_parallel(xs);
    REQUIRE(s.size() == p.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s[i].kind == p[i].kind);
        CHECK(s[i].order == p[i].order);
        CHECK(s[i].tau == p[i].tau);
    }
}

TEST_CASE("layer expansion: serial and parallel agree")
{
    const auto frontier = random_matrices(700, 20, 4);
    const std::vector<ProjMatrix> gens = {translation(), inv(translation()), fricke(13), M2(13)};
    for (bool right : {true, false}) {
        const auto s = expand_layer_serial(frontier, gens, right);
        CHECK(s == expand_layer_parallel(frontier, gens, right));
        CHECK(s[5 * gens.size() + 2] == (right ? frontier[5] * gens[2] : gens[2] * frontier[5]));
    }
}

TEST_CASE("series evaluation: serial and parallel agree")
{
    std::vector<std::int64_t> c(500);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = static_cast<std::int64_t>(i % 7) - 3;
    std::vector<std::complex<double>> qs;
    for (int i = 0; i < 300; ++i) qs.push_back(std::polar(0.02 + 0.001 * i, 0.1 * i));
    const auto s = eval_series_serial(c, qs);
    const auto p = eval_series_parallel(c, qs);
    for (std::size_t i = 0; i < qs.size(); ++i) CHECK(s[i] == p[i]);
    // q + 2 q^2 at q = 1/2
    CHECK(eval_series_serial({1, 2}, {0.5})[0].real() == doctest::Approx(1.0));
}

TEST_CASE("Mat64 conversion")
{
    const ProjMatrix m = ProjMatrix::from_integers(6, -5, -13, 11);
    CHECK(from_mat64(*to_mat64(m)) == m);
    CHECK_FALSE(to_mat64(ProjMatrix::from_integers(Integer("100000000000000000000"), 0, 0, 1)).has_value());
}
