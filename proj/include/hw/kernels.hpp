#pragma once

// Hot loops with a serial reference and an OpenMP version of each. The two
// must agree exactly; tests and the benchmark compare them.

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "hw/exact.hpp"

namespace hw {

enum class Exec { serial, parallel };

// Default used by the library when no policy is given.
Exec default_exec();
void set_default_exec(Exec e);

// Machine-word copy of a canonical matrix.
struct Mat64 {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    friend bool operator==(const Mat64&, const Mat64&) = default;
};

std::optional<Mat64> to_mat64(const ProjMatrix& m);
ProjMatrix from_mat64(const Mat64& m);
std::int64_t max_abs_entry(const Mat64& m);

// Index i minimizing size_metric(ball[i] * m). Requires
// 2 * max|ball entry| * max|m entry| < 2^62; callers fall back to exact
// arithmetic otherwise.
std::size_t ball_argmin_serial(const std::vector<Mat64>& ball, const Mat64& m);
std::size_t ball_argmin_parallel(const std::vector<Mat64>& ball, const Mat64& m);
std::size_t ball_argmin(const std::vector<Mat64>& ball, const Mat64& m, Exec e);
bool ball_argmin_fits(std::int64_t ball_max, const Mat64& m);

std::vector<MatrixClass> classify_batch_serial(const std::vector<ProjMatrix>& xs);
std::vector<MatrixClass> classify_batch_parallel(const std::vector<ProjMatrix>& xs);
std::vector<MatrixClass> classify_batch(const std::vector<ProjMatrix>& xs, Exec e);

// out[i * gens.size() + j] = frontier[i] * gens[j] (append on the right when
// `right` is true, otherwise gens[j] * frontier[i]).
std::vector<ProjMatrix> expand_layer_serial(const std::vector<ProjMatrix>& frontier,
                                            const std::vector<ProjMatrix>& gens, bool right);
std::vector<ProjMatrix> expand_layer_parallel(const std::vector<ProjMatrix>& frontier,
                                              const std::vector<ProjMatrix>& gens, bool right);
std::vector<ProjMatrix> expand_layer(const std::vector<ProjMatrix>& frontier,
                                     const std::vector<ProjMatrix>& gens, bool right, Exec e);

// Sum_{n>=1} coeffs[n-1] q^n at each point q, with |q| < 1.
std::vector<std::complex<double>> eval_series_serial(const std::vector<std::int64_t>& coeffs,
                                                     const std::vector<std::complex<double>>& qs);
std::vector<std::complex<double>> eval_series_parallel(const std::vector<std::int64_t>& coeffs,
                                                       const std::vector<std::complex<double>>& qs);
std::vector<std::complex<double>> eval_series(const std::vector<std::int64_t>& coeffs,
                                              const std::vector<std::complex<double>>& qs, Exec e);

} // namespace hw
