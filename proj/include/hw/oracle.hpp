#pragma once

// Numeric ground truth: the level 11 weight 2 newform eta(z)^2 eta(11z)^2.

#include <complex>
#include <cstdint>
#include <vector>

#include "hw/group_ring.hpp"
#include "hw/kernels.hpp"

namespace hw {

using cplx = std::complex<double>;

struct QExpansion {
    long level = 11;
    int weight = 2;
    std::vector<std::int64_t> a;  // a[n - 1] = a_n

    std::int64_t coeff(long n) const { return a.at(static_cast<std::size_t>(n - 1)); }
    long n_max() const { return static_cast<long>(a.size()); }
};

// q prod (1 - q^n)^2 (1 - q^{11n})^2, exact. Requires n_max >= 20.
QExpansion eta_square_11(long n_max);

// Upper bound on sum_{n > n_max} 2n e^{-2 pi n y}, which dominates the tail
// since |a_n| <= d(n) sqrt(n) <= 2n.
double truncation_bound(long n_max, double y);

struct SlashValue {
    cplx value;
    double truncation = 0;   // bound on the error of f(gamma z)
    long terms_used = 0;
};

// det^{k/2} (cz + d)^{-k} f(gamma z). Throws PointTooLow when Im z < 0.5 and
// InsufficientTerms when the tail bound at gamma z is not below 1e-12.
SlashValue slash_eval(const QExpansion& f, const ProjMatrix& gamma, cplx z);

// Several points at once; uses the series kernel.
std::vector<SlashValue> slash_eval_many(const QExpansion& f, const ProjMatrix& gamma,
                                        const std::vector<cplx>& zs, Exec e = default_exec());

// f|H compared with f at a point on the imaginary axis; returns +1 or -1.
int measure_fricke_sign(const QExpansion& f);

struct ResidualReport {
    std::vector<cplx> points;
    std::vector<double> residuals;
    double max_residual = 0;
    double max_truncation = 0;
};

// |sum c_gamma (f|gamma)(z)| at each point; eps takes `fricke_sign`, a_n
// the coefficients of f. Throws UnresolvedSymbol for anything else.
ResidualReport check_relation(const QExpansion& f, const Element& x, const std::vector<cplx>& points,
                              int fricke_sign, Exec e = default_exec());

// Default sample points with Im z in [0.5, 2].
std::vector<cplx> sample_points(int count);

} // namespace hw
