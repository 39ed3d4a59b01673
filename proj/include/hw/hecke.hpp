#pragma once

// Named operators and the Hecke combinations D_n.
//
// Convention: T_n = n^{k/2-1} * sum over ad = n, gcd(a, N) = 1, 0 <= b < d
// of [[a, b], [0, d]]. Under the determinant-normalized slash this acts with
// the classical eigenvalue a_n; for k = 2 every coefficient is 1.

#include <vector>

#include "hw/group_ring.hpp"
#include "hw/hypotheses.hpp"

namespace hw {

ProjMatrix translation();
ProjMatrix fricke(long level);
ProjMatrix W(long level);          // [[1, 0], [N, 1]]
ProjMatrix beta(const Rational& x);  // [[1, x], [0, 1]]
ProjMatrix diag(long a, long d);
ProjMatrix M2(long level);         // [[2, -1], [-N, (N + 1) / 2]]; throws EvenLevelForM2

bool is_prime(long n);

Rational hecke_scale(long n, int weight);
Element T_prime(long p, long level, int weight = 2);
Element T_composite(long n, long level, int weight = 2);
// T_n - a_n
Element hecke_generator(long n, long level, int weight = 2);

struct Correction {
    long m;
    ProjMatrix side;
};

// For every divisor 1 < m < n: (m, diag(n/m, 1)) and (m, diag(1, n/m)).
std::vector<Correction> standard_corrections(long n);

struct DResult {
    Element value;
    Certificate certificate;  // proves value ≡ 0
};

// (H (T_n - a_n) H - (T_n - a_n)) / c(n) minus D_m * side / c(m) for each
// correction, unreduced. Throws EigenvalueResidue if any a-symbol survives.
DResult build_D(long n, long level, const std::vector<Correction>& corrections, int weight = 2);

} // namespace hw
