#include "hw/hecke.hpp"

#include <numeric>

#include "hw/error.hpp"

namespace hw {

ProjMatrix translation() { return ProjMatrix::from_integers(1, 1, 0, 1); }
ProjMatrix fricke(long level) { return ProjMatrix::from_integers(0, -1, level, 0); }
ProjMatrix W(long level) { return ProjMatrix::from_integers(1, 0, level, 1); }
ProjMatrix diag(long a, long d) { return ProjMatrix::from_integers(a, 0, 0, d); }

ProjMatrix beta(const Rational& x)
{
    return canonicalize(std::array<Rational, 4>{Rational(1), x, Rational(0), Rational(1)});
}

ProjMatrix M2(long level)
{
    if (level % 2 == 0)
        throw Error(ErrorKind::EvenLevelForM2, "M2 needs an odd level, got " + std::to_string(level));
    return ProjMatrix::from_integers(2, -1, -level, (level + 1) / 2);
}

bool is_prime(long n)
{
    if (n < 2) return false;
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

Rational hecke_scale(long n, int weight)
{
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(weight / 2 - 1));
    return Rational(r);
}

Element T_composite(long n, long level, int weight)
{
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "Hecke index must be positive");
    const Coefficient c(hecke_scale(n, weight));
    Element t;
    for (long a = 1; a <= n; ++a) {
        if (n % a != 0 || std::gcd(a, level) != 1) continue;
        const long d = n / a;
        for (long b = 0; b < d; ++b) t.add_term(ProjMatrix::from_integers(a, b, 0, d), c);
    }
    return t;
}

Element T_prime(long p, long level, int weight)
{
    if (!is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
    return T_composite(p, level, weight);
}

Element hecke_generator(long n, long level, int weight)
{
    return T_composite(n, level, weight) - Element::term(ProjMatrix{}, Coefficient::eigen(static_cast<int>(n)));
}

std::vector<Correction> standard_corrections(long n)
{
    std::vector<Correction> out;
    for (long m = 2; m < n; ++m) {
        if (n % m != 0) continue;
        out.push_back({m, diag(n / m, 1)});
        out.push_back({m, diag(1, n / m)});
    }
    return out;
}

namespace {

// H (T_n - a_n) H - (T_n - a_n), with its certificate
//   (H - eps) * (T_n - a_n) H + (T_n - a_n) * (eps H - 1).
DResult raw_D(long n, long level, int weight)
{
    const ProjMatrix h = fricke(level);
    const Element g = hecke_generator(n, level, weight);
    DResult r;
    r.value = h * g * h - g;
    const Element eps_h = Element::term(h, Coefficient::eps());
    r.certificate.add(Generator::fricke(level), g * h);
    r.certificate.add(Generator::hecke(level, weight, static_cast<int>(n)), eps_h - Element::one());
    return r;
}

} // namespace

DResult build_D(long n, long level, const std::vector<Correction>& corrections, int weight)
{
    DResult out = raw_D(n, level, weight);
    const Coefficient inv_n(1 / hecke_scale(n, weight));
    out.value = inv_n * out.value;
    out.certificate = out.certificate.scaled(inv_n);
    for (const auto& corr : corrections) {
        DResult dm = raw_D(corr.m, level, weight);
        const Coefficient s(-1 / hecke_scale(corr.m, weight));
        out.value += s * (dm.value * corr.side);
        out.certificate.append(dm.certificate.right_mul(Element::term(corr.side)).scaled(s));
    }
    for (const auto& [m, c] : out.value.terms())
        if (c.has_eigen_symbols())
            throw Error(ErrorKind::EigenvalueResidue,
                        "eigenvalue symbols survive in D_" + std::to_string(n) + ": " + c.to_string());
    return out;
}

} // namespace hw
