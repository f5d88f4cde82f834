#ifndef ZMOM_ZETA_HPP
#define ZMOM_ZETA_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "zmom/primes.hpp"

namespace zmom {

struct ComplexPoint {
    double sigma = 0.0;
    double t = 0.0;

    std::complex<double> as_complex() const { return {sigma, t}; }
};

// Euler-Maclaurin evaluation of zeta(s) for sigma >= -1, |t| <= 10^7:
//   zeta(s) = sum_{n<N} n^{-s} + N^{1-s}/(s-1) + N^{-s}/2
//           + sum_{k<=M} B_{2k}/(2k)! * (s)_{2k-1} * N^{-s-2k+1} + R_M,
// with |R_M| <= |s+2M+1|/(sigma+2M+1) * |first omitted term| and N, M chosen
// from (s, rel_tol). Throws on the pole s = 1 and when the tolerance is not
// met within the supported range.
std::complex<double> zeta(ComplexPoint s, double rel_tol = 1e-13);
std::complex<double> zeta(std::complex<double> s, double rel_tol = 1e-13);

// zeta(1 + eps + i*delta); the shape every main-term factor uses.
std::complex<double> zeta_one(double delta, double eps);

// Riemann-Siegel theta, asymptotic expansion (t >= 2). Z(t) = exp(i*theta) *
// zeta(1/2+it) is real on the critical line.
double rs_theta(double t);
double hardy_z(double t, double rel_tol = 1e-13);

// The conditional majorant for log|zeta(1/2 + i(t+alpha))|, without its O(1):
//   Re sum_{p<=X} p^{-1/2-1/logX-i(t+alpha)} log(X/p)/log X
// + Re sum_{p<=min(sqrt X, log T)} (1/2) p^{-1-2i(t+alpha)} + log T/log X.
double rh_majorant(double t, double alpha, double X, double T, const PrimeTable& table);

// Samples of zeta(1/2 + i t) on an arithmetic grid.
struct ZetaGrid {
    double t0 = 0.0;
    double step = 0.0;
    std::vector<std::complex<double>> v;

    std::size_t count() const { return v.size(); }
    double t_at(std::size_t k) const { return t0 + step * static_cast<double>(k); }
};

// Grid sampler built on the same Euler-Maclaurin formula with one shared
// cutoff N ~ max(64, t_max/3) and M = 20; the main sum is advanced
// incrementally (see OscSumGrid). Absolute accuracy ~1e-11 on the supported
// range; values are identical for any thread count.
ZetaGrid sample_zeta_grid(double t0, double step, std::size_t count, int threads);

} // namespace zmom

#endif
