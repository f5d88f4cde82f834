#ifndef ZMOM_DIRICHLET_HPP
#define ZMOM_DIRICHLET_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "zmom/params.hpp"
#include "zmom/primes.hpp"
#include "zmom/zeta.hpp"

namespace zmom {

using CoeffMap = std::map<std::uint64_t, std::complex<double>>;
using RealCoeffMap = std::map<std::uint64_t, double>;

// Finite Dirichlet sum sum_n c_n n^{-s}, sparse over its support. `length`
// is the largest supported index; the coefficient of n = 1 is always stored.
struct DirichletPoly {
    std::vector<std::pair<std::uint64_t, std::complex<double>>> terms; // ascending n
    std::uint64_t length = 1;

    static DirichletPoly from_map(const CoeffMap& m);
    CoeffMap as_map() const;
};

// Deterministic evaluation in ascending-n order.
std::complex<double> eval(const DirichletPoly& poly, ComplexPoint s);

// a_X(p) = log(X/p) * p^{-1/log X} / log X, in [0, 1). Requires 2 <= p <= X.
double a_smoothing(double p, double X);

// The block polynomial at scale X:
//   j = 1:  a_X(p) at n = p for p <= T_1, plus 1/2 at n = p^2 for p <= log T;
//   j >= 2: a_X(p) at n = p for p in (T_{j-1}, T_j].
DirichletPoly p_poly(int j, double X, const Schedule& sched, const PrimeTable& table);

// Truncated exponential sum_{m <= D} (beta z)^m / m! evaluated as a scalar
// series; equal to the Dirichlet-polynomial evaluation of n_poly by
// linearity. D = sched.trunc_degree(j).
std::complex<double> n_poly_eval(int j, double X, double beta, ComplexPoint s,
                                 const Schedule& sched, const PrimeTable& table);

// Materialized truncated exponential of beta * P_{j,X}, built by repeated
// sparse Dirichlet convolution and pruned at support_cap. Exact (no pruning
// loss) for every n <= support_cap as long as log2(support_cap) < D.
DirichletPoly n_poly(int j, double X, double beta, const Schedule& sched, const PrimeTable& table,
                     std::uint64_t support_cap = 1000000);

// |n_poly eval - exp(beta * P eval)| at s. The difference is the exponential
// tail sum_{m > D} (beta z)^m / m!, reported through a tight upper estimate
// evaluated in log space (a direct float subtraction of two O(1) quantities
// cannot resolve magnitudes like e^{-500}). `hypothesis_ok` records whether
// |P(s)| <= K_j, the premise under which the gap bound applies.
struct TaylorGap {
    double gap = 0.0;      // upper estimate of |N - exp|, 0 on underflow
    double log_gap = 0.0;  // log of the estimate (-inf when exactly 0)
    bool hypothesis_ok = false;
    double p_abs = 0.0; // |P_{j,X}(s)|
};
TaylorGap taylor_gap(int j, double X, double beta, ComplexPoint s, const Schedule& sched,
                     const PrimeTable& table);

// log of a tight upper bound for |sum_{m>D} x^m/m!| with ax = |x|:
//   ax^{D+1}/(D+1)! / (1 - ax/(D+2)),
// and the bound itself (0 on underflow). Exposed for the gap reports.
double exp_tail_upper_log(double ax, int D);
double exp_tail_upper(double ax, int D);

// Multiplicative coefficient models:
//   g_X(p^r; beta) = beta^r a_X(p)^r / r!
//   h_X(p^r; beta) = g + 1_{p <= log T} sum_{t=1}^{floor(r/2)}
//                      beta^{r-t} a_X(p)^{e(r,t)} / (2^t t! (r-2t)!)
// with e(r,t) = r-2t (consistent with expanding the exponential; default) or
// r-t (the printed variant, kept selectable for comparison).
enum class HVariant { Derived, Printed };
double g_coeff(double p, int r, double beta, double X);
double h_coeff(double p, int r, double beta, double X, double T,
               HVariant variant = HVariant::Derived);

// Indicator c_j(n): n is a product of at most D_j = trunc_degree(j) units,
// where a unit is a block-j prime, or additionally a prime square <= log T
// when j = 1.
bool c_indicator(int j, std::uint64_t n, const Schedule& sched);

// Coefficients of prod_k N_{j,X}(s + i alpha_k; beta_k):
//   value    - the m-fold convolution (b);
//   primed   - truncation indicator dropped, multiplicative (b');
//   majorant - twists dropped and |beta_k| used, non-negative (b'').
// All maps are restricted to n <= cap.
struct CoeffFamily {
    int j = 1;
    double X = 0.0;
    std::vector<double> alphas, betas;
    std::uint64_t cap = 0;
    CoeffMap value;
    CoeffMap primed;
    RealCoeffMap majorant;
};
CoeffFamily b_family(int j, double X, const std::vector<double>& alphas,
                     const std::vector<double>& betas, const Schedule& sched,
                     const PrimeTable& table, std::uint64_t cap = 100000);

// q_j / r_j: twofold self-convolutions of the b-families with exponent
// vectors (beta-1)/2 and beta/2 respectively.
struct QrFamilies {
    CoeffFamily q;
    CoeffFamily r;
};
QrFamilies qr_coeffs(int j, double X, const std::vector<double>& alphas,
                     const std::vector<double>& betas, const Schedule& sched,
                     const PrimeTable& table, std::uint64_t cap = 100000);

// Product over j <= L of n_poly(j, X, beta). With enforce_length_bound the
// analytic length bound T_1^{200 b*^2 K_1} * prod_{j>=2} T_j^{100 b*^2 K_j}
// must not exceed T^{1/10} (it never does at desk scale once L >= 1, so the
// happy path is the empty product; tests pass false to exercise structure).
DirichletPoly n_full(double X, double beta, const Schedule& sched, const PrimeTable& table,
                     std::uint64_t support_cap = 1000000, bool enforce_length_bound = true);

// Sparse Dirichlet convolution keeping n <= cap.
CoeffMap dirichlet_convolve(const CoeffMap& a, const CoeffMap& b, std::uint64_t cap);

// Debug/test dump: CSV lines "n,re,im" sorted by n.
std::string dump_csv(const DirichletPoly& poly);

} // namespace zmom

#endif
