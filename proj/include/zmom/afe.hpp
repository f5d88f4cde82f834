#ifndef ZMOM_AFE_HPP
#define ZMOM_AFE_HPP

#include <complex>
#include <cstdint>
#include <vector>

namespace zmom {

// Contour parameters for the kernel quadrature. The integrand along a
// vertical line Re s = c decays like e^{c^2 - y^2}, so Y = 12 puts the
// truncated tail far below double precision.
struct KernelParams {
    int m = 1;
    double quad_halfwidth = 12.0; // >= 8
    double quad_step = 0.005;     // <= 0.05
};
void validate(const KernelParams& params);

// V(x,t) = (1/2pi i) int_{(1)} e^{s^2}/s (t^{3m}/x)^s ds, by composite Simpson
// along a vertical line. For x < t^{3m} the line Re s = 1 is used directly;
// for x >= t^{3m} the contour is shifted across the pole at s = 0 (residue 1)
// to Re s = -1, which keeps the integrand envelope O(e) on either side. The
// value is real for real x, t; the imaginary part of the quadrature must come
// out below 1e-10 and is checked.
double kernel_v(double x, double t, int m, const KernelParams& params);

// Same quadrature on a caller-chosen line Re s = c > 0 (no residue handling);
// exists to verify contour independence.
double kernel_v_on_line(double x, double t, int m, const KernelParams& params, double line);

// tau_alpha(n) = sum over ordered factorizations n = n_1...n_m of
// prod_k n_k^{-i alpha_k}; exact.
std::complex<double> tau_alpha(std::uint64_t n, const std::vector<double>& alphas);

// The smoothed Dirichlet side of the approximate functional equation,
//   S(t) = sum_n tau_alpha(n) n^{-1/2-it} V(n,t),
// two ways:
//
//  - afe_rhs_series: literal term-by-term summation to `cutoff`, V drawn from
//    a dense interpolation table in log(t^{3m}/x). Requires V(cutoff,t) <
//    1e-10, which bounds cutoff >= ~1.5e4 * t^{3m}; with the 10^7-term budget
//    this is only satisfiable for t^{3m} <~ 700, far below the t >= 100 the
//    identity check needs. Kept for cross-validation at small t.
//
//  - afe_rhs_contour: the same sum evaluated through its absolutely
//    convergent integral form (1/2pi) int e^{(c+iy)^2}/(c+iy) t^{3m(c+iy)}
//    prod_k zeta(1/2+c+i(t+y+alpha_k)) dy on a line c in (1/2, 1]. Exchanging
//    sum and integral is Fubini on an absolutely convergent double sum, so
//    this is the exact series value up to quadrature error; no contour is
//    moved across the pole at s = 0, so the identity under test is not
//    assumed. The line is lowered below 1 when t^{3m} is large enough that
//    cancellation against the t^{3m c} envelope would cost double precision.
std::complex<double> afe_rhs_series(double t, const std::vector<double>& alphas,
                                    std::uint64_t cutoff, const KernelParams& params);
std::complex<double> afe_rhs_contour(double t, const std::vector<double>& alphas,
                                     const KernelParams& params, double line = 0.0);

// Series partial sum without the tail certificate; for saturation sweeps.
std::complex<double> afe_rhs_series_unchecked(double t, const std::vector<double>& alphas,
                                              std::uint64_t cutoff, const KernelParams& params);

// True when the series route can certify V(cutoff, t) < 1e-10 within the
// 10^7-term budget.
bool afe_series_feasible(double t, int m, std::uint64_t cutoff);

enum class AfeMethod { Auto, Series, Contour };

// |prod_k zeta(1/2 + i(t+alpha_k)) - S(t)|. Auto picks the series route when
// feasible (see above) and the contour route otherwise.
double afe_residual(double t, const std::vector<double>& alphas, std::uint64_t cutoff,
                    const KernelParams& params, AfeMethod method = AfeMethod::Auto);

} // namespace zmom

#endif
