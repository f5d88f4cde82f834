#ifndef ZMOM_MOMENTS_HPP
#define ZMOM_MOMENTS_HPP

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "zmom/params.hpp"
#include "zmom/primes.hpp"
#include "zmom/zeta.hpp"

namespace zmom {

// Integration grid over [t_lo, t_hi] at the given Simpson step. The step must
// resolve the oscillation of zeta at the top of the window:
// step <= 2pi / (20 log(t_hi/2pi)).
struct QuadraturePlan {
    enum class Weight { Sharp, Smooth };

    double t_lo = 0.0;
    double t_hi = 0.0;
    double step = 0.0;
    Weight weight = Weight::Sharp;

    std::size_t intervals = 0; // even; step * intervals == t_hi - t_lo

    std::size_t node_count() const { return intervals + 1; }
    double node(std::size_t i) const { return t_lo + step * static_cast<double>(i); }
    // Simpson weight of node i (includes the step factor).
    double simpson_weight(std::size_t i) const;
};

// Default plan for zeta moments over [T, 2T]: h = 2pi/(40 log(2T/2pi)),
// rounded so an even number of intervals lands exactly on 2T.
QuadraturePlan make_moment_plan(double T, QuadraturePlan::Weight weight,
                                std::optional<double> step_override = std::nullopt);

// Plan for integrands whose fastest oscillation has angular frequency
// max_freq (Dirichlet-polynomial mean values).
QuadraturePlan make_poly_plan(double t_lo, double t_hi, double max_freq);

// Smooth plateau weight: w = 1 on [5/4, 7/4], supported on [1, 2],
// built from f(x) = g(x)/(g(x)+g(1-x)), g(x) = e^{-1/x} for x > 0.
double smooth_weight(double u);

// Supplies zeta(1/2 + i t) samples for a requested grid; the default computes
// them directly, the CLI wraps this with a disk cache.
using ZetaGridProvider = std::function<ZetaGrid(double t0, double step, std::size_t count)>;
ZetaGridProvider direct_zeta_provider(int threads);

struct MomentReport {
    MomentSpec spec;
    double value = 0.0;
    double predicted = 0.0;
    double ratio = 0.0;
    QuadraturePlan plan;
    double runtime_seconds = 0.0;
    double delta_used = 0.0;
};

// M_{alpha,beta}(T) = int_T^{2T} prod_k |zeta(1/2 + i(t+alpha_k))|^{2 beta_k} dt
// by composite Simpson on the plan grid (smooth weight multiplies by w(t/T)).
MomentReport shifted_moment(const MomentSpec& spec, const QuadraturePlan& plan,
                            const ZetaGridProvider& provider, int threads = 1);

// T (log T)^{sum beta_k^2} prod_{j<k} |zeta(1 + i(a_j-a_k) + 1/log T)|^{2 b_j b_k}.
double predicted_main_term(const MomentSpec& spec);

// t is good when |P_{j,T_L}(1/2 + i(t+alpha_k))| <= K_j for all j <= L, k <= m.
bool good_set_member(double t, const MomentSpec& spec, const Schedule& sched,
                     const PrimeTable& table);

struct HolderExponents {
    double inv_p = 0.0;
    double inv_q = 0.0;
    std::vector<double> inv_r;

    double reciprocal_sum() const;
};
// 1/p = 1/(4 b*), 1/r_k = 1/(2m) - beta_k/(4 m b*), 1/q = 1 - 1/p - sum 1/r_k;
// all reciprocals lie in (0,1).
HolderExponents holder_exponents(const std::vector<double>& betas);

// The five quantities of the Hoelder decomposition, all accumulated over the
// same nodes, Simpson weights and good-set mask, so the discrete inequality
// |I0| <= M^{1/p} J^{1/q} prod |I_k|^{1/r_k} is exact up to roundoff:
//   M  - sharp moment over the full window (no mask, weight 1),
//   J  - exp factors only, on the good set, smooth weight,
//   I0 - complex zeta product times exp((b_k-1)P + b_k conj P), good set,
//   Ik - |zeta_k|^{2m} times exp(2(b_k-m)Re P) and the other shifts' factors.
struct HolderIntegrals {
    double M = 0.0;
    double J = 0.0;
    std::complex<double> I0;
    std::vector<double> Ik;
    HolderExponents exponents;
    double good_fraction = 0.0; // weighted fraction of the window kept
    double lhs = 0.0;           // |I0|
    double rhs = 0.0;           // M^{1/p} |J|^{1/q} prod |Ik|^{1/r_k}
    double relative_slack = 0.0; // (rhs - lhs)/rhs
};
HolderIntegrals holder_integrals(const MomentSpec& spec, const Schedule& sched,
                                 const QuadraturePlan& plan, const PrimeTable& table,
                                 const ZetaGridProvider& provider, int threads = 1);

// The individual integrals (computed through the same machinery).
double integral_J(const MomentSpec& spec, const Schedule& sched, const QuadraturePlan& plan,
                  const PrimeTable& table, const ZetaGridProvider& provider, int threads = 1);
std::complex<double> integral_I0(const MomentSpec& spec, const Schedule& sched,
                                 const QuadraturePlan& plan, const PrimeTable& table,
                                 const ZetaGridProvider& provider, int threads = 1);
double integral_Ik(int k, const MomentSpec& spec, const Schedule& sched,
                   const QuadraturePlan& plan, const PrimeTable& table,
                   const ZetaGridProvider& provider, int threads = 1);

// prod_{p <= X} (1 + sum_{j,k} beta_j beta_k / p^{1 + i(alpha_j - alpha_k)});
// conjugate pairing makes every factor real, checked to 1e-10.
double euler_local_product(double X, const std::vector<double>& alphas,
                           const std::vector<double>& betas, const PrimeTable& table);

} // namespace zmom

#endif
