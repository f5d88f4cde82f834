#ifndef ZMOM_PARAMS_HPP
#define ZMOM_PARAMS_HPP

#include <optional>
#include <vector>

namespace zmom {

// One moment-problem instance: the window scale T, the shifts applied to the
// critical-line argument, and the (non-negative) exponents on each factor.
struct MomentSpec {
    double T = 0.0;
    std::vector<double> alphas;
    std::vector<double> betas;

    int m() const { return static_cast<int>(betas.size()); }
};

// Throws spec_error unless: m >= 1, alphas/betas same size, betas[k] >= 0,
// |alphas[k]| <= T/2, T >= 100 and finite.
void validate(const MomentSpec& spec);

// beta_star = sum_k max(1, beta_k). Empty input is a spec_error.
double beta_star(const std::vector<double>& betas);

// Block parameters derived from T and delta:
//   c_0 = 0,  c_j = e^j / (log log T)^2   (j >= 1)
//   T_j = T^{c_j},  K_j = c_j^{-3/4},
//   L = max { j : T_j <= T^delta }  (equivalently c_j <= delta).
// Vectors c and Tj have L+1 entries (index 0 included); K has L entries and
// K[j-1] corresponds to block j.
struct Schedule {
    double T = 0.0;
    double delta = 0.0;
    int L = 0;
    std::vector<double> c;
    std::vector<double> Tj;
    std::vector<double> K;
    double beta_star = 0.0;

    double block_lo(int j) const { return Tj[static_cast<std::size_t>(j) - 1]; } // exclusive for j >= 2
    double block_hi(int j) const { return Tj[static_cast<std::size_t>(j)]; }
    double Kj(int j) const { return K[static_cast<std::size_t>(j) - 1]; }
    // Truncation degree of the exponential series in block j.
    int trunc_degree(int j) const;
};

// Builds the schedule for `spec`. Without an override, delta defaults to
// min(exp(-1000 * beta_star), 0.5) clamped away from zero; at any feasible T
// that forces L = 0 (a legal, degenerate schedule in which every product over
// j <= L is empty). Pass delta_override in (0,1) to realize L >= 1.
Schedule build_schedule(const MomentSpec& spec, std::optional<double> delta_override = std::nullopt);

} // namespace zmom

#endif
