#include "zmom/params.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "zmom/errors.hpp"

namespace zmom {

void validate(const MomentSpec& spec) {
    if (!std::isfinite(spec.T)) throw spec_error("T must be finite");
    if (spec.T < 100.0) throw spec_error("T must be >= 100");
    if (spec.betas.empty()) throw spec_error("need at least one (alpha, beta) pair");
    if (spec.alphas.size() != spec.betas.size())
        throw spec_error("alphas and betas must have equal length");
    for (double b : spec.betas) {
        if (!std::isfinite(b) || b < 0.0) throw spec_error("beta < 0");
    }
    for (double a : spec.alphas) {
        if (!std::isfinite(a)) throw spec_error("alpha must be finite");
        if (std::fabs(a) > spec.T / 2.0) throw spec_error("|alpha| > T/2");
    }
}

double beta_star(const std::vector<double>& betas) {
    if (betas.empty()) throw spec_error("beta_star of empty exponent list");
    double s = 0.0;
    for (double b : betas) {
        if (!std::isfinite(b) || b < 0.0) throw spec_error("beta < 0");
        s += std::max(1.0, b);
    }
    return s;
}

int Schedule::trunc_degree(int j) const {
    if (j < 1 || j > L) throw spec_error("block index out of range");
    return static_cast<int>(std::floor(100.0 * beta_star * beta_star * Kj(j)));
}

Schedule build_schedule(const MomentSpec& spec, std::optional<double> delta_override) {
    validate(spec);
    const double bstar = beta_star(spec.betas);

    double delta;
    if (delta_override) {
        delta = *delta_override;
        if (!(delta > 0.0 && delta < 1.0)) throw spec_error("delta_override must lie in (0,1)");
    } else {
        // exp(-1000*beta_star) underflows to 0 for beta_star >= 1; clamp to the
        // smallest normal double so delta stays inside (0,1). L = 0 either way.
        delta = std::min(std::exp(-1000.0 * bstar), 0.5);
        if (delta <= 0.0) delta = DBL_MIN;
    }

    const double loglogT = std::log(std::log(spec.T));
    const double denom = loglogT * loglogT;

    Schedule s;
    s.T = spec.T;
    s.delta = delta;
    s.beta_star = bstar;
    s.c.push_back(0.0);
    s.Tj.push_back(1.0);
    for (int j = 1;; ++j) {
        double cj = std::exp(static_cast<double>(j)) / denom;
        if (cj > delta) break; // T_j = T^{c_j} > T^delta: L is maximal
        s.c.push_back(cj);
        s.Tj.push_back(std::exp(cj * std::log(spec.T)));
        s.K.push_back(std::pow(cj, -0.75));
    }
    s.L = static_cast<int>(s.K.size());
    return s;
}

} // namespace zmom
