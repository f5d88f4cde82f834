#include "zmom/afe.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "zmom/errors.hpp"
#include "zmom/zeta.hpp"

namespace zmom {

namespace {

using cplx = std::complex<double>;

constexpr std::uint64_t kSeriesTermBudget = 10000000; // 10^7

// Composite Simpson of f over [a, b] with an even number of intervals of
// width <= step.
template <typename F>
cplx simpson(F&& f, double a, double b, double step) {
    std::size_t n = static_cast<std::size_t>(std::ceil((b - a) / step));
    if (n % 2) ++n;
    if (n < 2) n = 2;
    const double h = (b - a) / static_cast<double>(n);
    cplx acc = f(a) + f(b);
    for (std::size_t i = 1; i < n; ++i) {
        const double w = (i % 2) ? 4.0 : 2.0;
        acc += w * f(a + h * static_cast<double>(i));
    }
    return acc * (h / 3.0);
}

// Integrand of (1/2pi) int e^{(c+iy)^2}/(c+iy) e^{(c+iy) lr} dy with
// lr = log(t^{3m}/x).
cplx kernel_integrand(double c, double y, double lr) {
    const cplx s{c, y};
    const cplx expo = s * s + s * lr;
    return std::exp(expo) / s;
}

double kernel_quad(double c, double lr, const KernelParams& params) {
    const double Y = params.quad_halfwidth;
    const cplx I =
        simpson([&](double y) { return kernel_integrand(c, y, lr); }, -Y, Y, params.quad_step) /
        (2.0 * M_PI);
    if (std::fabs(I.imag()) > 1e-10)
        throw compute_error("kernel_v: imaginary residue above 1e-10");
    return I.real();
}

// Upper bound for V at log-ratio lr < 0 (x beyond t^{3m}), from the shifted
// line c = -lr/2: |V| <= e^{-lr^2/4} / (2 sqrt(pi) |lr|/2).
double kernel_tail_bound(double lr) {
    return std::exp(-lr * lr / 4.0) / (std::sqrt(M_PI) * std::fabs(lr));
}

double log_ratio(double x, double t, int m) { return 3.0 * m * std::log(t) - std::log(x); }

// Interpolation table for V as a function of lr = log(t^{3m}/x); V is smooth
// and one-dimensional in lr, so the series route can afford one quadrature
// per table knot instead of one per term.
class KernelTable {
public:
    KernelTable(int m, const KernelParams& params) : lo_(-14.0), step_(0.002) {
        (void)m;
        const std::size_t n = static_cast<std::size_t>(std::ceil(28.0 / step_)) + 1;
        v_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double lr = lo_ + step_ * static_cast<double>(i);
            v_[i] = lr >= 0.0 ? 1.0 + kernel_quad(-1.0, lr, params) : kernel_quad(1.0, lr, params);
        }
    }

    double at(double lr) const {
        if (lr <= lo_) return 0.0;
        const double hi = lo_ + step_ * static_cast<double>(v_.size() - 1);
        if (lr >= hi) return 1.0;
        // 4-point Lagrange interpolation on the uniform grid
        double u = (lr - lo_) / step_;
        std::size_t i = static_cast<std::size_t>(u);
        if (i == 0) i = 1;
        if (i > v_.size() - 3) i = v_.size() - 3;
        const double x = u - static_cast<double>(i);
        const double ym1 = v_[i - 1], y0 = v_[i], y1 = v_[i + 1], y2 = v_[i + 2];
        return y0 + x * ((y1 - ym1) / 2.0 +
                         x * ((ym1 - 2.0 * y0 + y1) / 2.0 +
                              x * ((y2 - 3.0 * y1 + 3.0 * y0 - ym1) / 6.0)));
    }

private:
    double lo_, step_;
    std::vector<double> v_;
};

// Table construction costs a few seconds; keyed by quadrature parameters.
const KernelTable& kernel_table_for(const KernelParams& params) {
    static std::mutex mu;
    static std::map<std::pair<double, double>, std::unique_ptr<KernelTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(params.quad_halfwidth, params.quad_step);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<KernelTable>(1, params)).first;
    return *it->second;
}

// tau_alpha over 1..limit by repeated divisor-style convolution with the
// twist sequences b^{-i alpha_k}.
std::vector<cplx> tau_sieve(std::uint64_t limit, const std::vector<double>& alphas) {
    const std::size_t n = static_cast<std::size_t>(limit);
    std::vector<cplx> acc(n + 1);
    std::vector<double> ln(n + 1);
    for (std::size_t b = 1; b <= n; ++b) ln[b] = std::log(static_cast<double>(b));

    for (std::size_t b = 1; b <= n; ++b) {
        const double ph = -alphas[0] * ln[b];
        acc[b] = {std::cos(ph), std::sin(ph)};
    }
    std::vector<cplx> next;
    for (std::size_t k = 1; k < alphas.size(); ++k) {
        next.assign(n + 1, cplx{0.0, 0.0});
        for (std::size_t a = 1; a <= n; ++a) {
            if (acc[a] == cplx{0.0, 0.0}) continue;
            for (std::size_t b = 1; a * b <= n; ++b) {
                const double ph = -alphas[k] * ln[b];
                next[a * b] += acc[a] * cplx{std::cos(ph), std::sin(ph)};
            }
        }
        acc.swap(next);
    }
    return acc;
}

} // namespace

void validate(const KernelParams& params) {
    if (params.m < 1) throw spec_error("kernel params: m >= 1 required");
    if (!(params.quad_halfwidth >= 8.0)) throw spec_error("kernel params: halfwidth >= 8 required");
    if (!(params.quad_step > 0.0 && params.quad_step <= 0.05))
        throw spec_error("kernel params: step must lie in (0, 0.05]");
}

double kernel_v(double x, double t, int m, const KernelParams& params) {
    validate(params);
    if (!(x > 0.0) || !(t > 0.0) || !std::isfinite(x) || !std::isfinite(t))
        throw spec_error("kernel_v requires finite x > 0, t > 0");
    const double lr = log_ratio(x, t, m);
    if (lr >= 14.0) return 1.0;  // 1 - V < 4e-23
    if (lr <= -14.0) return 0.0; // V < 4e-23
    return lr >= 0.0 ? 1.0 + kernel_quad(-1.0, lr, params) : kernel_quad(1.0, lr, params);
}

double kernel_v_on_line(double x, double t, int m, const KernelParams& params, double line) {
    validate(params);
    if (!(line > 0.0)) throw spec_error("kernel_v_on_line requires Re s > 0");
    return kernel_quad(line, log_ratio(x, t, m), params);
}

std::complex<double> tau_alpha(std::uint64_t n, const std::vector<double>& alphas) {
    if (n == 0) throw spec_error("tau_alpha requires n >= 1");
    if (alphas.empty()) throw spec_error("tau_alpha requires m >= 1");
    // tau^{(k)}(n) = sum_{d | n} tau^{(k-1)}(d) (n/d)^{-i alpha_k}
    std::vector<std::uint64_t> divisors{1};
    {
        std::uint64_t rem = n;
        for (std::uint64_t p = 2; p * p <= rem; ++p) {
            if (rem % p) continue;
            std::size_t sz = divisors.size();
            std::uint64_t pe = 1;
            while (rem % p == 0) {
                rem /= p;
                pe *= p;
                for (std::size_t i = 0; i < sz; ++i) divisors.push_back(divisors[i] * pe);
            }
        }
        if (rem > 1) {
            std::size_t sz = divisors.size();
            for (std::size_t i = 0; i < sz; ++i) divisors.push_back(divisors[i] * rem);
        }
        std::sort(divisors.begin(), divisors.end());
    }
    std::map<std::uint64_t, cplx> cur;
    for (std::uint64_t d : divisors) {
        const double ph = -alphas[0] * std::log(static_cast<double>(d));
        cur[d] = {std::cos(ph), std::sin(ph)};
    }
    for (std::size_t k = 1; k < alphas.size(); ++k) {
        std::map<std::uint64_t, cplx> next;
        for (std::uint64_t d : divisors) {
            cplx s{0.0, 0.0};
            for (std::uint64_t e : divisors) {
                if (e > d || d % e) continue;
                const double ph = -alphas[k] * std::log(static_cast<double>(d / e));
                s += cur[e] * cplx{std::cos(ph), std::sin(ph)};
            }
            next[d] = s;
        }
        cur.swap(next);
    }
    return cur[n];
}

bool afe_series_feasible(double t, int m, std::uint64_t cutoff) {
    if (cutoff > kSeriesTermBudget) return false;
    const double lr = log_ratio(static_cast<double>(cutoff), t, m);
    if (lr >= 0.0) return false;
    return kernel_tail_bound(lr) < 1e-10;
}

std::complex<double> afe_rhs_series_unchecked(double t, const std::vector<double>& alphas,
                                              std::uint64_t cutoff, const KernelParams& params) {
    validate(params);
    const int m = static_cast<int>(alphas.size());
    if (cutoff > kSeriesTermBudget)
        throw compute_error("afe series: cutoff exceeds the 10^7-term budget");

    const KernelTable& table = kernel_table_for(params);
    std::vector<cplx> tau;
    const bool trivial_tau = m == 1 && alphas[0] == 0.0;
    if (!trivial_tau) tau = tau_sieve(cutoff, alphas);

    cplx acc{0.0, 0.0};
    const double l3m = 3.0 * m * std::log(t);
    for (std::uint64_t n = 1; n <= cutoff; ++n) {
        const double ln = std::log(static_cast<double>(n));
        const double V = table.at(l3m - ln);
        if (V == 0.0) continue;
        const double ph = -t * ln;
        const cplx term = std::exp(-0.5 * ln) * cplx{std::cos(ph), std::sin(ph)} * V;
        acc += trivial_tau ? term : tau[static_cast<std::size_t>(n)] * term;
    }
    return acc;
}

std::complex<double> afe_rhs_series(double t, const std::vector<double>& alphas,
                                    std::uint64_t cutoff, const KernelParams& params) {
    if (!afe_series_feasible(t, static_cast<int>(alphas.size()), cutoff))
        throw compute_error("afe series: cutoff insufficient, V(cutoff, t) not below 1e-10");
    return afe_rhs_series_unchecked(t, alphas, cutoff, params);
}

std::complex<double> afe_rhs_contour(double t, const std::vector<double>& alphas,
                                     const KernelParams& params, double line) {
    validate(params);
    const int m = static_cast<int>(alphas.size());
    double c = line;
    if (c == 0.0) {
        // Lower the line once t^{3mc} eats into double precision; absolute
        // convergence of the underlying sum needs c > 1/2.
        c = std::min(1.0, 11.0 / (3.0 * m * std::log10(t)));
        c = std::max(c, 0.62);
    }
    if (!(c > 0.5 && c <= 1.0))
        throw spec_error("afe contour line must lie in (1/2, 1]");

    const double l3m = 3.0 * m * std::log(t);
    const double Y = params.quad_halfwidth;
    auto f = [&](double y) {
        const cplx s{c, y};
        cplx val = std::exp(s * s + s * l3m) / s;
        for (double a : alphas) val *= zeta(cplx{0.5 + c, t + y + a}, 1e-12);
        return val;
    };
    return simpson(f, -Y, Y, params.quad_step) / (2.0 * M_PI);
}

double afe_residual(double t, const std::vector<double>& alphas, std::uint64_t cutoff,
                    const KernelParams& params, AfeMethod method) {
    if (!(t >= 100.0)) throw spec_error("afe_residual requires t >= 100");
    if (alphas.empty()) throw spec_error("afe_residual requires m >= 1");
    const int m = static_cast<int>(alphas.size());

    cplx lhs{1.0, 0.0};
    for (double a : alphas) lhs *= zeta(cplx{0.5, t + a}, 1e-12);

    cplx rhs;
    switch (method) {
        case AfeMethod::Series:
            rhs = afe_rhs_series(t, alphas, cutoff, params);
            break;
        case AfeMethod::Contour:
            rhs = afe_rhs_contour(t, alphas, params);
            break;
        case AfeMethod::Auto:
            rhs = afe_series_feasible(t, m, cutoff) ? afe_rhs_series(t, alphas, cutoff, params)
                                                    : afe_rhs_contour(t, alphas, params);
            break;
    }
    return std::abs(lhs - rhs);
}

} // namespace zmom
