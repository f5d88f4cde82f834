#include "zmom/dirichlet.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "zmom/errors.hpp"

namespace zmom {

namespace {

using cplx = std::complex<double>;

cplx n_pow(double n, cplx e) {
    double ln = std::log(n);
    double mag = std::exp(e.real() * ln);
    double ph = e.imag() * ln;
    return {mag * std::cos(ph), mag * std::sin(ph)};
}

void check_block(int j, const Schedule& sched) {
    if (j < 1 || j > sched.L) throw spec_error("block index j outside [1, L]");
}

// Primes of block j, ascending.
std::vector<std::uint64_t> block_primes(int j, const Schedule& sched, const PrimeTable& table) {
    check_block(j, sched);
    if (!table.covers(sched.block_hi(j))) throw spec_error("prime table smaller than T_j");
    std::vector<std::uint64_t> out;
    const double lo = j == 1 ? 1.0 : sched.block_lo(j); // exclusive
    const double hi = sched.block_hi(j);
    for (std::uint64_t p : table.primes) {
        double pd = static_cast<double>(p);
        if (pd <= lo) continue;
        if (pd > hi) break;
        out.push_back(p);
    }
    return out;
}

} // namespace

DirichletPoly DirichletPoly::from_map(const CoeffMap& m) {
    DirichletPoly poly;
    poly.terms.reserve(m.size() + 1);
    if (m.find(1) == m.end()) poly.terms.emplace_back(1, cplx{0.0, 0.0});
    for (const auto& [n, c] : m) poly.terms.emplace_back(n, c);
    poly.length = poly.terms.back().first;
    return poly;
}

CoeffMap DirichletPoly::as_map() const {
    CoeffMap m;
    for (const auto& [n, c] : terms) m[n] = c;
    return m;
}

std::complex<double> eval(const DirichletPoly& poly, ComplexPoint s) {
    const cplx ms = -s.as_complex();
    cplx acc{0.0, 0.0};
    for (const auto& [n, c] : poly.terms) {
        if (n == 1) {
            acc += c;
            continue;
        }
        acc += c * n_pow(static_cast<double>(n), ms);
    }
    return acc;
}

double a_smoothing(double p, double X) {
    if (!(p >= 2.0) || !(X >= 2.0)) throw spec_error("a_smoothing requires p, X >= 2");
    if (p > X) throw spec_error("a_smoothing requires p <= X");
    const double logX = std::log(X);
    return std::log(X / p) * std::pow(p, -1.0 / logX) / logX;
}

DirichletPoly p_poly(int j, double X, const Schedule& sched, const PrimeTable& table) {
    CoeffMap m;
    const auto ps = block_primes(j, sched, table);
    for (std::uint64_t p : ps) m[p] = a_smoothing(static_cast<double>(p), X);
    if (j == 1) {
        const double logT = std::log(sched.T);
        for (std::uint64_t p : table.primes) {
            if (static_cast<double>(p) > logT) break;
            m[p * p] += 0.5; // keys are prime squares, disjoint from the primes above
        }
    }
    return DirichletPoly::from_map(m);
}

std::complex<double> n_poly_eval(int j, double X, double beta, ComplexPoint s,
                                 const Schedule& sched, const PrimeTable& table) {
    const cplx z = eval(p_poly(j, X, sched, table), s);
    const int D = sched.trunc_degree(j);
    cplx term{1.0, 0.0}, acc{1.0, 0.0};
    const cplx x = beta * z;
    for (int m = 1; m <= D; ++m) {
        term *= x / static_cast<double>(m);
        acc += term;
    }
    return acc;
}

CoeffMap dirichlet_convolve(const CoeffMap& a, const CoeffMap& b, std::uint64_t cap) {
    CoeffMap out;
    for (const auto& [n1, c1] : a) {
        const std::uint64_t room = cap / n1;
        for (const auto& [n2, c2] : b) {
            if (n2 > room) break;
            out[n1 * n2] += c1 * c2;
        }
    }
    return out;
}

DirichletPoly n_poly(int j, double X, double beta, const Schedule& sched, const PrimeTable& table,
                     std::uint64_t support_cap) {
    check_block(j, sched);
    const int D = sched.trunc_degree(j);
    if (static_cast<double>(D) < std::log2(static_cast<double>(support_cap)))
        throw compute_error("n_poly: support cap too large for exact truncated expansion");

    CoeffMap P = p_poly(j, X, sched, table).as_map();
    P.erase(1);

    CoeffMap acc{{1, cplx{1.0, 0.0}}};
    if (beta != 0.0) {
        CoeffMap cur{{1, cplx{1.0, 0.0}}};
        for (int m = 1; m <= D; ++m) {
            cur = dirichlet_convolve(cur, P, support_cap);
            if (cur.empty()) break;
            const double f = beta / static_cast<double>(m);
            for (auto& [n, c] : cur) c *= f;
            for (const auto& [n, c] : cur) acc[n] += c;
        }
    }
    return DirichletPoly::from_map(acc);
}

double exp_tail_upper_log(double ax, int D) {
    if (ax <= 0.0) return -HUGE_VAL;
    const double q = ax / static_cast<double>(D + 2);
    double lg = static_cast<double>(D + 1) * std::log(ax) - std::lgamma(static_cast<double>(D + 2));
    if (q < 1.0) lg -= std::log1p(-q);
    return lg;
}

double exp_tail_upper(double ax, int D) { return std::exp(exp_tail_upper_log(ax, D)); }

TaylorGap taylor_gap(int j, double X, double beta, ComplexPoint s, const Schedule& sched,
                     const PrimeTable& table) {
    const cplx z = eval(p_poly(j, X, sched, table), s);
    const int D = sched.trunc_degree(j);

    TaylorGap out;
    out.p_abs = std::abs(z);
    out.hypothesis_ok = out.p_abs <= sched.Kj(j);

    const double ax = std::abs(beta) * out.p_abs;
    if (ax == 0.0) {
        out.gap = 0.0;
        out.log_gap = -HUGE_VAL;
        return out;
    }
    // N eval minus exp(beta z) is exactly the exponential tail beyond the
    // truncation degree; a direct float subtraction of two O(1) values could
    // never resolve magnitudes like e^{-500}, so the tail is reported through
    // its log-space estimate. The series ratio never approaches 1 here since
    // D >= 100 while |beta z| stays O(10).
    out.log_gap = exp_tail_upper_log(ax, D);
    out.gap = std::exp(out.log_gap);
    return out;
}

double g_coeff(double p, int r, double beta, double X) {
    if (r < 0) throw spec_error("g_coeff requires r >= 0");
    if (r == 0) return 1.0;
    const double a = a_smoothing(p, X);
    return std::pow(beta, r) * std::pow(a, r) / std::tgamma(static_cast<double>(r) + 1.0);
}

double h_coeff(double p, int r, double beta, double X, double T, HVariant variant) {
    double h = g_coeff(p, r, beta, X);
    if (p > std::log(T)) return h;
    const double a = a_smoothing(p, X);
    for (int t = 1; 2 * t <= r; ++t) {
        const int apow = variant == HVariant::Derived ? r - 2 * t : r - t;
        h += std::pow(beta, r - t) * std::pow(a, apow) /
             (std::pow(2.0, t) * std::tgamma(t + 1.0) * std::tgamma(r - 2 * t + 1.0));
    }
    return h;
}

bool c_indicator(int j, std::uint64_t n, const Schedule& sched) {
    check_block(j, sched);
    const int D = sched.trunc_degree(j);
    const double logT = std::log(sched.T);
    // factor n, counting the minimal number of units
    std::uint64_t units = 0;
    std::uint64_t rem = n;
    for (std::uint64_t p = 2; p * p <= rem; ++p) {
        if (rem % p) continue;
        std::uint64_t e = 0;
        while (rem % p == 0) {
            rem /= p;
            ++e;
        }
        if (j == 1 && static_cast<double>(p) <= logT)
            units += (e + 1) / 2; // pair factors into squares where possible
        else
            units += e;
    }
    if (rem > 1) units += 1;
    return units <= static_cast<std::uint64_t>(D);
}

namespace {

// Enumerates n <= cap supported on `ps` and accumulates
// out[n] = prod_p local(p, e_p) over the factorization of n.
void mult_dfs(const std::vector<std::uint64_t>& ps, std::size_t i, std::uint64_t n, double coeff,
              std::uint64_t cap, const std::function<double(double, int)>& local, RealCoeffMap& out) {
    out[n] += coeff;
    for (std::size_t k = i; k < ps.size(); ++k) {
        const std::uint64_t p = ps[k];
        if (p > cap / n) break;
        std::uint64_t np = n;
        for (int e = 1;; ++e) {
            np *= p;
            const double c = coeff * local(static_cast<double>(p), e);
            mult_dfs(ps, k + 1, np, c, cap, local, out);
            if (p > cap / np) break;
        }
    }
}

RealCoeffMap multiplicative_support(const std::vector<std::uint64_t>& ps, std::uint64_t cap,
                                    const std::function<double(double, int)>& local) {
    RealCoeffMap out;
    mult_dfs(ps, 0, 1, 1.0, cap, local, out);
    return out;
}

CoeffMap twist(const RealCoeffMap& base, double alpha) {
    CoeffMap out;
    for (const auto& [n, c] : base) {
        if (c == 0.0) continue;
        const double ph = -alpha * std::log(static_cast<double>(n));
        out[n] = c * cplx{std::cos(ph), std::sin(ph)};
    }
    return out;
}

RealCoeffMap convolve_real(const RealCoeffMap& a, const RealCoeffMap& b, std::uint64_t cap) {
    RealCoeffMap out;
    for (const auto& [n1, c1] : a) {
        const std::uint64_t room = cap / n1;
        for (const auto& [n2, c2] : b) {
            if (n2 > room) break;
            out[n1 * n2] += c1 * c2;
        }
    }
    return out;
}

} // namespace

CoeffFamily b_family(int j, double X, const std::vector<double>& alphas,
                     const std::vector<double>& betas, const Schedule& sched,
                     const PrimeTable& table, std::uint64_t cap) {
    check_block(j, sched);
    if (alphas.size() != betas.size() || betas.empty())
        throw spec_error("b_family: alphas/betas mismatch");

    const auto ps = block_primes(j, sched, table);
    const double T = sched.T;

    // Per-factor local coefficients. For j=1 the exact coefficient of the
    // truncated exponential agrees with the full-exponential (h-formula)
    // value for all n <= cap because log2(cap) stays below the truncation
    // degree; the indicator c_j is still applied for fidelity.
    auto local_exact = [&](double beta) {
        return [&, beta](double p, int r) {
            return j == 1 ? h_coeff(p, r, beta, X, T) : g_coeff(p, r, beta, X);
        };
    };

    CoeffFamily fam;
    fam.j = j;
    fam.X = X;
    fam.alphas = alphas;
    fam.betas = betas;
    fam.cap = cap;

    CoeffMap value{{1, cplx{1.0, 0.0}}};
    CoeffMap primed{{1, cplx{1.0, 0.0}}};
    RealCoeffMap major{{1, 1.0}};
    for (std::size_t k = 0; k < betas.size(); ++k) {
        RealCoeffMap base = multiplicative_support(ps, cap, local_exact(betas[k]));

        RealCoeffMap truncated = base;
        for (auto it = truncated.begin(); it != truncated.end();)
            it = c_indicator(j, it->first, sched) ? std::next(it) : truncated.erase(it);

        value = dirichlet_convolve(value, twist(truncated, alphas[k]), cap);
        primed = dirichlet_convolve(primed, twist(base, alphas[k]), cap);

        RealCoeffMap base_abs =
            multiplicative_support(ps, cap, local_exact(std::fabs(betas[k])));
        major = convolve_real(major, base_abs, cap);
    }
    fam.value = std::move(value);
    fam.primed = std::move(primed);
    fam.majorant = std::move(major);
    return fam;
}

QrFamilies qr_coeffs(int j, double X, const std::vector<double>& alphas,
                     const std::vector<double>& betas, const Schedule& sched,
                     const PrimeTable& table, std::uint64_t cap) {
    std::vector<double> half_bm1(betas.size()), half_b(betas.size());
    for (std::size_t k = 0; k < betas.size(); ++k) {
        half_bm1[k] = 0.5 * (betas[k] - 1.0);
        half_b[k] = 0.5 * betas[k];
    }
    const CoeffFamily bq = b_family(j, X, alphas, half_bm1, sched, table, cap);
    const CoeffFamily br = b_family(j, X, alphas, half_b, sched, table, cap);

    auto self_convolve = [cap](const CoeffFamily& f) {
        CoeffFamily out = f;
        out.value = dirichlet_convolve(f.value, f.value, cap);
        out.primed = dirichlet_convolve(f.primed, f.primed, cap);
        out.majorant = convolve_real(f.majorant, f.majorant, cap);
        return out;
    };
    return {self_convolve(bq), self_convolve(br)};
}

DirichletPoly n_full(double X, double beta, const Schedule& sched, const PrimeTable& table,
                     std::uint64_t support_cap, bool enforce_length_bound) {
    if (enforce_length_bound && sched.L >= 1) {
        double log_len = 0.0;
        for (int j = 1; j <= sched.L; ++j) {
            const double factor = (j == 1 ? 200.0 : 100.0);
            log_len += factor * sched.beta_star * sched.beta_star * sched.Kj(j) *
                       std::log(sched.block_hi(j));
        }
        if (log_len > 0.1 * std::log(sched.T))
            throw compute_error("n_full: schedule too aggressive, length bound T^{1/10} exceeded");
    }
    CoeffMap acc{{1, cplx{1.0, 0.0}}};
    for (int j = 1; j <= sched.L; ++j) {
        const CoeffMap block = n_poly(j, X, beta, sched, table, support_cap).as_map();
        acc = dirichlet_convolve(acc, block, support_cap);
    }
    return DirichletPoly::from_map(acc);
}

std::string dump_csv(const DirichletPoly& poly) {
    std::string out;
    char buf[128];
    for (const auto& [n, c] : poly.terms) {
        std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g\n", static_cast<unsigned long long>(n),
                      c.real(), c.imag());
        out += buf;
    }
    return out;
}

} // namespace zmom
