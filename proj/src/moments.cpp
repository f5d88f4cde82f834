#include "zmom/moments.hpp"

#include <chrono>
#include <cmath>
#include <map>

#include "zmom/dirichlet.hpp"
#include "zmom/errors.hpp"
#include "zmom/oscsum.hpp"
#include "zmom/parallel.hpp"

namespace zmom {

namespace {

using cplx = std::complex<double>;

double max_step_for(double t_hi) { return 2.0 * M_PI / (20.0 * std::log(t_hi / (2.0 * M_PI))); }

QuadraturePlan finish_plan(double t_lo, double t_hi, double step, QuadraturePlan::Weight weight) {
    if (!(t_lo < t_hi)) throw spec_error("plan requires t_lo < t_hi");
    if (!(step > 0.0)) throw spec_error("plan requires step > 0");
    if (step > max_step_for(t_hi))
        throw spec_error("plan step too coarse for t_hi (oscillation unresolved)");
    QuadraturePlan p;
    p.t_lo = t_lo;
    p.t_hi = t_hi;
    p.weight = weight;
    std::size_t n = static_cast<std::size_t>(std::ceil((t_hi - t_lo) / step));
    if (n % 2) ++n;
    if (n < 2) n = 2;
    p.intervals = n;
    p.step = (t_hi - t_lo) / static_cast<double>(n);
    return p;
}

} // namespace

double QuadraturePlan::simpson_weight(std::size_t i) const {
    double w;
    if (i == 0 || i == intervals) w = 1.0;
    else if (i % 2) w = 4.0;
    else w = 2.0;
    return w * step / 3.0;
}

QuadraturePlan make_moment_plan(double T, QuadraturePlan::Weight weight,
                                std::optional<double> step_override) {
    const double step =
        step_override ? *step_override : 2.0 * M_PI / (40.0 * std::log(2.0 * T / (2.0 * M_PI)));
    return finish_plan(T, 2.0 * T, step, weight);
}

QuadraturePlan make_poly_plan(double t_lo, double t_hi, double max_freq) {
    double step = std::min(0.05, 2.0 * M_PI / (40.0 * std::max(max_freq, 1.0)));
    step = std::min(step, max_step_for(t_hi));
    return finish_plan(t_lo, t_hi, step, QuadraturePlan::Weight::Sharp);
}

double smooth_weight(double u) {
    auto g = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
    auto f = [&](double x) {
        const double gx = g(x), gy = g(1.0 - x);
        return gx + gy == 0.0 ? 0.0 : gx / (gx + gy);
    };
    return f(4.0 * (u - 1.0)) * f(4.0 * (2.0 - u));
}

ZetaGridProvider direct_zeta_provider(int threads) {
    return [threads](double t0, double step, std::size_t count) {
        return sample_zeta_grid(t0, step, count, threads);
    };
}

namespace {

// One zeta grid per distinct shift, indexed back to the per-k order.
struct ShiftGrids {
    std::vector<const ZetaGrid*> per_k;
    std::vector<ZetaGrid> storage;
};

ShiftGrids gather_shift_grids(const MomentSpec& spec, const QuadraturePlan& plan,
                              const ZetaGridProvider& provider) {
    ShiftGrids g;
    std::map<double, std::size_t> seen;
    std::vector<std::size_t> idx;
    for (double a : spec.alphas) {
        auto it = seen.find(a);
        if (it == seen.end()) {
            g.storage.push_back(provider(plan.t_lo + a, plan.step, plan.node_count()));
            seen.emplace(a, g.storage.size() - 1);
            idx.push_back(g.storage.size() - 1);
        } else {
            idx.push_back(it->second);
        }
    }
    for (std::size_t i : idx) g.per_k.push_back(&g.storage[i]);
    return g;
}

// Deterministic block reduction: per-block partial sums accumulated in block
// order.
template <typename T>
T ordered_sum(const std::vector<T>& parts) {
    T acc{};
    for (const T& p : parts) acc += p;
    return acc;
}

} // namespace

MomentReport shifted_moment(const MomentSpec& spec, const QuadraturePlan& plan,
                            const ZetaGridProvider& provider, int threads) {
    validate(spec);
    const auto t_start = std::chrono::steady_clock::now();

    const ShiftGrids grids = gather_shift_grids(spec, plan, provider);
    const std::size_t count = plan.node_count();
    const std::size_t period = OscSumGrid::kAnchorPeriod;
    const std::size_t nblocks = (count + period - 1) / period;
    const int m = spec.m();

    std::vector<double> partial(nblocks, 0.0);
    parallel_for_chunks(nblocks, threads, [&](std::size_t b) {
        const std::size_t k0 = b * period;
        const std::size_t k1 = std::min(count, k0 + period);
        double acc = 0.0;
        for (std::size_t i = k0; i < k1; ++i) {
            double f = 1.0;
            for (int k = 0; k < m; ++k) {
                const cplx z = grids.per_k[static_cast<std::size_t>(k)]->v[i];
                f *= std::pow(std::norm(z), spec.betas[static_cast<std::size_t>(k)]);
            }
            if (plan.weight == QuadraturePlan::Weight::Smooth)
                f *= smooth_weight(plan.node(i) / spec.T);
            acc += plan.simpson_weight(i) * f;
        }
        partial[b] = acc;
    });

    MomentReport rep;
    rep.spec = spec;
    rep.plan = plan;
    rep.value = ordered_sum(partial);
    rep.predicted = predicted_main_term(spec);
    rep.ratio = rep.value / rep.predicted;
    rep.delta_used = build_schedule(spec).delta;
    rep.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

double predicted_main_term(const MomentSpec& spec) {
    validate(spec);
    const double logT = std::log(spec.T);
    double beta_sq = 0.0;
    for (double b : spec.betas) beta_sq += b * b;
    double value = spec.T * std::pow(logT, beta_sq);
    const int m = spec.m();
    for (int j = 0; j < m; ++j)
        for (int k = j + 1; k < m; ++k) {
            const double d = spec.alphas[static_cast<std::size_t>(j)] -
                             spec.alphas[static_cast<std::size_t>(k)];
            const double zmod = std::abs(zeta_one(d, 1.0 / logT));
            value *= std::pow(zmod, 2.0 * spec.betas[static_cast<std::size_t>(j)] *
                                        spec.betas[static_cast<std::size_t>(k)]);
        }
    return value;
}

bool good_set_member(double t, const MomentSpec& spec, const Schedule& sched,
                     const PrimeTable& table) {
    for (int j = 1; j <= sched.L; ++j) {
        const DirichletPoly P = p_poly(j, sched.Tj[static_cast<std::size_t>(sched.L)], sched, table);
        for (double a : spec.alphas) {
            const cplx v = eval(P, ComplexPoint{0.5, t + a});
            if (std::abs(v) > sched.Kj(j)) return false;
        }
    }
    return true;
}

double HolderExponents::reciprocal_sum() const {
    double s = inv_p + inv_q;
    for (double r : inv_r) s += r;
    return s;
}

HolderExponents holder_exponents(const std::vector<double>& betas) {
    const double bstar = beta_star(betas);
    const double m = static_cast<double>(betas.size());
    HolderExponents e;
    e.inv_p = 1.0 / (4.0 * bstar);
    double sum = e.inv_p;
    for (double b : betas) {
        const double inv_rk = 1.0 / (2.0 * m) - b / (4.0 * m * bstar);
        e.inv_r.push_back(inv_rk);
        sum += inv_rk;
    }
    e.inv_q = 1.0 - sum;
    for (double r : e.inv_r)
        if (!(r > 0.0 && r < 1.0)) throw compute_error("holder exponent out of range");
    if (!(e.inv_p > 0.0 && e.inv_p < 1.0) || !(e.inv_q > 0.0 && e.inv_q < 1.0))
        throw compute_error("holder exponent out of range");
    return e;
}

namespace {

struct HolderPartial {
    double M = 0.0;
    double J = 0.0;
    cplx I0{0.0, 0.0};
    std::vector<double> Ik;
    double good_weight = 0.0;
    double total_weight = 0.0;
};

} // namespace

HolderIntegrals holder_integrals(const MomentSpec& spec, const Schedule& sched,
                                 const QuadraturePlan& plan, const PrimeTable& table,
                                 const ZetaGridProvider& provider, int threads) {
    validate(spec);
    const int m = spec.m();
    const int L = sched.L;
    const double X = sched.Tj[static_cast<std::size_t>(L)]; // T_L

    const ShiftGrids grids = gather_shift_grids(spec, plan, provider);

    // Block polynomials P_{j,T_L} as oscillating sums at sigma = 1/2, one per
    // (j, shift k).
    std::vector<std::vector<OscSumGrid>> pgrids(static_cast<std::size_t>(L));
    for (int j = 1; j <= L; ++j) {
        const DirichletPoly P = p_poly(j, X, sched, table);
        std::vector<cplx> amps;
        std::vector<double> freqs;
        for (const auto& [n, c] : P.terms) {
            if (n == 1 || c == cplx{0.0, 0.0}) continue;
            amps.push_back(c / std::sqrt(static_cast<double>(n)));
            freqs.push_back(std::log(static_cast<double>(n)));
        }
        for (int k = 0; k < m; ++k)
            pgrids[static_cast<std::size_t>(j - 1)].emplace_back(
                amps, freqs, plan.t_lo + spec.alphas[static_cast<std::size_t>(k)], plan.step);
    }

    const std::size_t count = plan.node_count();
    const std::size_t period = OscSumGrid::kAnchorPeriod;
    const std::size_t nblocks = (count + period - 1) / period;

    std::vector<HolderPartial> partial(nblocks);
    parallel_for_chunks(nblocks, threads, [&](std::size_t b) {
        const std::size_t k0 = b * period;
        const std::size_t nb = std::min(period, count - k0);
        std::vector<std::vector<cplx>> pvals(static_cast<std::size_t>(L * m),
                                             std::vector<cplx>(nb));
        for (int j = 0; j < L; ++j)
            for (int k = 0; k < m; ++k)
                pgrids[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)].eval_block(
                    k0, nb, pvals[static_cast<std::size_t>(j * m + k)].data());

        HolderPartial acc;
        acc.Ik.assign(static_cast<std::size_t>(m), 0.0);
        for (std::size_t i = 0; i < nb; ++i) {
            const std::size_t node = k0 + i;
            const double w = plan.simpson_weight(node);
            const double wsm = w * smooth_weight(plan.node(node) / spec.T);
            acc.total_weight += w;

            double mterm = 1.0;
            for (int k = 0; k < m; ++k)
                mterm *= std::pow(std::norm(grids.per_k[static_cast<std::size_t>(k)]->v[node]),
                                  spec.betas[static_cast<std::size_t>(k)]);
            acc.M += w * mterm;

            bool good = true;
            for (int j = 0; j < L && good; ++j)
                for (int k = 0; k < m; ++k) {
                    if (std::abs(pvals[static_cast<std::size_t>(j * m + k)][i]) >
                        sched.Kj(j + 1)) {
                        good = false;
                        break;
                    }
                }
            if (!good) continue;
            acc.good_weight += w;

            // Sum of P values over blocks, per shift.
            std::vector<cplx> Pk(static_cast<std::size_t>(m), cplx{0.0, 0.0});
            for (int k = 0; k < m; ++k)
                for (int j = 0; j < L; ++j)
                    Pk[static_cast<std::size_t>(k)] += pvals[static_cast<std::size_t>(j * m + k)][i];

            double sum_2bre = 0.0;
            for (int k = 0; k < m; ++k)
                sum_2bre +=
                    2.0 * spec.betas[static_cast<std::size_t>(k)] * Pk[static_cast<std::size_t>(k)].real();
            acc.J += wsm * std::exp(sum_2bre);

            cplx i0term{1.0, 0.0};
            for (int k = 0; k < m; ++k) {
                const cplx z = grids.per_k[static_cast<std::size_t>(k)]->v[node];
                const double bk = spec.betas[static_cast<std::size_t>(k)];
                const cplx P = Pk[static_cast<std::size_t>(k)];
                i0term *= z * std::exp((bk - 1.0) * P + bk * std::conj(P));
            }
            acc.I0 += wsm * i0term;

            for (int k = 0; k < m; ++k) {
                const double bk = spec.betas[static_cast<std::size_t>(k)];
                double ex = 2.0 * (bk - static_cast<double>(m)) * Pk[static_cast<std::size_t>(k)].real();
                for (int l = 0; l < m; ++l) {
                    if (l == k) continue;
                    ex += 2.0 * spec.betas[static_cast<std::size_t>(l)] *
                          Pk[static_cast<std::size_t>(l)].real();
                }
                acc.Ik[static_cast<std::size_t>(k)] +=
                    wsm *
                    std::pow(std::norm(grids.per_k[static_cast<std::size_t>(k)]->v[node]),
                             static_cast<double>(m)) *
                    std::exp(ex);
            }
        }
        partial[b] = std::move(acc);
    });

    HolderIntegrals out;
    out.Ik.assign(static_cast<std::size_t>(m), 0.0);
    double goodw = 0.0, totw = 0.0;
    for (const auto& p : partial) {
        out.M += p.M;
        out.J += p.J;
        out.I0 += p.I0;
        for (int k = 0; k < m; ++k)
            out.Ik[static_cast<std::size_t>(k)] += p.Ik[static_cast<std::size_t>(k)];
        goodw += p.good_weight;
        totw += p.total_weight;
    }
    out.good_fraction = totw > 0.0 ? goodw / totw : 0.0;
    out.exponents = holder_exponents(spec.betas);
    out.lhs = std::abs(out.I0);
    double rhs = std::pow(out.M, out.exponents.inv_p) * std::pow(out.J, out.exponents.inv_q);
    for (int k = 0; k < m; ++k)
        rhs *= std::pow(out.Ik[static_cast<std::size_t>(k)],
                        out.exponents.inv_r[static_cast<std::size_t>(k)]);
    out.rhs = rhs;
    out.relative_slack = rhs > 0.0 ? (rhs - out.lhs) / rhs : 0.0;
    return out;
}

double integral_J(const MomentSpec& spec, const Schedule& sched, const QuadraturePlan& plan,
                  const PrimeTable& table, const ZetaGridProvider& provider, int threads) {
    return holder_integrals(spec, sched, plan, table, provider, threads).J;
}

std::complex<double> integral_I0(const MomentSpec& spec, const Schedule& sched,
                                 const QuadraturePlan& plan, const PrimeTable& table,
                                 const ZetaGridProvider& provider, int threads) {
    return holder_integrals(spec, sched, plan, table, provider, threads).I0;
}

double integral_Ik(int k, const MomentSpec& spec, const Schedule& sched,
                   const QuadraturePlan& plan, const PrimeTable& table,
                   const ZetaGridProvider& provider, int threads) {
    if (k < 1 || k > spec.m()) throw spec_error("integral_Ik: k outside [1, m]");
    return holder_integrals(spec, sched, plan, table, provider, threads)
        .Ik[static_cast<std::size_t>(k - 1)];
}

double euler_local_product(double X, const std::vector<double>& alphas,
                           const std::vector<double>& betas, const PrimeTable& table) {
    if (!(X >= 2.0)) return 1.0; // empty product
    if (!table.covers(X)) throw spec_error("prime table smaller than X");
    if (alphas.size() != betas.size() || betas.empty())
        throw spec_error("euler_local_product: alphas/betas mismatch");
    const int m = static_cast<int>(betas.size());

    cplx prod{1.0, 0.0};
    for (std::uint64_t p : table.primes) {
        const double pd = static_cast<double>(p);
        if (pd > X) break;
        const double lp = std::log(pd);
        cplx local{1.0, 0.0};
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                const double d = alphas[static_cast<std::size_t>(j)] -
                                 alphas[static_cast<std::size_t>(k)];
                const double ph = -d * lp;
                local += betas[static_cast<std::size_t>(j)] * betas[static_cast<std::size_t>(k)] /
                         pd * cplx{std::cos(ph), std::sin(ph)};
            }
        prod *= local;
    }
    if (std::fabs(prod.imag()) > 1e-10 * std::max(1.0, std::fabs(prod.real())))
        throw compute_error("euler_local_product: imaginary residue above 1e-10");
    return prod.real();
}

} // namespace zmom
