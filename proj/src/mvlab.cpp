#include "zmom/mvlab.hpp"

#include <cmath>
#include <set>

#include "zmom/errors.hpp"
#include "zmom/oscsum.hpp"
#include "zmom/parallel.hpp"

namespace zmom {

namespace {

using cplx = std::complex<double>;

constexpr std::uint64_t kBruteForceLengthCap = 10000;

OscSumGrid osc_from_poly(const DirichletPoly& poly, const QuadraturePlan& plan) {
    std::vector<cplx> amps;
    std::vector<double> freqs;
    for (const auto& [n, c] : poly.terms) {
        if (c == cplx{0.0, 0.0}) continue;
        amps.push_back(c);
        freqs.push_back(std::log(static_cast<double>(n)));
    }
    return OscSumGrid(std::move(amps), std::move(freqs), plan.t_lo, plan.step);
}

// Simpson quadrature of fn(|A_1(t)|, ..., |A_J(t)|) over the plan, where each
// A_j is an oscillating sum; evaluated block-wise and reduced in block order.
template <typename Fn>
double quad_osc(const std::vector<OscSumGrid>& grids, const QuadraturePlan& plan, int threads,
                Fn&& fn) {
    const std::size_t count = plan.node_count();
    const std::size_t period = OscSumGrid::kAnchorPeriod;
    const std::size_t nblocks = (count + period - 1) / period;
    std::vector<double> partial(nblocks, 0.0);
    parallel_for_chunks(nblocks, threads, [&](std::size_t b) {
        const std::size_t k0 = b * period;
        const std::size_t nb = std::min(period, count - k0);
        std::vector<std::vector<cplx>> vals(grids.size(), std::vector<cplx>(nb));
        for (std::size_t g = 0; g < grids.size(); ++g)
            grids[g].eval_block(k0, nb, vals[g].data());
        double acc = 0.0;
        std::vector<cplx> point(grids.size());
        for (std::size_t i = 0; i < nb; ++i) {
            for (std::size_t g = 0; g < grids.size(); ++g) point[g] = vals[g][i];
            acc += plan.simpson_weight(k0 + i) * fn(point);
        }
        partial[b] = acc;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

double sum_sq(const DirichletPoly& poly) {
    double s = 0.0;
    for (const auto& [n, c] : poly.terms) s += std::norm(c);
    return s;
}

std::set<std::uint64_t> prime_support(const DirichletPoly& poly) {
    std::set<std::uint64_t> out;
    for (const auto& [n, c] : poly.terms) {
        if (n == 1 || c == cplx{0.0, 0.0}) continue;
        std::uint64_t rem = n;
        for (std::uint64_t p = 2; p * p <= rem; ++p)
            while (rem % p == 0) {
                out.insert(p);
                rem /= p;
            }
        if (rem > 1) out.insert(rem);
    }
    return out;
}

} // namespace

MeanValueResult mv_check(const DirichletPoly& poly, const QuadraturePlan& plan, double c_mv,
                         int threads) {
    if (poly.length > kBruteForceLengthCap)
        throw compute_error("mv_check: polynomial too long for brute-force quadrature");
    const double Tlen = plan.t_hi - plan.t_lo;
    const double ss = sum_sq(poly);

    std::vector<OscSumGrid> grids;
    grids.push_back(osc_from_poly(poly, plan));
    MeanValueResult r;
    r.numeric = quad_osc(grids, plan, threads,
                         [](const std::vector<cplx>& v) { return std::norm(v[0]); });
    r.diagonal = Tlen * ss;
    r.discrepancy = std::fabs(r.numeric - r.diagonal);
    r.bound = c_mv * static_cast<double>(poly.length) * ss;
    r.ok = r.discrepancy <= r.bound;
    return r;
}

MeanValueResult splitting_check(const std::vector<DirichletPoly>& polys,
                                const QuadraturePlan& plan, double c_split, int threads) {
    if (polys.empty()) throw spec_error("splitting_check: no polynomials");
    std::set<std::uint64_t> seen;
    double product_length = 1.0;
    for (const auto& poly : polys) {
        for (std::uint64_t p : prime_support(poly)) {
            if (!seen.insert(p).second)
                throw spec_error("splitting_check: prime supports not disjoint");
        }
        product_length *= static_cast<double>(poly.length);
    }
    if (product_length > static_cast<double>(kBruteForceLengthCap))
        throw compute_error("splitting_check: product length exceeds 10^4");

    const double Tlen = plan.t_hi - plan.t_lo;
    std::vector<OscSumGrid> grids;
    for (const auto& poly : polys) grids.push_back(osc_from_poly(poly, plan));

    MeanValueResult r;
    r.numeric = quad_osc(grids, plan, threads, [](const std::vector<cplx>& v) {
        double f = 1.0;
        for (const cplx& z : v) f *= std::norm(z);
        return f;
    });

    double diag = Tlen;
    for (const auto& poly : polys) {
        std::vector<OscSumGrid> one;
        one.push_back(osc_from_poly(poly, plan));
        const double mean =
            quad_osc(one, plan, threads,
                     [](const std::vector<cplx>& v) { return std::norm(v[0]); }) /
            Tlen;
        diag *= mean;
    }
    r.diagonal = diag;
    r.discrepancy = std::fabs(r.numeric - r.diagonal);
    r.bound = c_split * product_length * std::fabs(diag) / Tlen;
    r.ok = r.discrepancy <= r.bound;
    return r;
}

MeanValueResult prime_high_moment_check(const DirichletPoly& prime_poly, int r,
                                        const QuadraturePlan& plan, double c_hm, int threads) {
    if (r < 1) throw spec_error("prime_high_moment_check: r >= 1 required");
    double N = 0.0;
    for (const auto& [n, c] : prime_poly.terms) {
        if (n == 1 || c == cplx{0.0, 0.0}) continue;
        // support must be prime
        std::uint64_t rem = n;
        int nf = 0;
        for (std::uint64_t p = 2; p * p <= rem; ++p)
            while (rem % p == 0) {
                rem /= p;
                ++nf;
            }
        if (rem > 1) ++nf;
        if (nf != 1) throw spec_error("prime_high_moment_check: support must be prime");
        N = std::max(N, static_cast<double>(n));
    }
    const double Tlen = plan.t_hi - plan.t_lo;
    if (std::pow(N, r) > Tlen / std::log(Tlen))
        throw spec_error("prime_high_moment_check: hypothesis N^r <= T/log T violated");

    std::vector<OscSumGrid> grids;
    grids.push_back(osc_from_poly(prime_poly, plan));
    MeanValueResult res;
    res.numeric = quad_osc(grids, plan, threads, [r](const std::vector<cplx>& v) {
        return std::pow(std::norm(v[0]), r);
    });
    res.diagonal = Tlen * std::tgamma(static_cast<double>(r) + 1.0) *
                   std::pow(sum_sq(prime_poly), r);
    res.discrepancy = std::fabs(res.numeric - res.diagonal);
    res.bound = c_hm * res.diagonal;
    res.ok = res.numeric <= res.bound; // the lemma's inequality
    return res;
}

} // namespace zmom
