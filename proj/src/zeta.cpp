#include "zmom/zeta.hpp"

#include <cmath>
#include <cstdint>

#include "zmom/errors.hpp"
#include "zmom/oscsum.hpp"
#include "zmom/parallel.hpp"

namespace zmom {

namespace {

using cplx = std::complex<double>;

// B_{2k}/(2k)! for k = 1..24.
constexpr double kBernoulliOverFact[24] = {
    0.08333333333333333333,   -0.001388888888888888889,  0.00003306878306878306878,
    -8.267195767195767196e-7, 2.087675698786809898e-8,   -5.284190138687493185e-10,
    1.338253653068467883e-11, -3.389680296322582867e-13, 8.586062056277844564e-15,
    -2.174868698558061873e-16, 5.509002828360229515e-18, -1.395446468581252334e-19,
    3.534707039629467472e-21, -8.953517427037546850e-23, 2.267952452337683060e-24,
    -5.744790668872202445e-26, 1.455172475614864902e-27, -3.685994940665310178e-29,
    9.336734257095044672e-31, -2.365022415700629935e-32, 5.990671762482134305e-34,
    -1.517454884468290262e-35, 3.843758125454188232e-37, -9.736353072646691035e-39};

constexpr int kMaxCorrections = 24;
constexpr double kMaxHeight = 1.0e7;

cplx pow_int_cplx(double n, cplx e) {
    // n^e for n > 0
    double ln = std::log(n);
    double mag = std::exp(e.real() * ln);
    double ph = e.imag() * ln;
    return {mag * std::cos(ph), mag * std::sin(ph)};
}

// Boundary terms of the Euler-Maclaurin formula at cutoff N:
//   N^{1-s}/(s-1) + N^{-s}/2 + sum_{k=1}^{M} B_{2k}/(2k)! (s)_{2k-1} N^{-s-2k+1}.
// When rel_tol > 0 the series stops once the Backlund remainder bound
// |s+2M+1|/(sigma+2M+1) * |next term| drops below rel_tol * scale; with
// rel_tol <= 0 all `max_m` terms are used. Returns false if the bound was not
// met (only with rel_tol > 0).
bool em_boundary(cplx s, double N, int max_m, double rel_tol, double scale, cplx& out) {
    const cplx one{1.0, 0.0};
    const cplx Nms = pow_int_cplx(N, -s);
    cplx acc = Nms * N / (one - s) * (-1.0); // N^{1-s}/(s-1)
    acc += 0.5 * Nms;

    cplx rising = s;           // (s)_{2k-1} for k = 1 is just s
    cplx npow = Nms / N;       // N^{-s-1}
    const double invN2 = 1.0 / (N * N);
    for (int k = 1; k <= max_m; ++k) {
        cplx term = kBernoulliOverFact[k - 1] * rising * npow;
        acc += term;
        if (rel_tol > 0.0) {
            double m2 = 2.0 * k;
            double rem = std::abs(s + (m2 + 1.0)) / (s.real() + m2 + 1.0) * std::abs(term);
            if (rem <= rel_tol * scale) {
                out = acc;
                return true;
            }
        }
        rising *= (s + (2.0 * k - 1.0)) * (s + (2.0 * k));
        npow *= invN2;
    }
    out = acc;
    return rel_tol <= 0.0;
}

} // namespace

std::complex<double> zeta(std::complex<double> s, double rel_tol) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw spec_error("zeta argument must be finite");
    if (s == cplx{1.0, 0.0}) throw compute_error("zeta pole at s = 1");
    if (s.real() < -1.0) throw spec_error("zeta: sigma < -1 unsupported");
    if (std::fabs(s.imag()) > kMaxHeight) throw spec_error("zeta: |t| > 1e7 unsupported");
    if (rel_tol < 1e-13) rel_tol = 1e-13;

    const double at = std::fabs(s.imag());
    const std::uint64_t N =
        std::max<std::uint64_t>(20, static_cast<std::uint64_t>(std::ceil(3.0 * at)));

    cplx main{0.0, 0.0};
    for (std::uint64_t n = 1; n < N; ++n)
        main += pow_int_cplx(static_cast<double>(n), -s);

    const double scale = std::max(std::abs(main), 1e-6);
    cplx corr;
    if (!em_boundary(s, static_cast<double>(N), kMaxCorrections, rel_tol, scale, corr))
        throw compute_error("zeta: tolerance unachievable at requested point");
    return main + corr;
}

std::complex<double> zeta(ComplexPoint s, double rel_tol) { return zeta(s.as_complex(), rel_tol); }

std::complex<double> zeta_one(double delta, double eps) {
    if (!(eps > 0.0)) throw spec_error("zeta_one requires eps > 0");
    return zeta(cplx{1.0 + eps, delta});
}

double rs_theta(double t) {
    if (t < 2.0) throw spec_error("rs_theta: asymptotic form needs t >= 2");
    const double u = t / 2.0;
    double th = u * std::log(u / M_PI) - u - M_PI / 8.0;
    const double t2 = t * t;
    th += 1.0 / (48.0 * t) + 7.0 / (5760.0 * t * t2) + 31.0 / (80640.0 * t2 * t2 * t);
    return th;
}

double hardy_z(double t, double rel_tol) {
    const cplx z = zeta(cplx{0.5, t}, rel_tol);
    const double th = rs_theta(t);
    return std::cos(th) * z.real() - std::sin(th) * z.imag();
}

double rh_majorant(double t, double alpha, double X, double T, const PrimeTable& table) {
    if (!(X >= 2.0) || !(X <= T * T)) throw spec_error("rh_majorant requires 2 <= X <= T^2");
    if (!table.covers(X)) throw spec_error("prime table smaller than X");
    const double logX = std::log(X);
    const double ta = t + alpha;

    double s1 = 0.0;
    for (std::uint64_t p : table.primes) {
        double pd = static_cast<double>(p);
        if (pd > X) break;
        double lp = std::log(pd);
        // Re p^{-1/2 - 1/logX - i(t+alpha)} * log(X/p)/log X
        double mag = std::exp(-(0.5 + 1.0 / logX) * lp) * (logX - lp) / logX;
        s1 += mag * std::cos(ta * lp);
    }

    const double lim2 = std::min(std::sqrt(X), std::log(T));
    double s2 = 0.0;
    for (std::uint64_t p : table.primes) {
        double pd = static_cast<double>(p);
        if (pd > lim2) break;
        double lp = std::log(pd);
        s2 += 0.5 * std::cos(2.0 * ta * lp) / pd;
    }

    return s1 + s2 + std::log(T) / logX;
}

// ---------------------------------------------------------------------------
// Grid sampler

OscSumGrid::OscSumGrid(std::vector<std::complex<double>> amplitudes,
                       std::vector<double> frequencies, double t0, double step)
    : amp_(std::move(amplitudes)), freq_(std::move(frequencies)), t0_(t0), step_(step) {
    if (amp_.size() != freq_.size()) throw spec_error("oscsum: amplitude/frequency mismatch");
}

void OscSumGrid::eval_block(std::size_t k0, std::size_t n, std::complex<double>* out) const {
    const std::size_t m = amp_.size();
    // Four phase lanes per term (nodes k, k+1, k+2, k+3) advanced by the
    // stride-4 rotation, and strips of kStrip nodes per pass so each term's
    // state is touched once per strip instead of once per node.
    constexpr std::size_t kLanes = 4;
    constexpr std::size_t kGroups = 8;
    constexpr std::size_t kStrip = kLanes * kGroups;

    std::vector<double> ur(m * kLanes), ui(m * kLanes), cr(m), ci(m);
    const double tstart = t0_ + step_ * static_cast<double>(k0);
    for (std::size_t i = 0; i < m; ++i) {
        const double ph0 = -tstart * freq_[i];
        const double dph = -step_ * freq_[i];
        const double rc = std::cos(dph), rs = std::sin(dph);
        double a = amp_[i].real() * std::cos(ph0) - amp_[i].imag() * std::sin(ph0);
        double b = amp_[i].real() * std::sin(ph0) + amp_[i].imag() * std::cos(ph0);
        for (std::size_t l = 0; l < kLanes; ++l) {
            ur[i * kLanes + l] = a;
            ui[i * kLanes + l] = b;
            const double na = a * rc - b * rs;
            b = a * rs + b * rc;
            a = na;
        }
        // rotation by kLanes steps
        double rcl = rc, rsl = rs;
        for (std::size_t l = 1; l < kLanes; l <<= 1) {
            const double nrc = rcl * rcl - rsl * rsl;
            rsl = 2.0 * rcl * rsl;
            rcl = nrc;
        }
        cr[i] = rcl;
        ci[i] = rsl;
    }

    double* __restrict pur = ur.data();
    double* __restrict pui = ui.data();
    const double* __restrict pcr = cr.data();
    const double* __restrict pci = ci.data();

    std::size_t k = 0;
    for (; k + kStrip <= n; k += kStrip) {
        double accr[kStrip] = {0.0}, acci[kStrip] = {0.0};
        std::size_t i = 0;
        // two terms in flight per pass to hide the rotation latency chain
        for (; i + 2 <= m; i += 2) {
            double a0[kLanes], b0[kLanes], a1[kLanes], b1[kLanes];
            for (std::size_t l = 0; l < kLanes; ++l) {
                a0[l] = pur[i * kLanes + l];
                b0[l] = pui[i * kLanes + l];
                a1[l] = pur[(i + 1) * kLanes + l];
                b1[l] = pui[(i + 1) * kLanes + l];
            }
            const double c0 = pcr[i], d0 = pci[i];
            const double c1 = pcr[i + 1], d1 = pci[i + 1];
            for (std::size_t g = 0; g < kGroups; ++g) {
                for (std::size_t l = 0; l < kLanes; ++l) {
                    accr[g * kLanes + l] += a0[l] + a1[l];
                    acci[g * kLanes + l] += b0[l] + b1[l];
                    const double n0 = a0[l] * c0 - b0[l] * d0;
                    b0[l] = a0[l] * d0 + b0[l] * c0;
                    a0[l] = n0;
                    const double n1 = a1[l] * c1 - b1[l] * d1;
                    b1[l] = a1[l] * d1 + b1[l] * c1;
                    a1[l] = n1;
                }
            }
            for (std::size_t l = 0; l < kLanes; ++l) {
                pur[i * kLanes + l] = a0[l];
                pui[i * kLanes + l] = b0[l];
                pur[(i + 1) * kLanes + l] = a1[l];
                pui[(i + 1) * kLanes + l] = b1[l];
            }
        }
        for (; i < m; ++i) {
            double a[kLanes], b[kLanes];
            for (std::size_t l = 0; l < kLanes; ++l) {
                a[l] = pur[i * kLanes + l];
                b[l] = pui[i * kLanes + l];
            }
            const double c = pcr[i], d = pci[i];
            for (std::size_t g = 0; g < kGroups; ++g) {
                for (std::size_t l = 0; l < kLanes; ++l) {
                    accr[g * kLanes + l] += a[l];
                    acci[g * kLanes + l] += b[l];
                    const double na = a[l] * c - b[l] * d;
                    b[l] = a[l] * d + b[l] * c;
                    a[l] = na;
                }
            }
            for (std::size_t l = 0; l < kLanes; ++l) {
                pur[i * kLanes + l] = a[l];
                pui[i * kLanes + l] = b[l];
            }
        }
        for (std::size_t j = 0; j < kStrip; ++j) out[k + j] = {accr[j], acci[j]};
    }

    // tail nodes, one at a time through lane 0
    for (; k < n; ++k) {
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double a = pur[i * kLanes], b = pui[i * kLanes];
            re += a;
            im += b;
            // advance all four lanes by one step: rotate lane state by the
            // single-step rotation reconstructed from freq
            const double dph = -step_ * freq_[i];
            const double rc = std::cos(dph), rs = std::sin(dph);
            for (std::size_t l = 0; l < kLanes; ++l) {
                const double al = pur[i * kLanes + l], bl = pui[i * kLanes + l];
                pur[i * kLanes + l] = al * rc - bl * rs;
                pui[i * kLanes + l] = al * rs + bl * rc;
            }
        }
        out[k] = {re, im};
    }
}

std::vector<std::complex<double>> OscSumGrid::eval_all(std::size_t count, int threads) const {
    std::vector<cplx> out(count);
    const std::size_t nblocks = (count + kAnchorPeriod - 1) / kAnchorPeriod;
    parallel_for_chunks(nblocks, threads, [&](std::size_t b) {
        const std::size_t k0 = b * kAnchorPeriod;
        const std::size_t n = std::min(kAnchorPeriod, count - k0);
        eval_block(k0, n, out.data() + k0);
    });
    return out;
}

ZetaGrid sample_zeta_grid(double t0, double step, std::size_t count, int threads) {
    if (count == 0) return {t0, step, {}};
    if (!(step > 0.0)) throw spec_error("zeta grid requires step > 0");
    const double tmax = t0 + step * static_cast<double>(count - 1);
    if (!(t0 >= 0.0) || tmax > 2.5e6)
        throw compute_error("zeta grid: height out of supported range [0, 2.5e6]");

    const std::uint64_t N =
        std::max<std::uint64_t>(64, static_cast<std::uint64_t>(std::ceil((tmax + 1.0) / 3.0)));
    constexpr int kGridM = 20;

    std::vector<cplx> amps;
    std::vector<double> freqs;
    amps.reserve(N - 1);
    freqs.reserve(N - 1);
    for (std::uint64_t n = 1; n < N; ++n) {
        const double nd = static_cast<double>(n);
        amps.emplace_back(1.0 / std::sqrt(nd), 0.0);
        freqs.push_back(std::log(nd));
    }
    OscSumGrid grid(std::move(amps), std::move(freqs), t0, step);

    ZetaGrid zg;
    zg.t0 = t0;
    zg.step = step;
    zg.v.resize(count);

    const std::size_t period = OscSumGrid::kAnchorPeriod;
    const std::size_t nblocks = (count + period - 1) / period;
    const double Nd = static_cast<double>(N);
    parallel_for_chunks(nblocks, threads, [&](std::size_t b) {
        const std::size_t k0 = b * period;
        const std::size_t n = std::min(period, count - k0);
        grid.eval_block(k0, n, zg.v.data() + k0);
        for (std::size_t k = k0; k < k0 + n; ++k) {
            const cplx s{0.5, t0 + step * static_cast<double>(k)};
            cplx corr;
            em_boundary(s, Nd, kGridM, 0.0, 1.0, corr);
            zg.v[k] += corr;
        }
    });
    return zg;
}

} // namespace zmom
