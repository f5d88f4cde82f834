// Acceptance suite: one pass/fail line per criterion. Heavy zeta grids are
// cached under ZMOM_CACHE_DIR (default: <tmp>/zmom-acceptance-cache), so
// re-runs are fast.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "zmom/afe.hpp"
#include "zmom/cache.hpp"
#include "zmom/cli.hpp"
#include "zmom/dirichlet.hpp"
#include "zmom/moments.hpp"
#include "zmom/mvlab.hpp"
#include "zmom/params.hpp"
#include "zmom/parallel.hpp"
#include "zmom/primes.hpp"
#include "zmom/verify.hpp"
#include "zmom/zeta.hpp"

using namespace zmom;
using cplx = std::complex<double>;

namespace {

int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void report(int criterion, const char* name, bool pass, const std::string& detail,
            double seconds) {
    std::printf("criterion %2d [%-18s] %s  (%s; %.1f s)\n", criterion, name,
                pass ? "PASS" : "FAIL", detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

MomentSpec make_spec(double T, std::vector<double> a, std::vector<double> b) {
    MomentSpec s;
    s.T = T;
    s.alphas = std::move(a);
    s.betas = std::move(b);
    return s;
}

constexpr double kEulerGamma = 0.57721566490153286;

} // namespace

int main() {
    const int threads = resolve_threads(0);
    std::string cache_dir;
    if (const char* env = std::getenv("ZMOM_CACHE_DIR")) cache_dir = env;
    else
        cache_dir =
            (std::filesystem::temp_directory_path() / "zmom-acceptance-cache").string();
    GridStore store(cache_dir, direct_zeta_provider(threads));
    const ZetaGridProvider provider = store.as_provider();
    std::printf("acceptance: threads=%d cache=%s\n", threads, cache_dir.c_str());

    // ---------------------------------------------------------------- 1
    {
        Timer tm;
        const double e2 = std::abs(zeta(cplx{2.0, 0.0}) - M_PI * M_PI / 6.0);
        const double e0 = std::abs(zeta(cplx{0.0, 0.0}) - cplx{-0.5, 0.0});
        double lo = 14.0, hi = 14.3;
        for (int i = 0; i < 60; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (hardy_z(lo) * hardy_z(mid) <= 0.0) hi = mid;
            else lo = mid;
        }
        const double zero_err = std::fabs(0.5 * (lo + hi) - 14.134725);
        const double secs = tm.seconds();
        const bool pass = e2 < 1e-10 && e0 < 1e-10 && zero_err < 1e-6 && secs < 1.0;
        report(1, "zeta-backend", pass,
               fmt("|z(2)-pi^2/6|=%.1e, |z(0)+1/2|=%.1e, zero err=%.1e", e2, e0, zero_err),
               secs);
    }

    // ---------------------------------------------------------------- 2
    {
        Timer tm;
        const MomentSpec spec = make_spec(1e5, {0.0}, {1.0});
        const QuadraturePlan plan = make_moment_plan(1e5, QuadraturePlan::Weight::Sharp);
        const double value = shifted_moment(spec, plan, provider, threads).value;
        const double logT = std::log(1e5);
        const double closed =
            1e5 * (logT + 2.0 * std::log(2.0) - std::log(2.0 * M_PI) + 2.0 * kEulerGamma - 1.0);
        const double ratio = value / closed;

        const QuadraturePlan fine =
            make_moment_plan(1e5, QuadraturePlan::Weight::Sharp, plan.step / 2.0);
        const double value_fine = shifted_moment(spec, fine, provider, threads).value;
        const double oracle_rel = std::fabs(value - value_fine) / value_fine;

        const bool pass = ratio >= 0.97 && ratio <= 1.03 && oracle_rel < 1e-4;
        report(2, "second-moment", pass,
               fmt("ratio=%.5f, half-step agreement=%.2e", ratio, oracle_rel), tm.seconds());
    }

    // ---------------------------------------------------------------- 3
    {
        Timer tm;
        const PrimeTable table = sieve(1 << 16);
        bool pass = true;
        std::string detail;
        for (double T : {1e3, 1e4}) {
            const MomentSpec spec = make_spec(T, {0.0, 10.0}, {1.0, 1.0});
            const QuadraturePlan plan = make_moment_plan(T, QuadraturePlan::Weight::Smooth);
            for (double delta : {1e-6, 0.8}) {
                const Schedule sched = build_schedule(spec, delta);
                pass = pass && (sched.L == 0 || sched.L == 1 || sched.L == 2);
                const HolderIntegrals h =
                    holder_integrals(spec, sched, plan, table, provider, threads);
                const double rsum_err = std::fabs(h.exponents.reciprocal_sum() - 1.0);
                pass = pass && h.relative_slack >= -1e-6 && rsum_err <= 1e-12;
                if (T == 1e4 && delta == 0.8)
                    detail = fmt("L=1 slack=%.3e, recip err=%.1e", h.relative_slack, rsum_err);
            }
        }
        report(3, "holder-mechanism", pass, detail, tm.seconds());
    }

    // ---------------------------------------------------------------- 4
    {
        Timer tm;
        const SuiteReport rep = run_verify_suite("taylor", 3, threads);
        report(4, "taylor-lemma", rep.failures == 0,
               fmt("%.0f points, max gap/tol=%.2e", static_cast<double>(rep.instances),
                   rep.max_observed_ratio),
               tm.seconds());
    }

    // ---------------------------------------------------------------- 5
    {
        Timer tm;
        const SuiteReport mv = run_verify_suite("mv", 1, threads);
        const SuiteReport sp = run_verify_suite("splitting", 2, threads);
        int hm_failures = 0;
        std::mt19937_64 rng(11);
        double hm_worst = 0.0;
        const std::vector<std::uint64_t> small_primes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
        for (int i = 0; i < 15; ++i) {
            const double T = (i % 2) ? 1e5 : 1e6;
            const int r = 1 + i % 3;
            const std::size_t np = 4 + rng() % 8;
            CoeffMap m;
            for (std::size_t k = 0; k < np; ++k) {
                const std::uint64_t p = small_primes[k];
                if (std::pow(static_cast<double>(p), r) > T / std::log(T)) break;
                m[p] = cplx{static_cast<double>(rng() % 200) / 100.0 - 1.0,
                            static_cast<double>(rng() % 200) / 100.0 - 1.0};
            }
            std::uint64_t maxp = m.rbegin()->first;
            while (std::pow(static_cast<double>(maxp), r) > T / std::log(T)) {
                m.erase(maxp);
                maxp = m.rbegin()->first;
            }
            const DirichletPoly poly = DirichletPoly::from_map(m);
            const QuadraturePlan plan = make_poly_plan(
                T, 2.0 * T, 2.0 * r * std::log(static_cast<double>(maxp)));
            const MeanValueResult res =
                prime_high_moment_check(poly, r, plan, kHighMomentConstant, threads);
            if (!res.ok) ++hm_failures;
            hm_worst = std::max(hm_worst, res.numeric / res.bound);
        }
        const bool pass = mv.failures == 0 && sp.failures == 0 && hm_failures == 0;
        report(5, "mean-value-suites", pass,
               fmt("mv max=%.3f, split max=%.3f, highmoment max=%.3f", mv.max_observed_ratio,
                   sp.max_observed_ratio, hm_worst),
               tm.seconds());
    }

    // ---------------------------------------------------------------- 6
    {
        Timer tm;
        const SuiteReport rep = run_verify_suite("coeffs", 5, threads);
        report(6, "coefficients", rep.failures == 0,
               fmt("%.0f checks, max ratio=%.3f", static_cast<double>(rep.instances),
                   rep.max_observed_ratio),
               tm.seconds());
    }

    // ---------------------------------------------------------------- 7
    {
        Timer tm;
        const KernelParams prm1{1, 12.0, 0.005};
        const KernelParams prm2{2, 12.0, 0.005};
        const double v1 = kernel_v(std::pow(1000.0, 3), 1000.0, 1, prm1);
        const double v2 = kernel_v(std::pow(500.0, 6), 500.0, 2, prm2);
        const double r1 = afe_residual(1000.0, {0.0}, 10000000, prm1, AfeMethod::Auto);
        const double r2 = afe_residual(500.0, {0.0, 0.0}, 10000000, prm2, AfeMethod::Auto);
        const bool pass = std::fabs(v1 - 0.5) < 1e-8 && std::fabs(v2 - 0.5) < 1e-8 &&
                          r1 < 1e-2 && r2 < 1e-2;
        report(7, "afe", pass,
               fmt("|V-1/2|<=%.1e, residuals %.1e / %.1e",
                   std::max(std::fabs(v1 - 0.5), std::fabs(v2 - 0.5)), r1, r2),
               tm.seconds());
    }

    // ---------------------------------------------------------------- 8
    {
        Timer tm;
        const SuiteReport rep = run_verify_suite("primesum", 8, threads);
        report(8, "cos-prime-sum", rep.failures == 0,
               fmt("sup |gap| = %.3f (ceiling 3)", 3.0 * rep.max_observed_ratio), tm.seconds());
    }

    // ---------------------------------------------------------------- 9
    {
        Timer tm;
        bool pass = true;
        std::string detail;
        for (double a2 : {0.0, 1.0, 10.0}) {
            double rmin = 1e300, rmax = 0.0;
            for (double T : {1e3, 1e4, 1e5}) {
                const MomentSpec spec = make_spec(T, {0.0, a2}, {1.0, 1.0});
                const QuadraturePlan plan = make_moment_plan(T, QuadraturePlan::Weight::Sharp);
                const MomentReport rep = shifted_moment(spec, plan, provider, threads);
                pass = pass && rep.ratio >= 0.05 && rep.ratio <= 20.0;
                rmin = std::min(rmin, rep.ratio);
                rmax = std::max(rmax, rep.ratio);
            }
            pass = pass && rmax / rmin < 4.0;
            detail += fmt("a=%g:[%.3f,%.3f] ", a2, rmin, rmax);
        }
        report(9, "order-tracking", pass, detail, tm.seconds());
    }

    // ---------------------------------------------------------------- 10
    {
        Timer tm;
        std::ostringstream o1, o2, e;
        const std::vector<std::string> args{"moment",    "--T",     "1000,2000", "--alphas", "0",
                                            "--betas",   "1",       "--threads", "1",
                                            "--no-timing"};
        const int c1 = run_cli(args, o1, e);
        const int c2 = run_cli(args, o2, e);
        const bool identical = c1 == 0 && c2 == 0 && o1.str() == o2.str();

        const MomentSpec spec = make_spec(1e3, {0.0}, {1.0});
        const QuadraturePlan plan = make_moment_plan(1e3, QuadraturePlan::Weight::Sharp);
        const double direct = shifted_moment(spec, plan, direct_zeta_provider(threads),
                                             threads)
                                  .value;
        const double cached = shifted_moment(spec, plan, provider, threads).value;
        const double rel = std::fabs(direct - cached) / std::fabs(direct);
        const bool pass = identical && rel <= 1e-12;
        report(10, "determinism", pass,
               fmt("reruns identical=%.0f, cache rel diff=%.1e", identical ? 1.0 : 0.0, rel),
               tm.seconds());
    }

    std::printf("acceptance: %d of 10 criteria passed\n", 10 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
