#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "zmom/dirichlet.hpp"
#include "zmom/errors.hpp"
#include "zmom/moments.hpp"
#include "zmom/params.hpp"
#include "zmom/primes.hpp"

using namespace zmom;
using cplx = std::complex<double>;

namespace {

MomentSpec make_spec(double T, std::vector<double> a, std::vector<double> b) {
    MomentSpec s;
    s.T = T;
    s.alphas = std::move(a);
    s.betas = std::move(b);
    return s;
}

constexpr double kEulerGamma = 0.57721566490153286;

} // namespace

TEST_CASE("smooth weight plateau, support and midpoints") {
    CHECK(smooth_weight(1.5) == 1.0);
    CHECK(smooth_weight(1.25) == 1.0);
    CHECK(smooth_weight(1.75) == 1.0);
    CHECK(smooth_weight(0.9) == 0.0);
    CHECK(smooth_weight(2.0) == 0.0);
    CHECK(smooth_weight(2.3) == 0.0);
    CHECK(smooth_weight(1.125) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(smooth_weight(1.875) == doctest::Approx(0.5).epsilon(1e-14));
    // monotone on the rise, bounded by the indicator pair
    double prev = -1.0;
    for (double u = 1.0; u <= 1.26; u += 0.01) {
        const double w = smooth_weight(u);
        CHECK(w >= prev - 1e-15);
        CHECK(w >= 0.0);
        CHECK(w <= 1.0);
        prev = w;
    }
}

TEST_CASE("plan construction and rejection") {
    const QuadraturePlan p = make_moment_plan(1e4, QuadraturePlan::Weight::Sharp);
    CHECK(p.t_lo == 1e4);
    CHECK(p.t_hi == 2e4);
    CHECK(p.intervals % 2 == 0);
    CHECK(p.step * static_cast<double>(p.intervals) == doctest::Approx(1e4).epsilon(1e-12));
    CHECK(p.step <= 2.0 * M_PI / (20.0 * std::log(2e4 / (2.0 * M_PI))));

    CHECK_THROWS_AS(make_moment_plan(1e4, QuadraturePlan::Weight::Sharp, 1.0), spec_error);

    // Simpson weights integrate constants exactly (linear summation noise only)
    double sum = 0.0;
    for (std::size_t i = 0; i < p.node_count(); ++i) sum += p.simpson_weight(i);
    CHECK(sum == doctest::Approx(1e4).epsilon(1e-10));
}

TEST_CASE("shifted moment with zero exponents is the window length") {
    const MomentSpec spec = make_spec(1e3, {0.0}, {0.0});
    const QuadraturePlan plan = make_moment_plan(1e3, QuadraturePlan::Weight::Sharp);
    const MomentReport rep = shifted_moment(spec, plan, direct_zeta_provider(2), 2);
    CHECK(rep.value == doctest::Approx(1e3).epsilon(1e-10));
}

TEST_CASE("second moment against the classical mean at T = 10^4") {
    const MomentSpec spec = make_spec(1e4, {0.0}, {1.0});
    const QuadraturePlan plan = make_moment_plan(1e4, QuadraturePlan::Weight::Sharp);
    const MomentReport rep = shifted_moment(spec, plan, direct_zeta_provider(2), 2);
    const double logT = std::log(1e4);
    const double closed =
        1e4 * (logT + 2.0 * std::log(2.0) - std::log(2.0 * M_PI) + 2.0 * kEulerGamma - 1.0);
    CHECK(rep.value / closed > 0.95);
    CHECK(rep.value / closed < 1.05);
    CHECK(rep.ratio == doctest::Approx(rep.value / rep.predicted));
}

TEST_CASE("window-shift invariance") {
    // integrating |zeta(1/2+i(t+c))| over [T,2T] equals integrating the
    // unshifted integrand over [T+c, 2T+c]; the grids coincide node by node
    const double T = 1e3, c = 7.25;
    const MomentSpec sa = make_spec(T, {c}, {0.8});
    const QuadraturePlan pa = make_moment_plan(T, QuadraturePlan::Weight::Sharp);

    MomentSpec sb = make_spec(T, {0.0}, {0.8});
    QuadraturePlan pb = pa;
    pb.t_lo += c;
    pb.t_hi += c;

    const double va = shifted_moment(sa, pa, direct_zeta_provider(1), 1).value;
    const double vb = shifted_moment(sb, pb, direct_zeta_provider(1), 1).value;
    CHECK(va == doctest::Approx(vb).epsilon(1e-12));
}

TEST_CASE("predicted main term") {
    // m = 1: T (log T)^{beta^2}, no product factor
    const double T = 1e4;
    CHECK(predicted_main_term(make_spec(T, {0.0}, {1.5})) ==
          doctest::Approx(T * std::pow(std::log(T), 2.25)).epsilon(1e-13));

    // m = 2 formula via zeta_one
    const double logT = std::log(T);
    const double expect = T * std::pow(logT, 2.0) *
                          std::pow(std::abs(zeta_one(-10.0, 1.0 / logT)), 2.0);
    CHECK(predicted_main_term(make_spec(T, {0.0, 10.0}, {1.0, 1.0})) ==
          doctest::Approx(expect).epsilon(1e-12));

    // permutation invariance
    const double v1 = predicted_main_term(make_spec(T, {0.0, 3.0, -2.0}, {1.0, 0.5, 2.0}));
    const double v2 = predicted_main_term(make_spec(T, {3.0, -2.0, 0.0}, {0.5, 2.0, 1.0}));
    CHECK(v1 == doctest::Approx(v2).epsilon(1e-12));

    // continuity as shifts merge
    const double va = predicted_main_term(make_spec(T, {0.0, 1e-9}, {1.0, 1.0}));
    const double vb = predicted_main_term(make_spec(T, {0.0, 0.0}, {1.0, 1.0}));
    CHECK(va == doctest::Approx(vb).epsilon(1e-6));
}

TEST_CASE("holder exponents") {
    {
        const HolderExponents e = holder_exponents({1.0});
        CHECK(e.inv_p == doctest::Approx(0.25));
        CHECK(e.inv_r[0] == doctest::Approx(0.25));
        CHECK(e.inv_q == doctest::Approx(0.5));
    }
    {
        const HolderExponents e = holder_exponents({1.0, 1.0});
        CHECK(e.inv_p == doctest::Approx(1.0 / 8.0));
        CHECK(e.inv_r[0] == doctest::Approx(3.0 / 16.0));
        CHECK(e.inv_r[1] == doctest::Approx(3.0 / 16.0));
        CHECK(e.inv_q == doctest::Approx(0.5));
    }
    std::mt19937_64 rng(13);
    for (int i = 0; i < 100; ++i) {
        const int m = 1 + static_cast<int>(rng() % 4);
        std::vector<double> betas;
        for (int k = 0; k < m; ++k)
            betas.push_back(static_cast<double>(rng() % 4000) / 1000.0);
        const HolderExponents e = holder_exponents(betas);
        CHECK(std::fabs(e.reciprocal_sum() - 1.0) < 1e-12);
        CHECK(e.inv_p > 0.0);
        CHECK(e.inv_p < 1.0);
        CHECK(e.inv_q > 0.0);
        CHECK(e.inv_q < 1.0);
        for (double r : e.inv_r) {
            CHECK(r > 0.0);
            CHECK(r < 1.0);
        }
    }
}

TEST_CASE("good set membership") {
    const PrimeTable table = sieve(1 << 16);
    // L = 0: vacuously true
    {
        const MomentSpec spec = make_spec(1e4, {0.0, 10.0}, {1.0, 1.0});
        const Schedule sched = build_schedule(spec, 1e-6);
        REQUIRE(sched.L == 0);
        CHECK(good_set_member(12345.6, spec, sched, table));
    }
    // single block: membership mirrors |P| <= K_1 at both shifts, is
    // permutation invariant, and some t violates it
    {
        const MomentSpec spec = make_spec(1e4, {0.0, 10.0}, {1.0, 1.0});
        const MomentSpec perm = make_spec(1e4, {10.0, 0.0}, {1.0, 1.0});
        const Schedule sched = build_schedule(spec, 0.8);
        REQUIRE(sched.L == 1);
        const DirichletPoly P = p_poly(1, sched.Tj[1], sched, table);
        bool found_false = false;
        for (double t = 1e4; t < 1.2e4; t += 3.7) {
            const bool member = good_set_member(t, spec, sched, table);
            bool direct = true;
            for (double a : {0.0, 10.0})
                direct = direct && std::abs(eval(P, ComplexPoint{0.5, t + a})) <= sched.Kj(1);
            CHECK(member == direct);
            CHECK(member == good_set_member(t, perm, sched, table));
            found_false = found_false || !member;
        }
        CHECK(found_false);
    }
}

TEST_CASE("holder integrals: L = 0 reductions") {
    const PrimeTable table = sieve(1 << 16);
    const double T = 1e3;
    const MomentSpec spec = make_spec(T, {0.0}, {1.0});
    const Schedule sched = build_schedule(spec, 1e-6);
    REQUIRE(sched.L == 0);
    const QuadraturePlan plan = make_moment_plan(T, QuadraturePlan::Weight::Smooth);
    const ZetaGridProvider provider = direct_zeta_provider(2);
    const HolderIntegrals h = holder_integrals(spec, sched, plan, table, provider, 2);

    // J = T * int w: between T/2 and T, equal to direct Simpson of the weight
    double direct_w = 0.0;
    for (std::size_t i = 0; i < plan.node_count(); ++i)
        direct_w += plan.simpson_weight(i) * smooth_weight(plan.node(i) / T);
    CHECK(h.J == doctest::Approx(direct_w).epsilon(1e-13));
    CHECK(h.J > T / 2.0);
    CHECK(h.J < T);
    CHECK(h.good_fraction == 1.0);

    // m = 1: I_1 = int |zeta|^2 w = the smooth moment with beta = 1
    const MomentReport smoothed = shifted_moment(spec, plan, provider, 2);
    CHECK(h.Ik[0] == doctest::Approx(smoothed.value).epsilon(1e-12));

    // M matches the sharp moment on the same grid
    QuadraturePlan sharp = plan;
    sharp.weight = QuadraturePlan::Weight::Sharp;
    const MomentReport msharp = shifted_moment(spec, sharp, provider, 2);
    CHECK(h.M == doctest::Approx(msharp.value).epsilon(1e-12));

    CHECK(h.relative_slack >= -1e-12);
}

TEST_CASE("holder inequality with an active schedule") {
    const PrimeTable table = sieve(1 << 16);
    const double T = 1e3;
    const MomentSpec spec = make_spec(T, {0.0, 10.0}, {1.0, 1.0});
    const QuadraturePlan plan = make_moment_plan(T, QuadraturePlan::Weight::Smooth);
    const ZetaGridProvider provider = direct_zeta_provider(2);

    for (double delta : {1e-6, 0.8}) {
        const Schedule sched = build_schedule(spec, delta);
        const HolderIntegrals h = holder_integrals(spec, sched, plan, table, provider, 2);
        CHECK(std::fabs(h.exponents.reciprocal_sum() - 1.0) < 1e-12);
        CHECK(h.relative_slack >= -1e-6);
        CHECK(h.lhs <= h.rhs * (1.0 + 1e-9));
        CHECK(h.good_fraction > 0.0);
        if (sched.L >= 1) CHECK(h.good_fraction < 1.0); // some nodes masked
        // individual integral accessors agree with the bundle
        CHECK(integral_J(spec, sched, plan, table, provider, 2) ==
              doctest::Approx(h.J).epsilon(1e-13));
        CHECK(std::abs(integral_I0(spec, sched, plan, table, provider, 2) - h.I0) < 1e-10);
        CHECK(integral_Ik(2, spec, sched, plan, table, provider, 2) ==
              doctest::Approx(h.Ik[1]).epsilon(1e-13));
        CHECK_THROWS_AS(integral_Ik(3, spec, sched, plan, table, provider, 2), spec_error);
    }
}

TEST_CASE("holder integrals are thread-count invariant") {
    const PrimeTable table = sieve(1 << 16);
    const MomentSpec spec = make_spec(1e3, {0.0, 10.0}, {1.0, 1.0});
    const Schedule sched = build_schedule(spec, 0.8);
    const QuadraturePlan plan = make_moment_plan(1e3, QuadraturePlan::Weight::Smooth);
    const HolderIntegrals a =
        holder_integrals(spec, sched, plan, table, direct_zeta_provider(1), 1);
    const HolderIntegrals b =
        holder_integrals(spec, sched, plan, table, direct_zeta_provider(3), 3);
    CHECK(a.M == b.M);
    CHECK(a.J == b.J);
    CHECK(a.I0.real() == b.I0.real());
    CHECK(a.I0.imag() == b.I0.imag());
    CHECK(a.Ik[0] == b.Ik[0]);
    CHECK(a.Ik[1] == b.Ik[1]);
}

TEST_CASE("euler local product") {
    const PrimeTable table = sieve(1000000);
    // empty product below the first prime
    CHECK(euler_local_product(1.5, {0.0}, {1.0}, table) == 1.0);
    // m=1, beta=1, X=10: (3/2)(4/3)(6/5)(8/7)
    CHECK(euler_local_product(10.0, {0.0}, {1.0}, table) ==
          doctest::Approx(2.742857142857143).epsilon(1e-14));

    // log of the product vs the cos prime sum, within the p^{-2} tail
    for (double X : {100.0, 10000.0}) {
        const double lp = std::log(euler_local_product(X, {0.0}, {1.0}, table));
        const double cs = cos_prime_sum(0.0, X, table);
        CHECK(std::fabs(lp - cs) < 0.3);
    }
    // with two opposite shifts the log tracks beta_j beta_k cos sums
    {
        const double X = 1000.0;
        const std::vector<double> al{0.0, 5.0};
        const std::vector<double> be{0.5, 0.5};
        const double lp = std::log(euler_local_product(X, al, be, table));
        double cs = 0.0;
        for (double aj : al)
            for (double ak : al) cs += 0.25 * cos_prime_sum(aj - ak, X, table);
        CHECK(std::fabs(lp - cs) < 0.3);
    }

    // Mertens-type growth: the ratio to (log X)^{(sum beta)^2} stays in a band
    for (double X : {100.0, 1000.0, 10000.0, 100000.0, 1000000.0}) {
        const double v = euler_local_product(X, {0.0}, {1.0}, table);
        const double ratio = v / std::log(X);
        CHECK(ratio > 0.9);
        CHECK(ratio < 1.25);
    }
}
