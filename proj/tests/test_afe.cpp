#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "zmom/afe.hpp"
#include "zmom/errors.hpp"
#include "zmom/zeta.hpp"

using namespace zmom;
using cplx = std::complex<double>;

namespace {

const KernelParams kPrm{1, 12.0, 0.005};

// ordered-factorization count d_m(n) by recursion
std::uint64_t dm_count(std::uint64_t n, int m) {
    if (m == 1) return 1;
    std::uint64_t acc = 0;
    for (std::uint64_t d = 1; d <= n; ++d)
        if (n % d == 0) acc += dm_count(n / d, m - 1);
    return acc;
}

} // namespace

TEST_CASE("kernel params validation") {
    CHECK_THROWS_AS(validate(KernelParams{1, 6.0, 0.005}), spec_error);
    CHECK_THROWS_AS(validate(KernelParams{1, 12.0, 0.2}), spec_error);
    CHECK_THROWS_AS(validate(KernelParams{0, 12.0, 0.005}), spec_error);
    CHECK_NOTHROW(validate(kPrm));
}

TEST_CASE("kernel normalization V(t^{3m}, t) = 1/2") {
    const double v1 = kernel_v(std::pow(300.0, 3), 300.0, 1, kPrm);
    CHECK(std::fabs(v1 - 0.5) < 1e-8);
    const double v2 = kernel_v(std::pow(120.0, 6), 120.0, 2, KernelParams{2, 12.0, 0.005});
    CHECK(std::fabs(v2 - 0.5) < 1e-8);
}

TEST_CASE("kernel limits") {
    // x far below t^{3m}: V -> 1
    CHECK(std::fabs(kernel_v(std::pow(200.0, 3) * 1e-8, 200.0, 1, kPrm) - 1.0) < 1e-5);
    // x far above: V -> 0
    CHECK(std::fabs(kernel_v(std::pow(50.0, 3) * 3.0e8, 50.0, 1, kPrm)) < 1e-5);
    // reference values on the transition: V at x = e * t^{3m} and x = 10 t^{3m}
    CHECK(kernel_v(std::exp(1.0) * std::pow(100.0, 3), 100.0, 1, kPrm) ==
          doctest::Approx(0.23975006109347673).epsilon(1e-9));
    CHECK(kernel_v(10.0 * std::pow(100.0, 3), 100.0, 1, kPrm) ==
          doctest::Approx(0.051744047515926948).epsilon(1e-8));
    CHECK_THROWS_AS(kernel_v(-1.0, 100.0, 1, kPrm), spec_error);
    CHECK_THROWS_AS(kernel_v(1.0, 0.0, 1, kPrm), spec_error);
}

TEST_CASE("kernel contour independence") {
    const double x = std::exp(1.0) * std::pow(100.0, 3);
    const double va = kernel_v_on_line(x, 100.0, 1, kPrm, 1.0);
    const double vb = kernel_v_on_line(x, 100.0, 1, kPrm, 2.0);
    const double vc = kernel_v(x, 100.0, 1, kPrm);
    CHECK(std::fabs(va - vb) < 1e-9);
    CHECK(std::fabs(va - vc) < 1e-9);
}

TEST_CASE("kernel range containment on a grid") {
    // V stays within (-1e-3, 1 + 1e-3) across the transition
    for (int i = -60; i <= 60; ++i) {
        const double lr = 0.25 * static_cast<double>(i); // log(t^{3m}/x)
        const double x = std::pow(150.0, 3) * std::exp(-lr);
        const double v = kernel_v(x, 150.0, 1, kPrm);
        CHECK(v > -1e-3);
        CHECK(v < 1.0 + 1e-3);
    }
}

TEST_CASE("tau_alpha exact values") {
    CHECK(std::abs(tau_alpha(1, {0.0, 0.0}) - cplx{1.0, 0.0}) == 0.0);
    CHECK(std::abs(tau_alpha(6, {0.0, 0.0}) - cplx{4.0, 0.0}) < 1e-14);
    CHECK(std::abs(tau_alpha(12, {0.0, 0.0, 0.0}) -
                   cplx{static_cast<double>(dm_count(12, 3)), 0.0}) < 1e-12);
    CHECK_THROWS_AS(tau_alpha(0, {0.0}), spec_error);
    CHECK_THROWS_AS(tau_alpha(5, {}), spec_error);
}

TEST_CASE("tau_alpha with trivial twists equals d_m for all n <= 10^4") {
    // divisor-count sieve as the independent oracle
    const std::uint64_t N = 10000;
    std::vector<std::uint32_t> d(N + 1, 0);
    for (std::uint64_t a = 1; a <= N; ++a)
        for (std::uint64_t b = a; b <= N; b += a) ++d[b];
    bool all_ok = true;
    for (std::uint64_t n = 1; n <= N; ++n) {
        const cplx v = tau_alpha(n, {0.0, 0.0});
        all_ok = all_ok && std::fabs(v.real() - static_cast<double>(d[n])) < 1e-9 &&
                 std::fabs(v.imag()) < 1e-9;
    }
    CHECK(all_ok);
    CHECK(tau_alpha(6, {0.0, 0.0}).real() == doctest::Approx(static_cast<double>(dm_count(6, 2))));

    // multiplicativity at trivial twists
    const cplx a = tau_alpha(8, {0.0, 0.0, 0.0});
    const cplx b = tau_alpha(9, {0.0, 0.0, 0.0});
    const cplx ab = tau_alpha(72, {0.0, 0.0, 0.0});
    CHECK(std::abs(ab - a * b) < 1e-12);
}

TEST_CASE("tau_alpha triangle inequality") {
    for (std::uint64_t n : {24ull, 100ull, 5040ull}) {
        const cplx tw = tau_alpha(n, {1.3, -2.7});
        const cplx t0 = tau_alpha(n, {0.0, 0.0});
        CHECK(std::abs(tw) <= t0.real() + 1e-12);
    }
}

TEST_CASE("tau_alpha against direct twisted enumeration") {
    const std::vector<double> alphas{0.7, -1.9};
    for (std::uint64_t n : {30ull, 64ull, 210ull}) {
        cplx brute{0.0, 0.0};
        for (std::uint64_t d = 1; d <= n; ++d) {
            if (n % d) continue;
            const double ph = -alphas[0] * std::log(static_cast<double>(d)) -
                              alphas[1] * std::log(static_cast<double>(n / d));
            brute += cplx{std::cos(ph), std::sin(ph)};
        }
        CHECK(std::abs(tau_alpha(n, alphas) - brute) < 1e-12);
    }
}

TEST_CASE("series feasibility boundary") {
    // t = 8, m = 1: t^3 = 512, the certified cutoff is ~1.5e4 * 512
    CHECK(afe_series_feasible(8.0, 1, 1 << 23));
    CHECK(!afe_series_feasible(8.0, 1, 1 << 16));
    CHECK(!afe_series_feasible(1000.0, 1, 10000000)); // t^3 = 1e9 >> budget
    CHECK_THROWS_AS(afe_rhs_series(1000.0, {0.0}, 10000000, kPrm), compute_error);
}

TEST_CASE("series route equals contour route where both are available") {
    const double t = 8.0;
    const cplx series = afe_rhs_series(t, {0.0}, 1 << 23, kPrm);
    const cplx contour = afe_rhs_contour(t, {0.0}, kPrm);
    CHECK(std::abs(series - contour) < 1e-6);

    // saturation: partial sums approach the full value as the cutoff passes
    // t^{3m}
    double prev = 1e9;
    for (std::uint64_t cut : {std::uint64_t{1} << 13, std::uint64_t{1} << 17,
                              std::uint64_t{1} << 23}) {
        const double err = std::abs(afe_rhs_series_unchecked(t, {0.0}, cut, kPrm) - contour);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("contour line selection and validation") {
    CHECK_THROWS_AS(afe_rhs_contour(1000.0, {0.0}, kPrm, 0.4), spec_error);
    CHECK_THROWS_AS(afe_rhs_contour(1000.0, {0.0}, kPrm, 1.5), spec_error);
    // explicit lines inside (1/2, 1] agree
    const cplx a = afe_rhs_contour(300.0, {0.0}, kPrm, 1.0);
    const cplx b = afe_rhs_contour(300.0, {0.0}, kPrm, 0.8);
    CHECK(std::abs(a - b) < 1e-7);
}

TEST_CASE("afe residual at the reference points") {
    const double r1 = afe_residual(1000.0, {0.0}, 0, kPrm, AfeMethod::Contour);
    CHECK(r1 < 1e-2);
    const double r2 =
        afe_residual(500.0, {0.0, 0.0}, 0, KernelParams{2, 12.0, 0.005}, AfeMethod::Contour);
    CHECK(r2 < 1e-2);
    // auto mode picks the contour route at these heights
    const double r3 = afe_residual(1000.0, {0.0}, 10000000, kPrm, AfeMethod::Auto);
    CHECK(r3 == doctest::Approx(r1));
    CHECK_THROWS_AS(afe_residual(50.0, {0.0}, 0, kPrm), spec_error); // t >= 100
}

TEST_CASE("afe residual with a genuine shift") {
    const double r = afe_residual(800.0, {3.5}, 0, kPrm, AfeMethod::Contour);
    CHECK(r < 1e-2);
}
