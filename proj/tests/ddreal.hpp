// Minimal double-double arithmetic for test oracles: ~31 significant digits,
// enough to check the production double path to full precision.
#ifndef ZMOM_TESTS_DDREAL_HPP
#define ZMOM_TESTS_DDREAL_HPP

#include <cmath>

namespace ddtest {

struct dd {
    double hi = 0.0, lo = 0.0;
};

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline dd add(dd a, dd b) {
    dd s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline dd sub(dd a, dd b) { return add(a, {-b.hi, -b.lo}); }

inline dd mul(dd a, dd b) {
    dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline dd div(dd a, dd b) {
    double q1 = a.hi / b.hi;
    dd r = sub(a, mul({q1, 0.0}, b));
    double q2 = r.hi / b.hi;
    r = sub(r, mul({q2, 0.0}, b));
    double q3 = r.hi / b.hi;
    return quick_two_sum(q1, q2 + q3);
}

inline dd from(double x) { return {x, 0.0}; }

inline dd dd_sqrt(dd a) {
    // one Newton step from the double estimate
    double x0 = std::sqrt(a.hi);
    dd x{x0, 0.0};
    dd r = sub(a, mul(x, x));
    return add(x, div(r, from(2.0 * x0)));
}

// zeta(1/2) by Euler-Maclaurin entirely in double-double:
//   sum_{n<N} n^{-1/2} + N^{1/2}/(s-1) + N^{-1/2}/2
//   + sum_k B_{2k}/(2k)! (s)_{2k-1} N^{-s-2k+1},  s = 1/2.
inline dd zeta_half() {
    const int N = 256;
    const int M = 8;
    // B_{2k} as exact rationals, k = 1..8
    const double bnum[8] = {1, -1, 1, -1, 5, -691, 7, -3617};
    const double bden[8] = {6, 30, 42, 30, 66, 2730, 6, 510};

    dd sum{0.0, 0.0};
    for (int n = 1; n < N; ++n) sum = add(sum, div(from(1.0), dd_sqrt(from(n))));

    const dd s = from(0.5);
    const dd Nd = from(static_cast<double>(N));
    const dd sqrtN = dd_sqrt(Nd);
    // N^{1-s}/(s-1) = N^{1/2} / (-1/2) = -2 sqrt(N)
    sum = add(sum, mul(from(-2.0), sqrtN));
    // + N^{-s}/2
    sum = add(sum, div(from(0.5), sqrtN));

    // correction terms
    dd rising = s;                      // (s)_{2k-1}, k = 1
    dd npow = div(div(from(1.0), sqrtN), Nd); // N^{-s-1}
    dd fact2k = from(2.0);              // (2k)!
    for (int k = 1; k <= M; ++k) {
        dd bk = div(from(bnum[k - 1]), from(bden[k - 1]));
        dd term = mul(div(bk, fact2k), mul(rising, npow));
        sum = add(sum, term);
        // advance (s)_{2k-1} -> (s)_{2k+1}, N^{-s-2k+1} -> N^{-s-2k-1}, (2k)! -> (2k+2)!
        rising = mul(rising, mul(add(s, from(2.0 * k - 1.0)), add(s, from(2.0 * k))));
        npow = div(div(npow, Nd), Nd);
        fact2k = mul(fact2k, mul(from(2.0 * k + 1.0), from(2.0 * k + 2.0)));
    }
    return sum;
}

} // namespace ddtest

#endif
