#ifndef ZMOM_PRIMES_HPP
#define ZMOM_PRIMES_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace zmom {

struct PrimeTable {
    std::uint64_t limit = 0;
    std::vector<std::uint64_t> primes;

    bool covers(double x) const { return static_cast<double>(limit) >= x; }
};

// Segmented sieve of Eratosthenes. limit < 2 yields an empty table;
// limit > 10^9 is refused (resource error).
PrimeTable sieve(std::uint64_t limit);

// sum_{p <= X} cos(delta * log p) / p, as an exact finite sum over the table.
// Requires X >= 2 and table.limit >= X.
double cos_prime_sum(double delta, double X, const PrimeTable& table);

// cos_prime_sum(delta, X) - log|zeta(1 + 1/log X + i*delta)|: the residual of
// the prime-sum estimate, computed with both sides evaluated directly.
double cos_prime_sum_gap(double delta, double X, const PrimeTable& table);

// On-disk prime cache: magic "PTBL", version u32, limit u64, count u64, then
// u16 deltas between consecutive primes (first delta taken from 0), all
// little-endian.
void write_prime_table(const PrimeTable& table, const std::string& path);
PrimeTable read_prime_table(const std::string& path);

} // namespace zmom

#endif
