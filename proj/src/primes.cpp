#include "zmom/primes.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <filesystem>

#include "zmom/errors.hpp"
#include "zmom/zeta.hpp"

namespace zmom {

namespace {

constexpr std::uint64_t kMaxSieveLimit = 1000000000ULL; // 10^9
constexpr std::uint64_t kSegmentSize = 1u << 20;

std::vector<std::uint32_t> small_primes_upto(std::uint32_t n) {
    std::vector<bool> comp(n + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j <= n; j += i) comp[j] = true;
    }
    return out;
}

} // namespace

PrimeTable sieve(std::uint64_t limit) {
    if (limit > kMaxSieveLimit)
        throw compute_error("sieve limit " + std::to_string(limit) + " exceeds 10^9");
    PrimeTable t;
    t.limit = limit;
    if (limit < 2) return t;

    const auto root = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(limit))) + 1;
    const auto base = small_primes_upto(root);

    std::vector<bool> seg;
    for (std::uint64_t lo = 2; lo <= limit; lo += kSegmentSize) {
        const std::uint64_t hi = std::min(limit, lo + kSegmentSize - 1);
        seg.assign(static_cast<std::size_t>(hi - lo + 1), false);
        for (std::uint64_t p : base) {
            if (p * p > hi) break;
            std::uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
            for (std::uint64_t j = start; j <= hi; j += p) seg[static_cast<std::size_t>(j - lo)] = true;
        }
        for (std::uint64_t n = lo; n <= hi; ++n)
            if (!seg[static_cast<std::size_t>(n - lo)]) t.primes.push_back(n);
    }
    return t;
}

double cos_prime_sum(double delta, double X, const PrimeTable& table) {
    if (!(X >= 2.0)) throw spec_error("cos_prime_sum requires X >= 2");
    if (!table.covers(X)) throw spec_error("prime table smaller than X");
    double s = 0.0;
    for (std::uint64_t p : table.primes) {
        if (static_cast<double>(p) > X) break;
        double lp = std::log(static_cast<double>(p));
        s += std::cos(delta * lp) / static_cast<double>(p);
    }
    return s;
}

double cos_prime_sum_gap(double delta, double X, const PrimeTable& table) {
    const double lhs = cos_prime_sum(delta, X, table);
    const std::complex<double> z = zeta_one(delta, 1.0 / std::log(X));
    return lhs - std::log(std::abs(z));
}

namespace {

void put_u32(std::FILE* f, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    std::fwrite(b, 1, 4, f);
}

void put_u64(std::FILE* f, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    std::fwrite(b, 1, 8, f);
}

bool get_exact(std::FILE* f, void* dst, std::size_t n) { return std::fread(dst, 1, n, f) == n; }

std::uint32_t u32_le(const unsigned char* b) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

std::uint64_t u64_le(const unsigned char* b) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

struct FileCloser {
    std::FILE* f;
    ~FileCloser() {
        if (f) std::fclose(f);
    }
};

} // namespace

void write_prime_table(const PrimeTable& table, const std::string& path) {
    const std::string tmp = path + ".tmp";
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (!f) throw compute_error("cannot open " + tmp + " for writing");
    {
        FileCloser closer{f};
        std::fwrite("PTBL", 1, 4, f);
        put_u32(f, 1);
        put_u64(f, table.limit);
        put_u64(f, table.primes.size());
        std::uint64_t prev = 0;
        for (std::uint64_t p : table.primes) {
            std::uint64_t d = p - prev;
            if (d > 0xFFFF) throw compute_error("prime gap exceeds u16 in cache write");
            unsigned char b[2] = {static_cast<unsigned char>(d & 0xFF),
                                  static_cast<unsigned char>(d >> 8)};
            std::fwrite(b, 1, 2, f);
            prev = p;
        }
        if (std::ferror(f)) throw compute_error("write failure on " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

PrimeTable read_prime_table(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw compute_error("cannot open " + path);
    FileCloser closer{f};

    unsigned char hdr[4 + 4 + 8 + 8];
    if (!get_exact(f, hdr, sizeof hdr)) throw integrity_error("truncated prime cache header", 0);
    if (std::memcmp(hdr, "PTBL", 4) != 0) throw integrity_error("bad prime cache magic", 0);
    if (u32_le(hdr + 4) != 1) throw integrity_error("unsupported prime cache version", 4);

    PrimeTable t;
    t.limit = u64_le(hdr + 8);
    const std::uint64_t count = u64_le(hdr + 16);
    t.primes.reserve(count);
    std::uint64_t prev = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
        unsigned char b[2];
        if (!get_exact(f, b, 2))
            throw integrity_error("truncated prime cache body", sizeof hdr + 2 * i);
        prev += static_cast<std::uint64_t>(b[0]) | (static_cast<std::uint64_t>(b[1]) << 8);
        t.primes.push_back(prev);
    }
    return t;
}

} // namespace zmom
