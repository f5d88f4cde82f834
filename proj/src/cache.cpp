#include "zmom/cache.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>

#include "zmom/errors.hpp"

namespace zmom {

namespace {

namespace fs = std::filesystem;

void put_bytes(std::FILE* f, const void* p, std::size_t n) {
    if (std::fwrite(p, 1, n, f) != n) throw compute_error("cache write failure");
}

void put_u32(std::FILE* f, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    put_bytes(f, b, 4);
}

void put_u64(std::FILE* f, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    put_bytes(f, b, 8);
}

void put_f64(std::FILE* f, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(f, bits);
}

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

double f64_le(const unsigned char* b) {
    std::uint64_t bits = u64_le(b);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

struct FileCloser {
    std::FILE* f;
    ~FileCloser() {
        if (f) std::fclose(f);
    }
};

} // namespace

void write_zeta_cache(const ZetaGrid& grid, const std::string& path) {
    const std::string tmp = path + ".tmp";
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (!f) throw compute_error("cannot open " + tmp + " for writing");
    {
        FileCloser closer{f};
        put_bytes(f, "ZMC1", 4);
        put_u32(f, 1);
        put_f64(f, grid.t0);
        put_f64(f, grid.step);
        put_u64(f, grid.v.size());
        for (const auto& z : grid.v) {
            put_f64(f, z.real());
            put_f64(f, z.imag());
        }
    }
    fs::rename(tmp, path);
}

ZetaGrid read_zeta_cache(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw compute_error("cannot open " + path);
    FileCloser closer{f};

    unsigned char hdr[4 + 4 + 8 + 8 + 8];
    if (std::fread(hdr, 1, sizeof hdr, f) != sizeof hdr)
        throw integrity_error("truncated cache header", 0);
    if (std::memcmp(hdr, "ZMC1", 4) != 0) throw integrity_error("bad cache magic", 0);
    if (u32_le(hdr + 4) != 1) throw integrity_error("unsupported cache version", 4);

    ZetaGrid g;
    g.t0 = f64_le(hdr + 8);
    g.step = f64_le(hdr + 16);
    const std::uint64_t count = u64_le(hdr + 24);
    g.v.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        unsigned char b[16];
        if (std::fread(b, 1, 16, f) != 16)
            throw integrity_error("truncated cache body", sizeof hdr + 16 * i);
        g.v.emplace_back(f64_le(b), f64_le(b + 8));
    }
    return g;
}

std::string zeta_cache_name(double t0, double step, std::size_t count) {
    std::uint64_t b0, b1;
    std::memcpy(&b0, &t0, 8);
    std::memcpy(&b1, &step, 8);
    char buf[80];
    std::snprintf(buf, sizeof buf, "zeta_%016llx_%016llx_%llu.zmc",
                  static_cast<unsigned long long>(b0), static_cast<unsigned long long>(b1),
                  static_cast<unsigned long long>(count));
    return buf;
}

GridStore::GridStore(std::string dir, ZetaGridProvider compute)
    : dir_(std::move(dir)), compute_(std::move(compute)) {
    fs::create_directories(dir_);
}

ZetaGrid GridStore::get(double t0, double step, std::size_t count) {
    const fs::path path = fs::path(dir_) / zeta_cache_name(t0, step, count);
    if (fs::exists(path)) {
        ZetaGrid g = read_zeta_cache(path.string());
        if (g.v.size() == count && g.t0 == t0 && g.step == step) return g;
        throw integrity_error("cache file disagrees with its key: " + path.string(), 8);
    }
    ZetaGrid g = compute_(t0, step, count);
    write_zeta_cache(g, path.string());
    return g;
}

ZetaGridProvider GridStore::as_provider() {
    return [this](double t0, double step, std::size_t count) { return get(t0, step, count); };
}

GridStore::Info GridStore::info() const {
    Info inf;
    if (!fs::exists(dir_)) return inf;
    for (const auto& e : fs::directory_iterator(dir_)) {
        if (!e.is_regular_file() || e.path().extension() != ".zmc") continue;
        ++inf.files;
        inf.bytes += e.file_size();
    }
    return inf;
}

std::size_t GridStore::clear() {
    std::size_t removed = 0;
    if (!fs::exists(dir_)) return removed;
    for (const auto& e : fs::directory_iterator(dir_)) {
        if (!e.is_regular_file() || e.path().extension() != ".zmc") continue;
        fs::remove(e.path());
        ++removed;
    }
    return removed;
}

} // namespace zmom
