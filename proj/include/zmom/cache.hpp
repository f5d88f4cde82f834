#ifndef ZMOM_CACHE_HPP
#define ZMOM_CACHE_HPP

#include <string>

#include "zmom/moments.hpp"
#include "zmom/zeta.hpp"

namespace zmom {

// Binary sample cache, little-endian:
//   magic "ZMC1" | version u32 = 1 | t0 f64 | step f64 | count u64
//   | count * (re f64, im f64).
// Writes go to a temp file and are renamed into place; readers reject wrong
// magic/version and report the byte offset of any truncation.
void write_zeta_cache(const ZetaGrid& grid, const std::string& path);
ZetaGrid read_zeta_cache(const std::string& path);

// Canonical file name for a grid, derived from the exact bit patterns of
// (t0, step) and the count.
std::string zeta_cache_name(double t0, double step, std::size_t count);

// Directory-backed store: get() serves from disk when a matching file exists
// and otherwise computes via the wrapped provider and commits the result.
class GridStore {
public:
    GridStore(std::string dir, ZetaGridProvider compute);

    ZetaGrid get(double t0, double step, std::size_t count);
    ZetaGridProvider as_provider();

    // Number of cache files / total bytes under the directory.
    struct Info {
        std::size_t files = 0;
        std::uintmax_t bytes = 0;
    };
    Info info() const;
    std::size_t clear(); // returns files removed

    const std::string& dir() const { return dir_; }

private:
    std::string dir_;
    ZetaGridProvider compute_;
};

} // namespace zmom

#endif
