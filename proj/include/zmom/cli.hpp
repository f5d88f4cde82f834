#ifndef ZMOM_CLI_HPP
#define ZMOM_CLI_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace zmom {

// Everything a run needs; populated from the JSON config file first, then
// overridden by command-line flags. ZMOM_CACHE_DIR supplies the cache root
// when neither source sets it.
struct RunConfig {
    std::vector<double> T_list;
    std::vector<double> alphas;
    std::vector<double> betas;
    std::optional<double> delta;
    std::optional<double> step;
    std::string weight = "sharp";
    int threads = 0; // 0: hardware concurrency
    std::uint64_t seed = 1;
    std::string out;
    std::string cache_dir;
    bool no_timing = false;
};

// Entry point shared by the binary and the tests. Returns the process exit
// code: 0 success, 1 computation failure, 2 usage or validation failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace zmom

#endif
