#ifndef ZMOM_VERIFY_HPP
#define ZMOM_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace zmom {

// One verification suite run: `instances` checks attempted, `failures` of
// them outside their permitted slack, and the worst observed ratio of
// measured quantity to its ceiling (<= 1 means pass for every suite).
struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    int instances = 0;
    int failures = 0;
    double max_observed_ratio = 0.0;
    std::vector<std::string> notes;
};

// Known suites: taylor, mv, splitting, primesum, afe, coeffs, holder.
const std::vector<std::string>& verify_suite_names();
bool is_verify_suite(const std::string& name);

SuiteReport run_verify_suite(const std::string& name, std::uint64_t seed, int threads);

} // namespace zmom

#endif
