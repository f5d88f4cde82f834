#ifndef ZMOM_ERRORS_HPP
#define ZMOM_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace zmom {

// Invalid problem specification or bad usage. CLI maps this to exit code 2.
struct spec_error : std::runtime_error {
    explicit spec_error(const std::string& msg) : std::runtime_error("invalid-spec: " + msg) {}
};

// A computation that cannot be carried out at the requested size/tolerance.
// CLI maps this to exit code 1.
struct compute_error : std::runtime_error {
    explicit compute_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Corrupt or malformed on-disk data; carries the byte offset of the problem.
struct integrity_error : std::runtime_error {
    std::uint64_t byte_offset;
    integrity_error(const std::string& msg, std::uint64_t offset)
        : std::runtime_error(msg + " (byte offset " + std::to_string(offset) + ")"),
          byte_offset(offset) {}
};

} // namespace zmom

#endif
