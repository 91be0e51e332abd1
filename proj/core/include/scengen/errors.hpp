#pragma once

#include <stdexcept>
#include <string>

namespace scengen {

// Raised for malformed input documents, invalid configurations and violated
// preconditions. The CLI maps this to exit code 2; everything else derived
// from std::runtime_error maps to exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace scengen
