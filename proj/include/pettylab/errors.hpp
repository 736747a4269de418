#pragma once

#include <stdexcept>
#include <string>

namespace pettylab {

// Bad or inconsistent input data. The CLI maps this to exit code 2.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// A numeric routine failed to converge or hit a conditioning guard.
// The CLI maps this to exit code 3.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pettylab
