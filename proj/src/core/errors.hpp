#pragma once

#include <stdexcept>
#include <string>

namespace tsr {

// Contract violations (bad shapes, out-of-range parameters) are reported as
// std::invalid_argument. The types below distinguish failure classes that
// callers may want to handle differently (and that the C API maps to codes).

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid experiment configuration (bad reducer spec, impossible grid).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tsr
