#pragma once

#include <stdexcept>
#include <string>

namespace qspell {

/// Invalid input data or configuration. Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Everything else that goes wrong at runtime. Maps to CLI exit code 2.
class RuntimeFailure : public std::runtime_error {
public:
    explicit RuntimeFailure(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qspell
