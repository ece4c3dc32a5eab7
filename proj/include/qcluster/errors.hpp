#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcluster {

/// A problem size exceeds a hard enumeration or memory guard.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// A linear-algebra step failed (e.g. a Gram matrix that is not positive definite).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text, reported with the offending 1-based line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string &message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Invalid experiment configuration. Carries every problem found, each
/// prefixed by the JSON path of the offending field.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems)
        : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

    const std::vector<std::string> &problems() const { return problems_; }

private:
    static std::string join(const std::vector<std::string> &problems) {
        std::string out = "invalid configuration";
        for (const auto &p : problems) {
            out += "\n  " + p;
        }
        return out;
    }

    std::vector<std::string> problems_;
};

} // namespace qcluster
