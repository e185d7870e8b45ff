#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace decarb {

// Generic model-assembly failure (bad grid, degenerate constraint window,
// unknown resource reference, duplicate names).
class BuildError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A referenced hourly/weekly series does not cover the requested point.
class DataGapError : public BuildError {
public:
    using BuildError::BuildError;
};

// Model exceeds what the bundled exact solver is allowed to attempt.
class ScaleGuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input stream (MPS/solution/CSV); carries a 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    int line() const { return line_; }

private:
    int line_ = 0;
};

class SolveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Aggregated scenario validation failure: one entry per violated invariant,
// each prefixed with a JSON-pointer-like path into the manifest.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> issues)
        : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

    const std::vector<std::string>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string out = "scenario validation failed:";
        for (const auto& s : issues) {
            out += "\n  - " + s;
        }
        return out;
    }
    std::vector<std::string> issues_;
};

} // namespace decarb
