#pragma once

#include <stdexcept>
#include <string>

namespace cylfit {

// Degenerate geometry: the requested quantity is not uniquely defined for
// this input (rank-deficient cloud, zero radius, ...).
struct DegenerateInputError : std::runtime_error {
    explicit DegenerateInputError(const std::string& what) : std::runtime_error(what) {}
};

// The computation produced non-finite values.
struct NumericFailureError : std::runtime_error {
    explicit NumericFailureError(const std::string& what) : std::runtime_error(what) {}
};

struct CsvParseError : std::runtime_error {
    CsvParseError(int line_number_, std::string line_, const std::string& reason)
        : std::runtime_error("line " + std::to_string(line_number_) + ": " + reason +
                             " (\"" + line_ + "\")"),
          line_number(line_number_),
          line(std::move(line_)) {}

    int line_number;
    std::string line;
};

} // namespace cylfit
