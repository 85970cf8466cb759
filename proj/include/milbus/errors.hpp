#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace milbus {

// Base class for all library failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input data failed a structural or range check.
struct ValidationError : Error {
    using Error::Error;
};

// A text input (log line, model file, topology file) could not be parsed.
// line is 1-based; 0 means the failure is not tied to a single line.
struct ParseError : Error {
    ParseError(std::size_t line_no, const std::string& message)
        : Error(line_no ? "line " + std::to_string(line_no) + ": " + message : message),
          line(line_no) {}
    std::size_t line = 0;
};

}  // namespace milbus
