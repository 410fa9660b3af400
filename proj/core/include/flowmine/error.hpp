#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flowmine {

// Bad user input: malformed files, invalid designs, unknown names.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A located input error. line and column are 1-based; column 0 means
// "whole line".
class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
        : InputError(format(what, line, column)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& what, std::size_t line, std::size_t column) {
        std::string loc = "line " + std::to_string(line);
        if (column != 0) {
            loc += ", column " + std::to_string(column);
        }
        return loc + ": " + what;
    }

    std::size_t line_;
    std::size_t column_;
};

// An internal consistency check failed. Maps to exit code 2 in the CLI.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace flowmine
