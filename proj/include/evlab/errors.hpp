#pragma once

#include <stdexcept>
#include <string>

namespace evlab {

// Base class for everything this library throws on purpose.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mismatched grids, dimensions or bundle shapes.
struct incompatible_error : error {
    using error::error;
};

// Euler stepping produced a non-finite state.
struct integration_error : error {
    integration_error(const std::string& what, std::size_t step)
        : error(what), step_index(step) {}
    std::size_t step_index;
};

// Config / report parsing, carries a 1-based line number.
struct parse_error : error {
    parse_error(const std::string& what, std::size_t line)
        : error(what + " (line " + std::to_string(line) + ")"), line_number(line) {}
    std::size_t line_number;
};

}  // namespace evlab
