#pragma once

#include <genfn/value.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace genfn {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position);
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Reads exactly one s-expression. Symbols are case-folded; `()` and `nil` read as nil.
/// Supports integers, floats, double-quoted strings with backslash escapes,
/// proper lists and `;` line comments.
Value read_sexpr(std::string_view text);

std::string print_sexpr(const Value& v);

} // namespace genfn
