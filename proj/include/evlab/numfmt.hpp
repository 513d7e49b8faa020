#pragma once

#include <optional>
#include <string>
#include <string_view>

// Locale-independent, shortest round-trip number formatting. Reports and
// CSV dumps go through these helpers so reruns are byte-identical.

namespace evlab {

std::string format_number(double v);
std::string format_number(long long v);

std::optional<double> parse_number(std::string_view s);

}  // namespace evlab
