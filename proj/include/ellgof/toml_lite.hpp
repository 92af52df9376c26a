#pragma once

#include <string_view>

#include <json.hpp>

namespace ellgof {

/// Parses the TOML subset used by experiment spec files into a JSON tree:
/// comments, [tables], [[arrays of tables]], dotted/bare keys, basic
/// strings with the usual escapes, integers, floats (including inf/nan),
/// booleans, and (possibly multi-line, nested) arrays. Dates, inline tables
/// and literal strings are not supported. Duplicate keys are an error.
/// Malformed input raises config_error with a line number.
nlohmann::json parse_toml(std::string_view text);

nlohmann::json load_toml(const std::string& path);

}  // namespace ellgof
