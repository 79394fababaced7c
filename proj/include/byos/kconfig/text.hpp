#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace byos::text {

/// Replaces bytes that do not form valid UTF-8 with U+FFFD, so Latin-1
/// input survives as readable text.
std::string sanitize_utf8(std::string_view bytes);

/// Collapses every run of whitespace to one space and trims both ends.
std::string collapse_whitespace(std::string_view text);

std::string trim(std::string_view text);
std::string to_lower(std::string_view text);
std::string to_upper(std::string_view text);

/// Uppercase identifier made of [A-Z0-9_], e.g. "Memory options" -> "MEMORY_OPTIONS".
std::string slug(std::string_view text);

std::vector<std::string> split_lines(std::string_view text);

/// Lowercase alphanumeric word tokens.
std::vector<std::string> word_tokens(std::string_view text);

bool starts_with_icase(std::string_view text, std::string_view prefix);

/// `%.12g` formatting.
std::string format_double(double value);

}  // namespace byos::text
