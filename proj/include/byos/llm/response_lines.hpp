#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace byos::llm {

/// Splits a response line of the form `(a | b | c)` into trimmed fields.
/// Parentheses, list bullets and enumerators are optional. Returns nullopt for
/// lines without a `|` separator or with an empty field.
std::optional<std::vector<std::string>> parse_tuple_line(std::string_view line);

/// A single free-text answer: bullets, surrounding parentheses and quotes removed.
std::string clean_answer_line(std::string_view line);

/// Non-blank lines of a response, trimmed.
std::vector<std::string> response_lines(std::string_view text);

}  // namespace byos::llm
