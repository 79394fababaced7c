#include "byos/llm/response_lines.hpp"

#include <cctype>

#include "byos/kconfig/text.hpp"

namespace byos::llm {

namespace {

std::string strip_bullet(std::string_view line) {
  std::string s = text::trim(line);
  if (s.starts_with("- ") || s.starts_with("* ") || s.starts_with("• ")) return text::trim(s.substr(s.find(' ') + 1));
  std::size_t i = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])) != 0) ++i;
  if (i > 0 && i + 1 < s.size() && (s[i] == '.' || s[i] == ')') && s[i + 1] == ' ') return text::trim(s.substr(i + 2));
  return s;
}

std::string strip_wrapping(std::string s, char open, char close) {
  if (s.size() >= 2 && s.front() == open && s.back() == close) return text::trim(s.substr(1, s.size() - 2));
  return s;
}

}  // namespace

std::optional<std::vector<std::string>> parse_tuple_line(std::string_view line) {
  std::string s = strip_bullet(line);
  if (!s.empty() && s.back() == ',') s = text::trim(s.substr(0, s.size() - 1));
  s = strip_wrapping(s, '(', ')');
  if (s.find('|') == std::string::npos) return std::nullopt;
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t bar = s.find('|', start);
    std::string field = text::trim(s.substr(start, bar == std::string::npos ? std::string::npos : bar - start));
    field = strip_wrapping(strip_wrapping(field, '"', '"'), '\'', '\'');
    if (field.empty()) return std::nullopt;
    fields.push_back(std::move(field));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return fields;
}

std::string clean_answer_line(std::string_view line) {
  std::string s = strip_bullet(line);
  for (int pass = 0; pass < 2; ++pass) {
    while (!s.empty() && (s.back() == '.' || s.back() == ',')) s.pop_back();
    s = strip_wrapping(text::trim(s), '(', ')');
    s = strip_wrapping(s, '"', '"');
    s = strip_wrapping(s, '\'', '\'');
    s = strip_wrapping(s, '`', '`');
  }
  return text::trim(s);
}

std::vector<std::string> response_lines(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& raw : text::split_lines(text)) {
    std::string line = text::trim(raw);
    if (!line.empty()) out.push_back(std::move(line));
  }
  return out;
}

}  // namespace byos::llm
