#include "byos/llm/prompt_template.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "byos/error.hpp"

namespace byos::llm {

namespace {

constexpr const char* kTemplateNames[] = {"extraction", "cross_layer", "objective", "align",
                                          "bool",       "choice",      "menu",      "value"};

bool is_placeholder_char(char c) {
  return std::isupper(static_cast<unsigned char>(c)) != 0 || std::isdigit(static_cast<unsigned char>(c)) != 0 ||
         c == '_';
}

}  // namespace

std::string render_template(std::string_view text, const TemplateVars& vars) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '{' && i + 1 < text.size() && text[i + 1] == '{') {
      out.push_back('{');
      i += 2;
      continue;
    }
    if (c == '}' && i + 1 < text.size() && text[i + 1] == '}') {
      out.push_back('}');
      i += 2;
      continue;
    }
    if (c == '{') {
      std::size_t close = text.find('}', i + 1);
      if (close == std::string_view::npos) throw TemplateError("unterminated placeholder");
      auto name = text.substr(i + 1, close - i - 1);
      bool valid = !name.empty();
      for (char n : name) valid = valid && is_placeholder_char(n);
      if (!valid) throw TemplateError("malformed placeholder '{" + std::string(name) + "}'");
      auto it = vars.find(name);
      if (it == vars.end()) throw TemplateError("no value for placeholder {" + std::string(name) + "}");
      out += it->second;
      i = close + 1;
      continue;
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

TemplateSet TemplateSet::load(const std::filesystem::path& dir) {
  TemplateSet set;
  for (const char* name : kTemplateNames) {
    auto path = dir / (std::string(name) + ".txt");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TemplateError("missing template " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    set.templates_.emplace(name, buffer.str());
  }
  return set;
}

TemplateSet TemplateSet::defaults() { return load(default_templates_dir()); }

const std::string& TemplateSet::text(std::string_view name) const {
  auto it = templates_.find(name);
  if (it == templates_.end()) throw TemplateError("unknown template " + std::string(name));
  return it->second;
}

std::filesystem::path default_templates_dir() {
  if (const char* env = std::getenv("BYOS_TEMPLATES_DIR"); env != nullptr && *env != '\0') return env;
  return BYOS_DEFAULT_TEMPLATES_DIR;
}

}  // namespace byos::llm
