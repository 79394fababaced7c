#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace byos::llm {

using TemplateVars = std::map<std::string, std::string, std::less<>>;

/// Substitutes `{NAME}` placeholders (NAME is [A-Z0-9_]+); `{{` and `}}` are
/// literal braces. A placeholder without a value is a TemplateError.
std::string render_template(std::string_view text, const TemplateVars& vars);

/// Prompt templates loaded from `<dir>/<name>.txt`.
class TemplateSet {
 public:
  static TemplateSet load(const std::filesystem::path& dir);
  /// The templates shipped with the library.
  static TemplateSet defaults();

  const std::string& text(std::string_view name) const;
  std::string render(std::string_view name, const TemplateVars& vars) const { return render_template(text(name), vars); }

 private:
  std::map<std::string, std::string, std::less<>> templates_;
};

std::filesystem::path default_templates_dir();

}  // namespace byos::llm
