#include <unistd.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>

#include "byos/engine/generate.hpp"
#include "byos/error.hpp"
#include "byos/kconfig/text.hpp"

namespace byos::engine {

namespace {

std::string shell_quote(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  out.push_back('\'');
  return out;
}

class TempFile {
 public:
  TempFile() {
    std::string pattern = (std::filesystem::temp_directory_path() / "byos-config-XXXXXX").string();
    int fd = ::mkstemp(pattern.data());
    if (fd < 0) throw ScorerError("cannot create a temporary file");
    ::close(fd);
    path_ = pattern;
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace

double SyntheticScorer::score(const KernelConfiguration& config, const reasoner::TuningObjective&) {
  double total = 0.0;
  for (const auto& [symbol, target] : targets_) {
    const Assignment* a = config.find(symbol);
    const std::string actual = a == nullptr ? "n" : value_text(a->type, a->value);
    if (actual != target) continue;
    auto w = weights_.find(symbol);
    total += w == weights_.end() ? 1.0 : w->second;
  }
  return total;
}

double CommandScorer::score(const KernelConfiguration& config, const reasoner::TuningObjective&) {
  TempFile file;
  {
    std::ofstream out(file.path(), std::ios::binary);
    out << emit_dotconfig(config);
    if (!out) throw ScorerError("cannot write " + file.path().string());
  }
  const std::string command = "timeout " + text::format_double(timeout_s_) + " sh -c " +
                              shell_quote(command_ + " \"$1\"") + " sh " + shell_quote(file.path().string()) +
                              " 2>/dev/null";
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) throw ScorerError("cannot run scorer command");
  std::string output;
  std::array<char, 4096> buffer{};
  while (std::size_t n = std::fread(buffer.data(), 1, buffer.size(), pipe)) output.append(buffer.data(), n);
  const int status = ::pclose(pipe);
  if (status != 0) throw ScorerError("scorer command failed with status " + std::to_string(status));

  std::smatch m;
  const std::regex pattern(pattern_);
  if (!std::regex_search(output, m, pattern)) throw ScorerError("scorer output has no number");
  const std::string number = m.size() > 1 && m[1].matched ? m[1].str() : m[0].str();
  try {
    return std::stod(number);
  } catch (const std::exception&) {
    throw ScorerError("scorer output '" + number + "' is not a number");
  }
}

}  // namespace byos::engine
