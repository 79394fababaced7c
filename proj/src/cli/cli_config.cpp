#include "byos/cli/cli_config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <variant>

#include "byos/error.hpp"
#include "byos/kconfig/text.hpp"

namespace byos::cli {

namespace {

using Scalar = std::variant<std::string, std::int64_t, double, bool>;

class Reader {
 public:
  Reader(std::string_view source, std::size_t line) : source_(source), line_(line) {}

  [[noreturn]] void fail(const std::string& message) const {
    throw ConfigError(std::string(source_) + ":" + std::to_string(line_) + ": " + message);
  }

  std::string string(const Scalar& v, std::string_view key) const {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    fail(std::string(key) + " must be a string");
  }

  std::int64_t integer(const Scalar& v, std::string_view key) const {
    if (const auto* n = std::get_if<std::int64_t>(&v)) return *n;
    fail(std::string(key) + " must be an integer");
  }

  double real(const Scalar& v, std::string_view key) const {
    if (const auto* d = std::get_if<double>(&v)) return *d;
    if (const auto* n = std::get_if<std::int64_t>(&v)) return static_cast<double>(*n);
    fail(std::string(key) + " must be a number");
  }

  bool boolean(const Scalar& v, std::string_view key) const {
    if (const auto* b = std::get_if<bool>(&v)) return *b;
    fail(std::string(key) + " must be true or false");
  }

 private:
  std::string_view source_;
  std::size_t line_;
};

std::string strip_comment(std::string_view line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quote != 0) {
      if (quote == '"' && c == '\\') {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return std::string(line.substr(0, i));
    }
  }
  return std::string(line);
}

Scalar parse_scalar(std::string_view text, const Reader& r) {
  if (text.empty()) r.fail("missing value");
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') r.fail("unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < text.size(); ++i) {
      char c = text[i];
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (i + 2 >= text.size()) r.fail("dangling escape");
      switch (text[++i]) {
        case 'n':
          out.push_back('\n');
          break;
        case 't':
          out.push_back('\t');
          break;
        case '"':
          out.push_back('"');
          break;
        case '\\':
          out.push_back('\\');
          break;
        default:
          r.fail("unknown escape");
      }
    }
    return out;
  }
  if (text.front() == '\'') {
    if (text.size() < 2 || text.back() != '\'') r.fail("unterminated string");
    return std::string(text.substr(1, text.size() - 2));
  }
  if (text == "true") return true;
  if (text == "false") return false;
  std::string digits;
  for (char c : text) {
    if (c != '_') digits.push_back(c);
  }
  std::int64_t n = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec == std::errc{} && p == digits.data() + digits.size()) return n;
  double d = 0;
  auto [q, ec2] = std::from_chars(digits.data(), digits.data() + digits.size(), d);
  if (ec2 == std::errc{} && q == digits.data() + digits.size()) return d;
  r.fail("cannot read value '" + std::string(text) + "'");
}

bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

std::string scalar_text(const Scalar& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* n = std::get_if<std::int64_t>(&v)) return std::to_string(*n);
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "y" : "n";
  return text::format_double(std::get<double>(v));
}

void apply(CliConfig& config, const std::string& section, const std::string& key, const Scalar& v, const Reader& r) {
  if (key == "api_key" || key == "token") r.fail("secrets are read from BYOS_API_KEY only");
  if (section == "client") {
    auto& c = config.client;
    if (key == "base_url") {
      c.base_url = r.string(v, key);
    } else if (key == "model") {
      c.model = r.string(v, key);
    } else if (key == "mode") {
      const std::string m = r.string(v, key);
      if (m == "live") {
        c.mode = ClientMode::Live;
      } else if (m == "record") {
        c.mode = ClientMode::Record;
      } else if (m == "replay") {
        c.mode = ClientMode::Replay;
      } else {
        r.fail("mode must be live, record or replay");
      }
    } else if (key == "cassette_path") {
      c.cassette_path = r.string(v, key);
    } else if (key == "max_inflight") {
      auto n = r.integer(v, key);
      if (n < 1) r.fail("max_inflight must be at least 1");
      c.max_inflight = static_cast<std::size_t>(n);
    } else if (key == "timeout_s") {
      auto n = r.integer(v, key);
      if (n < 1) r.fail("timeout_s must be at least 1");
      c.timeout_s = static_cast<int>(n);
    } else {
      r.fail("unknown key " + section + "." + key);
    }
  } else if (section == "reasoner") {
    auto& p = config.reasoner;
    if (key == "omega") {
      const std::string m = r.string(v, key);
      if (m == "uniform") {
        p.node_importance = reasoner::NodeImportance::Uniform;
      } else if (m == "degree") {
        p.node_importance = reasoner::NodeImportance::DegreeNormalized;
      } else {
        r.fail("omega must be uniform or degree");
      }
    } else if (key == "tau") {
      p.threshold = r.real(v, key);
    } else if (key == "max_hops") {
      p.max_hops = static_cast<int>(r.integer(v, key));
    } else {
      r.fail("unknown key " + section + "." + key);
    }
  } else if (section == "reasoner.sigma") {
    config.reasoner.relation_strength[key] = r.real(v, key);
  } else if (section == "engine") {
    auto& e = config.engine;
    if (key == "bool_batch_size") {
      auto n = r.integer(v, key);
      if (n < 1 || n > 9) r.fail("bool_batch_size must be between 1 and 9");
      e.bool_batch_size = static_cast<std::size_t>(n);
    } else if (key == "tristate_increase_value") {
      const std::string t = r.string(v, key);
      if (t == "y") {
        e.tristate_increase_value = kconfig::Tristate::y;
      } else if (t == "m") {
        e.tristate_increase_value = kconfig::Tristate::m;
      } else {
        r.fail("tristate_increase_value must be y or m");
      }
    } else if (key == "step2_enabled") {
      e.step2_enabled = r.boolean(v, key);
    } else {
      r.fail("unknown key " + section + "." + key);
    }
  } else if (section == "scorer") {
    auto& s = config.scorer;
    if (key == "kind") {
      const std::string k = r.string(v, key);
      if (k == "none") {
        s.kind = ScorerKind::None;
      } else if (k == "synthetic") {
        s.kind = ScorerKind::Synthetic;
      } else if (k == "command") {
        s.kind = ScorerKind::Command;
      } else {
        r.fail("scorer kind must be none, synthetic or command");
      }
    } else if (key == "command") {
      s.command = r.string(v, key);
    } else if (key == "timeout_s") {
      s.timeout_s = r.real(v, key);
      if (!(s.timeout_s > 0)) r.fail("timeout_s must be positive");
    } else if (key == "pattern") {
      s.pattern = r.string(v, key);
    } else {
      r.fail("unknown key " + section + "." + key);
    }
  } else if (section == "scorer.targets") {
    config.scorer.targets[key] = scalar_text(v);
  } else if (section == "scorer.weights") {
    config.scorer.weights[key] = r.real(v, key);
  } else if (section == "paths") {
    if (key == "kg_path") {
      config.paths.kg_path = r.string(v, key);
    } else if (key == "templates_dir") {
      config.paths.templates_dir = r.string(v, key);
    } else {
      r.fail("unknown key " + section + "." + key);
    }
  } else {
    r.fail("key outside a known section");
  }
}

const std::set<std::string, std::less<>> kSections = {"client", "reasoner", "reasoner.sigma", "engine",
                                                      "scorer", "scorer.targets", "scorer.weights", "paths"};

}  // namespace

std::string_view to_string(ClientMode mode) {
  switch (mode) {
    case ClientMode::Live:
      return "live";
    case ClientMode::Record:
      return "record";
    case ClientMode::Replay:
      return "replay";
  }
  return "replay";
}

void CliConfig::validate() const {
  reasoner.validate();
  if (engine.bool_batch_size < 1 || engine.bool_batch_size > 9) {
    throw ConfigError("bool_batch_size must be between 1 and 9");
  }
  if (scorer.kind == ScorerKind::Command && scorer.command.empty()) throw ConfigError("scorer command is empty");
  if (client.max_inflight < 1) throw ConfigError("max_inflight must be at least 1");
}

CliConfig parse_cli_config(std::string_view text, std::string_view source) {
  CliConfig config;
  std::string section;
  std::set<std::string> seen;
  std::size_t number = 0;
  for (const auto& raw : text::split_lines(text)) {
    ++number;
    const Reader r(source, number);
    const std::string line = text::trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') r.fail("malformed section header");
      section = text::trim(line.substr(1, line.size() - 2));
      if (kSections.count(section) == 0) r.fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) r.fail("expected key = value");
    std::string key = text::trim(line.substr(0, eq));
    if (key.size() >= 2 && key.front() == '"' && key.back() == '"') key = key.substr(1, key.size() - 2);
    if (!valid_key(key)) r.fail("invalid key '" + key + "'");
    if (!seen.insert(section + "." + key).second) r.fail("duplicate key " + key);
    apply(config, section, key, parse_scalar(text::trim(line.substr(eq + 1)), r), r);
  }
  config.validate();
  return config;
}

CliConfig load_cli_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_cli_config(buffer.str(), path.string());
}

}  // namespace byos::cli
