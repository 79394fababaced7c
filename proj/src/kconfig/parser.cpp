#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "byos/error.hpp"
#include "byos/kconfig/lexer.hpp"
#include "byos/kconfig/space.hpp"
#include "byos/kconfig/text.hpp"

namespace byos::kconfig {

namespace {

namespace fs = std::filesystem;

constexpr std::size_t kNoNode = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kMaxSourceDepth = 64;

enum class FrameKind { If, Menu, Choice };

struct Frame {
  FrameKind kind;
  ExprPtr condition;            // If frames
  std::size_t node = kNoNode;   // Menu / Choice frames
  SourceLocation where;
};

// A condition captured at declaration time: either a literal `if` condition or
// a reference to a container whose own `depends on` is read at finalization.
struct Enclosing {
  ExprPtr condition;
  std::size_t container = kNoNode;
};

enum class NodeKind { Config, Menu, Choice, Comment };

struct RawNode {
  NodeKind kind = NodeKind::Config;
  ConfigOption option;
  std::string name_hint;
  bool typed = false;
  ExprPtr own_depends;
  std::vector<Enclosing> enclosing;
  std::size_t parent = kNoNode;
  std::size_t choice = kNoNode;
  std::string final_name;
  ExprPtr full_depends;
};

std::optional<std::int64_t> parse_integer(std::string_view text) {
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    base = 16;
    text.remove_prefix(2);
  }
  if (text.empty()) return std::nullopt;
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, base);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return negative ? -value : value;
}

std::size_t indent_width(std::string_view line) {
  std::size_t col = 0;
  for (char c : line) {
    if (c == ' ') {
      ++col;
    } else if (c == '\t') {
      col = (col / 8 + 1) * 8;
    } else {
      break;
    }
  }
  return col;
}

std::string expand_tabs(std::string_view line) {
  std::string out;
  for (char c : line) {
    if (c == '\t') {
      do {
        out.push_back(' ');
      } while (out.size() % 8 != 0);
    } else {
      out.push_back(c);
    }
  }
  return out;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; });
}

bool is_keyword(std::string_view word) {
  static const std::set<std::string_view> kKeywords = {
      "config",   "menuconfig", "choice",  "endchoice", "menu",     "endmenu",     "if",
      "endif",    "source",     "osource", "rsource",   "orsource", "comment",     "mainmenu",
      "bool",     "boolean",    "tristate", "int",      "hex",      "string",      "def_bool",
      "def_tristate", "prompt", "default", "depends",   "select",   "imply",       "range",
      "help",     "optional",   "visible", "option",    "modules",  "transitional"};
  return kKeywords.count(word) != 0;
}

// `NAME :=`, `NAME +=` or `NAME =` at the start of a line.
bool is_macro_assignment(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])) != 0) ++i;
  std::size_t start = i;
  while (i < line.size() && (std::isalnum(static_cast<unsigned char>(line[i])) != 0 || line[i] == '_' || line[i] == '-')) ++i;
  if (i == start) return false;
  if (is_keyword(line.substr(start, i - start))) return false;
  while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])) != 0) ++i;
  auto rest = line.substr(i);
  return rest.starts_with(":=") || rest.starts_with("+=") || rest.starts_with("=");
}

class Parser {
 public:
  Parser(fs::path root_dir, const Environment& env) : root_dir_(std::move(root_dir)), env_(env) {}

  void parse_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound(display_name(path));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    parse_text(buffer.str(), display_name(path), path.parent_path());
  }

  void parse_text(std::string_view bytes, const std::string& file, const fs::path& dir) {
    if (source_depth_ >= kMaxSourceDepth) throw SyntaxError(file, 1, "source nesting too deep");
    ++source_depth_;
    const std::size_t depth_at_entry = stack_.size();
    const std::string text = text::sanitize_utf8(bytes);
    const auto lines = text::split_lines(text);

    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::size_t line_no = i + 1;
      const std::string& raw = lines[i];
      if (help_target_ != kNoNode) {
        if (consume_help_line(raw)) continue;
      }
      std::string logical = raw;
      std::size_t consumed = 0;
      while (!logical.empty() && logical.back() == '\\' && i + consumed + 1 < lines.size()) {
        logical.pop_back();
        ++consumed;
        logical += lines[i + consumed];
      }
      handle_line(logical, SourceLocation{file, line_no}, dir);
      i += consumed;
    }
    finish_help();
    end_entry();
    if (stack_.size() != depth_at_entry) {
      const Frame& open = stack_.back();
      throw SyntaxError(open.where.file, open.where.line, "block is not closed before end of file");
    }
    --source_depth_;
  }

  ConfigSpace finalize();

 private:
  std::string display_name(const fs::path& path) const {
    auto rel = path.lexically_normal().lexically_relative(root_dir_.lexically_normal());
    if (rel.empty() || rel.native().starts_with("..")) return path.lexically_normal().generic_string();
    return rel.generic_string();
  }

  // Returns true when the line belonged to the help block.
  bool consume_help_line(const std::string& raw) {
    if (is_blank(raw)) {
      help_lines_.emplace_back();
      return true;
    }
    std::size_t indent = indent_width(raw);
    if (!help_indent_) {
      if (indent == 0) {
        finish_help();
        return false;
      }
      help_indent_ = indent;
    }
    if (indent < *help_indent_) {
      finish_help();
      return false;
    }
    help_lines_.push_back(expand_tabs(raw).substr(*help_indent_));
    return true;
  }

  void finish_help() {
    if (help_target_ == kNoNode) return;
    while (!help_lines_.empty() && is_blank(help_lines_.back())) help_lines_.pop_back();
    std::string joined;
    for (std::size_t k = 0; k < help_lines_.size(); ++k) {
      if (k != 0) joined.push_back('\n');
      joined += help_lines_[k];
    }
    auto& option = nodes_[help_target_].option;
    if (!joined.empty() || !option.help_text) option.help_text = joined;
    help_target_ = kNoNode;
    help_indent_.reset();
    help_lines_.clear();
  }

  void end_entry() { current_ = kNoNode; }

  std::vector<Enclosing> capture_enclosing() const {
    std::vector<Enclosing> out;
    for (const Frame& f : stack_) {
      if (f.kind == FrameKind::If) {
        out.push_back({f.condition, kNoNode});
      } else {
        out.push_back({nullptr, f.node});
      }
    }
    return out;
  }

  std::size_t innermost_container() const {
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
      if (it->kind != FrameKind::If) return it->node;
    }
    return kNoNode;
  }

  std::size_t add_node(NodeKind kind, const SourceLocation& where) {
    RawNode node;
    node.kind = kind;
    node.option.location = where;
    node.enclosing = capture_enclosing();
    node.parent = innermost_container();
    nodes_.push_back(std::move(node));
    return nodes_.size() - 1;
  }

  [[noreturn]] void fail(const SourceLocation& where, const std::string& message) const {
    throw SyntaxError(where.file, where.line, message);
  }

  ExprPtr expression(std::span<const Token> tokens, const SourceLocation& where) const {
    ExprParser parser(tokens);
    auto expr = parser.parse_expression();
    if (!parser.at_end()) fail(where, "unexpected token '" + tokens[parser.position()].text + "'");
    return expr;
  }

  // Splits `tokens[start..]` at a top-level `if` into value tokens and guard.
  std::pair<std::span<const Token>, ExprPtr> split_guard(std::span<const Token> tokens, std::size_t start,
                                                          const SourceLocation& where) const {
    int depth = 0;
    for (std::size_t k = start; k < tokens.size(); ++k) {
      const Token& t = tokens[k];
      if (t.kind == TokenKind::LParen) ++depth;
      if (t.kind == TokenKind::RParen) --depth;
      if (depth == 0 && t.kind == TokenKind::Word && t.text == "if") {
        if (k + 1 >= tokens.size()) fail(where, "missing condition after 'if'");
        return {tokens.subspan(start, k - start), expression(tokens.subspan(k + 1), where)};
      }
    }
    return {tokens.subspan(start), nullptr};
  }

  std::string substitute_env(std::string_view path, const SourceLocation& where) const {
    std::string out;
    std::size_t i = 0;
    while (i < path.size()) {
      if (path[i] == '$') {
        if (i + 1 >= path.size() || path[i + 1] != '(') throw UnsupportedConstruct("macro", where.file, where.line);
        std::size_t close = path.find(')', i + 2);
        if (close == std::string_view::npos) fail(where, "unterminated '$(' in source path");
        auto var = path.substr(i + 2, close - i - 2);
        bool identifier = !var.empty() && std::all_of(var.begin(), var.end(), [](char c) {
          return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
        });
        if (!identifier) throw UnsupportedConstruct("macro", where.file, where.line);
        if (auto it = env_.find(var); it != env_.end()) out += it->second;
        i = close + 1;
      } else {
        out.push_back(path[i++]);
      }
    }
    return out;
  }

  void handle_source(std::string_view keyword, std::string_view line, const SourceLocation& where,
                     const fs::path& dir) {
    auto open = line.find('"');
    auto close = open == std::string_view::npos ? open : line.find('"', open + 1);
    if (open == std::string_view::npos || close == std::string_view::npos) fail(where, "source expects a quoted path");
    auto trailing = text::trim(line.substr(close + 1));
    if (!trailing.empty() && trailing.front() != '#') fail(where, "unexpected text after source path");
    std::string path = substitute_env(line.substr(open + 1, close - open - 1), where);
    if (path.find_first_of("*?[") != std::string::npos) {
      throw UnsupportedConstruct("source glob", where.file, where.line);
    }
    const bool relative_to_file = keyword == "rsource" || keyword == "orsource";
    const bool optional = keyword == "osource" || keyword == "orsource";
    fs::path target = fs::path(path).is_absolute() ? fs::path(path) : (relative_to_file ? dir : root_dir_) / path;
    std::error_code ec;
    if (!fs::is_regular_file(target, ec)) {
      if (optional) return;
      throw FileNotFound(display_name(target));
    }
    parse_file(target);
  }

  void handle_line(const std::string& line, const SourceLocation& where, const fs::path& dir) {
    auto trimmed = text::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') return;
    if (trimmed == "---help---") {
      start_help(where);
      return;
    }
    if (is_macro_assignment(trimmed)) throw UnsupportedConstruct("macro assignment", where.file, where.line);

    auto first_space = trimmed.find_first_of(" \t");
    std::string keyword = trimmed.substr(0, first_space);
    if (keyword == "source" || keyword == "osource" || keyword == "rsource" || keyword == "orsource") {
      end_entry();
      handle_source(keyword, trimmed, where, dir);
      return;
    }

    std::vector<Token> tokens;
    try {
      tokens = tokenize(trimmed);
      dispatch(tokens, where);
    } catch (const LineError& e) {
      if (e.unsupported()) throw UnsupportedConstruct(e.what(), where.file, where.line);
      throw SyntaxError(where.file, where.line, e.what());
    }
  }

  const Token& expect(std::span<const Token> tokens, std::size_t index, TokenKind kind, const char* what,
                      const SourceLocation& where) const {
    if (index >= tokens.size() || tokens[index].kind != kind) fail(where, std::string("expected ") + what);
    return tokens[index];
  }

  void dispatch(std::span<const Token> tokens, const SourceLocation& where) {
    if (tokens.empty()) return;
    if (tokens[0].kind != TokenKind::Word) fail(where, "expected keyword");
    const std::string& kw = tokens[0].text;

    if (kw == "config" || kw == "menuconfig") {
      const auto& name = expect(tokens, 1, TokenKind::Word, "symbol name", where);
      if (tokens.size() > 2) fail(where, "unexpected text after symbol name");
      end_entry();
      std::size_t idx = add_node(NodeKind::Config, where);
      nodes_[idx].option.name = name.text;
      nodes_[idx].option.menuconfig = kw == "menuconfig";
      if (nodes_[idx].parent != kNoNode && nodes_[nodes_[idx].parent].kind == NodeKind::Choice &&
          stack_innermost_is_choice_scope()) {
        nodes_[idx].choice = nodes_[idx].parent;
      }
      current_ = idx;
    } else if (kw == "choice") {
      end_entry();
      std::size_t idx = add_node(NodeKind::Choice, where);
      nodes_[idx].option.type = OptionType::Choice;
      nodes_[idx].typed = true;
      if (tokens.size() > 1) nodes_[idx].option.name = expect(tokens, 1, TokenKind::Word, "choice name", where).text;
      stack_.push_back({FrameKind::Choice, nullptr, idx, where});
      current_ = idx;
    } else if (kw == "endchoice") {
      end_entry();
      pop_frame(FrameKind::Choice, "endchoice", where);
    } else if (kw == "menu") {
      const auto& title = expect(tokens, 1, TokenKind::String, "menu title", where);
      end_entry();
      std::size_t idx = add_node(NodeKind::Menu, where);
      if (nodes_[idx].parent != kNoNode && nodes_[nodes_[idx].parent].kind == NodeKind::Choice) {
        fail(where, "menu inside choice");
      }
      nodes_[idx].option.type = OptionType::Menu;
      nodes_[idx].option.prompt = title.text;
      nodes_[idx].name_hint = title.text;
      nodes_[idx].typed = true;
      stack_.push_back({FrameKind::Menu, nullptr, idx, where});
      current_ = idx;
    } else if (kw == "endmenu") {
      end_entry();
      pop_frame(FrameKind::Menu, "endmenu", where);
    } else if (kw == "if") {
      if (tokens.size() < 2) fail(where, "missing condition after 'if'");
      end_entry();
      stack_.push_back({FrameKind::If, expression(tokens.subspan(1), where), kNoNode, where});
    } else if (kw == "endif") {
      end_entry();
      pop_frame(FrameKind::If, "endif", where);
    } else if (kw == "comment") {
      expect(tokens, 1, TokenKind::String, "comment text", where);
      end_entry();
      current_ = add_node(NodeKind::Comment, where);
    } else if (kw == "mainmenu") {
      const auto& title = expect(tokens, 1, TokenKind::String, "mainmenu title", where);
      end_entry();
      if (label_.empty()) label_ = title.text;
    } else {
      if (current_ == kNoNode) fail(where, "'" + kw + "' outside of an entry");
      property(tokens, where);
    }
  }

  // A config is a choice member only when no menu sits between it and the
  // choice; menus inside choices are rejected above.
  bool stack_innermost_is_choice_scope() const {
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
      if (it->kind == FrameKind::Choice) return true;
      if (it->kind == FrameKind::Menu) return false;
    }
    return false;
  }

  void pop_frame(FrameKind kind, const char* keyword, const SourceLocation& where) {
    if (stack_.empty() || stack_.back().kind != kind) fail(where, std::string("unexpected '") + keyword + "'");
    stack_.pop_back();
  }

  void start_help(const SourceLocation& where) {
    if (current_ == kNoNode) fail(where, "help outside of an entry");
    help_target_ = current_;
    help_indent_.reset();
    help_lines_.clear();
  }

  void set_type(RawNode& node, OptionType type, const SourceLocation& where) {
    if (node.kind == NodeKind::Menu || node.kind == NodeKind::Comment) fail(where, "type on menu or comment");
    if (node.kind == NodeKind::Choice) {
      if (type != OptionType::Bool && type != OptionType::Tristate) fail(where, "choice type must be bool or tristate");
      choice_member_type_[&node - nodes_.data()] = type;
      return;
    }
    if (node.typed && node.option.type != type) fail(where, "conflicting types for " + node.option.name);
    node.option.type = type;
    node.typed = true;
  }

  void set_prompt(RawNode& node, std::span<const Token> tokens, std::size_t index, const SourceLocation& where) {
    if (index >= tokens.size()) return;
    const auto& text = expect(tokens, index, TokenKind::String, "prompt string", where);
    auto [rest, guard] = split_guard(tokens, index + 1, where);
    if (!rest.empty()) fail(where, "unexpected text after prompt");
    (void)guard;
    node.option.prompt = text.text;
    if (node.kind == NodeKind::Choice && node.name_hint.empty()) node.name_hint = text.text;
  }

  DefaultValue make_default(std::span<const Token> value, ExprPtr guard, const SourceLocation& where) const {
    if (value.empty()) fail(where, "missing default value");
    DefaultValue def;
    def.guard = std::move(guard);
    if (value.size() == 1 && (value[0].kind == TokenKind::String ||
                              (value[0].kind == TokenKind::Word && is_number_literal(value[0].text)))) {
      def.value = value[0].text;
      return def;
    }
    def.value_expr = expression(value, where);
    def.value = to_string(*def.value_expr);
    return def;
  }

  void property(std::span<const Token> tokens, const SourceLocation& where) {
    RawNode& node = nodes_[current_];
    const std::string& kw = tokens[0].text;
    const bool restricted = node.kind == NodeKind::Menu || node.kind == NodeKind::Comment;

    if (kw == "depends") {
      if (tokens.size() < 3 || tokens[1].kind != TokenKind::Word || tokens[1].text != "on") {
        fail(where, "expected 'depends on <expr>'");
      }
      node.own_depends = conjoin(node.own_depends, expression(tokens.subspan(2), where));
      return;
    }
    if (kw == "visible") throw UnsupportedConstruct("visible if", where.file, where.line);
    if (restricted) fail(where, "'" + kw + "' not allowed in menu or comment");

    if (auto type = kw == "boolean" ? std::optional(OptionType::Bool) : parse_option_type(kw);
        type && !is_container(*type)) {
      set_type(node, *type, where);
      set_prompt(node, tokens, 1, where);
    } else if (kw == "def_bool" || kw == "def_tristate") {
      set_type(node, kw == "def_bool" ? OptionType::Bool : OptionType::Tristate, where);
      auto [value, guard] = split_guard(tokens, 1, where);
      node.option.defaults.push_back(make_default(value, std::move(guard), where));
    } else if (kw == "prompt") {
      if (tokens.size() < 2) fail(where, "missing prompt text");
      set_prompt(node, tokens, 1, where);
    } else if (kw == "default") {
      auto [value, guard] = split_guard(tokens, 1, where);
      node.option.defaults.push_back(make_default(value, std::move(guard), where));
    } else if (kw == "select" || kw == "imply") {
      if (node.kind == NodeKind::Choice) fail(where, kw + " on a choice");
      const auto& target = expect(tokens, 1, TokenKind::Word, "target symbol", where);
      auto [rest, guard] = split_guard(tokens, 2, where);
      if (!rest.empty()) fail(where, "unexpected text after " + kw + " target");
      auto& list = kw == "select" ? node.option.selects : node.option.implies;
      list.push_back({target.text, std::move(guard)});
    } else if (kw == "range") {
      auto [bounds, guard] = split_guard(tokens, 1, where);
      if (bounds.size() != 2 || bounds[0].kind != TokenKind::Word || bounds[1].kind != TokenKind::Word) {
        fail(where, "range expects two bounds");
      }
      auto lo = parse_integer(bounds[0].text);
      auto hi = parse_integer(bounds[1].text);
      if (!lo || !hi) {
        notes_.push_back(where.file + ":" + std::to_string(where.line) + ": symbolic range bound ignored");
      } else if (node.option.range) {
        notes_.push_back(where.file + ":" + std::to_string(where.line) + ": additional range ignored");
      } else {
        if (*lo > *hi) fail(where, "range minimum exceeds maximum");
        node.option.range = Range{*lo, *hi};
        range_locations_[current_] = where;
      }
      (void)guard;
    } else if (kw == "help") {
      if (tokens.size() != 1) fail(where, "unexpected text after help");
      start_help(where);
    } else if (kw == "optional") {
      if (node.kind != NodeKind::Choice) fail(where, "'optional' outside of a choice");
      node.option.optional_choice = true;
    } else if (kw == "option") {
      if (tokens.size() > 1 && tokens[1].text == "env") throw UnsupportedConstruct("option env", where.file, where.line);
      notes_.push_back(where.file + ":" + std::to_string(where.line) + ": option line ignored");
    } else if (kw == "modules" || kw == "transitional") {
      notes_.push_back(where.file + ":" + std::to_string(where.line) + ": '" + kw + "' ignored");
    } else {
      fail(where, "unknown keyword '" + kw + "'");
    }
  }

  fs::path root_dir_;
  const Environment& env_;
  std::vector<RawNode> nodes_;
  std::vector<Frame> stack_;
  std::size_t current_ = kNoNode;
  std::size_t help_target_ = kNoNode;
  std::optional<std::size_t> help_indent_;
  std::vector<std::string> help_lines_;
  std::size_t source_depth_ = 0;
  std::string label_;
  std::vector<std::string> notes_;
  std::map<std::size_t, OptionType> choice_member_type_;
  std::map<std::size_t, SourceLocation> range_locations_;
};

void add_unresolved(const ConfigSpace& space, const Expr* expr, const std::string& owner, ParseReport& report) {
  if (expr == nullptr) return;
  for (const auto& symbol : referenced_symbols(*expr)) {
    if (!space.contains(symbol)) report.unresolved.insert({symbol, owner});
  }
}

ConfigSpace Parser::finalize() {
  finish_help();
  if (!stack_.empty()) {
    const Frame& open = stack_.back();
    throw SyntaxError(open.where.file, open.where.line, "block is not closed");
  }

  std::set<std::string> used;
  for (const RawNode& node : nodes_) {
    if (node.kind == NodeKind::Config) used.insert(node.option.name);
  }
  for (RawNode& node : nodes_) {
    if (node.kind == NodeKind::Config) {
      node.final_name = node.option.name;
      continue;
    }
    if (node.kind == NodeKind::Comment) continue;
    std::string base = node.option.name;
    if (base.empty()) {
      std::string s = text::slug(node.name_hint);
      base = std::string(node.kind == NodeKind::Menu ? "MENU_" : "CHOICE_") + (s.empty() ? "ANONYMOUS" : s);
    }
    std::string candidate = base;
    for (int suffix = 2; used.count(candidate) != 0; ++suffix) candidate = base + "_" + std::to_string(suffix);
    used.insert(candidate);
    node.final_name = candidate;
  }

  for (RawNode& node : nodes_) {
    ExprPtr context;
    for (const Enclosing& e : node.enclosing) {
      context = conjoin(context, e.container == kNoNode ? e.condition : nodes_[e.container].own_depends);
    }
    node.full_depends = conjoin(context, node.own_depends);
  }

  ConfigSpace space;
  std::set<std::string> typed_names;
  space.kernel_version_label = label_;
  space.report.notes = notes_;

  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    RawNode& node = nodes_[i];
    if (node.kind == NodeKind::Comment) continue;
    ConfigOption option = node.option;
    option.name = node.final_name;
    option.depends_on = node.full_depends;
    if (node.parent != kNoNode) option.parent = nodes_[node.parent].final_name;
    if (node.kind == NodeKind::Config && node.choice != kNoNode && !node.typed) {
      auto it = choice_member_type_.find(node.choice);
      option.type = it == choice_member_type_.end() ? OptionType::Bool : it->second;
      node.typed = true;
    }

    auto existing = space.options.find(option.name);
    if (existing == space.options.end()) {
      space.declaration_order.push_back(option.name);
      space.options.emplace(option.name, std::move(option));
    } else {
      // Repeated definitions: visibility is the disjunction of each
      // definition's context; properties accumulate.
      ConfigOption& prior = existing->second;
      if (node.typed && prior.type != option.type) {
        if (typed_names.count(prior.name) != 0) {
          throw SyntaxError(option.location.file, option.location.line, "conflicting types for " + option.name);
        }
        prior.type = option.type;
      }
      prior.depends_on = (prior.depends_on && option.depends_on) ? make_or(prior.depends_on, option.depends_on) : nullptr;
      if (!prior.prompt) prior.prompt = option.prompt;
      if (!prior.help_text) prior.help_text = option.help_text;
      if (!prior.range) prior.range = option.range;
      for (auto& d : option.defaults) prior.defaults.push_back(std::move(d));
      for (auto& s : option.selects) prior.selects.push_back(std::move(s));
      for (auto& s : option.implies) prior.implies.push_back(std::move(s));
      space.report.notes.push_back(option.location.file + ":" + std::to_string(option.location.line) +
                                   ": merged repeated definition of " + option.name);
    }
    if (node.typed) typed_names.insert(node.final_name);
    if (node.kind == NodeKind::Config && node.choice != kNoNode) {
      auto& members = space.choice_groups[nodes_[node.choice].final_name];
      if (std::find(members.begin(), members.end(), node.final_name) == members.end()) {
        members.push_back(node.final_name);
      }
    }
  }

  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const RawNode& node = nodes_[i];
    if (node.kind == NodeKind::Choice && space.choice_groups.count(node.final_name) == 0) {
      throw SyntaxError(node.option.location.file, node.option.location.line, "choice has no members");
    }
    if (node.kind == NodeKind::Config && typed_names.count(node.final_name) == 0) {
      throw SyntaxError(node.option.location.file, node.option.location.line,
                        "option " + node.final_name + " has no type");
    }
  }
  for (const auto& [name, members] : space.choice_groups) {
    for (const auto& member : members) {
      const ConfigOption& m = space.options.at(member);
      if (!is_tristate_like(m.type)) {
        throw SyntaxError(m.location.file, m.location.line, "choice member " + member + " must be bool or tristate");
      }
    }
  }
  for (const auto& [idx, where] : range_locations_) {
    const ConfigOption& opt = space.options.at(nodes_[idx].final_name);
    if (opt.type != OptionType::Int && opt.type != OptionType::Hex) {
      throw SyntaxError(where.file, where.line, "range on non-numeric option " + opt.name);
    }
  }

  for (const auto& [name, option] : space.options) {
    add_unresolved(space, option.depends_on.get(), name, space.report);
    for (const auto& d : option.defaults) {
      add_unresolved(space, d.value_expr.get(), name, space.report);
      add_unresolved(space, d.guard.get(), name, space.report);
    }
    for (const auto* list : {&option.selects, &option.implies}) {
      for (const auto& r : *list) {
        if (!space.contains(r.target)) space.report.unresolved.insert({r.target, name});
        add_unresolved(space, r.guard.get(), name, space.report);
      }
    }
  }
  space.edges = extract_instance_triples(space);
  return space;
}

}  // namespace

ConfigSpace parse_kconfig_tree(const std::filesystem::path& root_file, const Environment& env) {
  std::error_code ec;
  if (!fs::is_regular_file(root_file, ec)) throw FileNotFound(root_file.generic_string());
  fs::path root_dir = root_file.parent_path().empty() ? fs::path(".") : root_file.parent_path();
  Parser parser(root_dir, env);
  parser.parse_file(root_file);
  return parser.finalize();
}

ConfigSpace parse_kconfig_text(std::string_view text, std::string_view file_name,
                               const std::filesystem::path& base_dir, const Environment& env) {
  Parser parser(base_dir, env);
  parser.parse_text(text, std::string(file_name), base_dir);
  return parser.finalize();
}

}  // namespace byos::kconfig
