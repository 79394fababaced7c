#include <cctype>

#include "byos/error.hpp"
#include "byos/kconfig/expr.hpp"
#include "byos/kconfig/lexer.hpp"

namespace byos::kconfig {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

}  // namespace

bool is_number_literal(std::string_view text) {
  if (text.empty()) return false;
  if (text.front() == '-') text.remove_prefix(1);
  if (text.empty()) return false;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    for (char c : text.substr(2)) {
      if (std::isxdigit(static_cast<unsigned char>(c)) == 0) return false;
    }
    return true;
  }
  for (char c : text) {
    if (std::isdigit(static_cast<unsigned char>(c)) == 0) return false;
  }
  return true;
}

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      ++i;
      continue;
    }
    if (c == '#') break;
    if (c == '$') throw LineError("macro", true);
    if (c == '"' || c == '\'') {
      char quote = c;
      std::string text;
      ++i;
      bool closed = false;
      while (i < line.size()) {
        char d = line[i];
        if (d == '\\' && i + 1 < line.size()) {
          text.push_back(line[i + 1]);
          i += 2;
          continue;
        }
        if (d == quote) {
          closed = true;
          ++i;
          break;
        }
        if (d == '$' && i + 1 < line.size() && line[i + 1] == '(') throw LineError("macro", true);
        text.push_back(d);
        ++i;
      }
      if (!closed) throw LineError("unterminated string", false);
      tokens.push_back({TokenKind::String, std::move(text)});
      continue;
    }
    auto two = line.substr(i, 2);
    if (two == "&&") {
      tokens.push_back({TokenKind::And, "&&"});
      i += 2;
    } else if (two == "||") {
      tokens.push_back({TokenKind::Or, "||"});
      i += 2;
    } else if (two == "!=") {
      tokens.push_back({TokenKind::Neq, "!="});
      i += 2;
    } else if (two == "<=" || two == ">=") {
      tokens.push_back({TokenKind::Relational, std::string(two)});
      i += 2;
    } else if (c == '<' || c == '>') {
      tokens.push_back({TokenKind::Relational, std::string(1, c)});
      ++i;
    } else if (c == '!') {
      tokens.push_back({TokenKind::Not, "!"});
      ++i;
    } else if (c == '=') {
      tokens.push_back({TokenKind::Eq, "="});
      ++i;
    } else if (c == '(') {
      tokens.push_back({TokenKind::LParen, "("});
      ++i;
    } else if (c == ')') {
      tokens.push_back({TokenKind::RParen, ")"});
      ++i;
    } else if (is_word_char(c) || (c == '-' && i + 1 < line.size() &&
                                   std::isdigit(static_cast<unsigned char>(line[i + 1])) != 0)) {
      std::size_t start = i++;
      while (i < line.size() && is_word_char(line[i])) ++i;
      tokens.push_back({TokenKind::Word, std::string(line.substr(start, i - start))});
    } else {
      throw LineError(std::string("unexpected character '") + c + "'", false);
    }
  }
  return tokens;
}

ExprPtr ExprParser::parse_expression() {
  auto lhs = parse_and();
  while (const Token* t = peek()) {
    if (t->kind != TokenKind::Or) break;
    ++pos_;
    lhs = make_or(std::move(lhs), parse_and());
  }
  return lhs;
}

ExprPtr ExprParser::parse_and() {
  auto lhs = parse_unary();
  while (const Token* t = peek()) {
    if (t->kind != TokenKind::And) break;
    ++pos_;
    lhs = make_and(std::move(lhs), parse_unary());
  }
  return lhs;
}

ExprPtr ExprParser::parse_unary() {
  const Token* t = peek();
  if (t != nullptr && t->kind == TokenKind::Not) {
    ++pos_;
    return make_not(parse_unary());
  }
  return parse_primary();
}

ExprPtr ExprParser::parse_primary() {
  const Token* t = peek();
  if (t == nullptr) throw LineError("expected expression", false);
  if (t->kind == TokenKind::LParen) {
    ++pos_;
    auto inner = parse_expression();
    const Token* close = peek();
    if (close == nullptr || close->kind != TokenKind::RParen) throw LineError("expected ')'", false);
    ++pos_;
    return inner;
  }
  ExprPtr operand;
  if (t->kind == TokenKind::Word) {
    if (t->text == "if") throw LineError("expected expression before 'if'", false);
    if (auto tri = parse_tristate(t->text)) {
      operand = make_const(*tri);
    } else if (is_number_literal(t->text)) {
      throw LineError("numeric literal in boolean context", true);
    } else {
      operand = make_symbol(t->text);
    }
  } else if (t->kind == TokenKind::String) {
    auto tri = parse_tristate(t->text);
    if (!tri) throw LineError("string literal in boolean context", true);
    operand = make_const(*tri);
  } else {
    throw LineError("unexpected token '" + t->text + "'", false);
  }
  ++pos_;
  const Token* op = peek();
  if (op != nullptr && op->kind == TokenKind::Relational) throw LineError("relational comparison", true);
  if (op != nullptr && (op->kind == TokenKind::Eq || op->kind == TokenKind::Neq)) {
    bool equal = op->kind == TokenKind::Eq;
    ++pos_;
    Literal rhs = parse_literal();
    return equal ? make_eq(std::move(operand), std::move(rhs)) : make_neq(std::move(operand), std::move(rhs));
  }
  return operand;
}

Literal ExprParser::parse_literal() {
  const Token* t = peek();
  if (t == nullptr) throw LineError("expected literal after comparison", false);
  if (t->kind != TokenKind::Word && t->kind != TokenKind::String) {
    throw LineError("expected literal after comparison", false);
  }
  ++pos_;
  return Literal{t->text, t->kind == TokenKind::String};
}

ExprPtr parse_expr(std::string_view text) {
  try {
    auto tokens = tokenize(text);
    ExprParser parser(tokens);
    auto expr = parser.parse_expression();
    if (!parser.at_end()) throw LineError("trailing tokens after expression", false);
    return expr;
  } catch (const LineError& e) {
    if (e.unsupported()) throw UnsupportedConstruct(e.what(), "<expr>", 1);
    throw SyntaxError("<expr>", 1, e.what());
  }
}

}  // namespace byos::kconfig
