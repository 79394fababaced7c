#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "byos/kconfig/expr.hpp"

namespace byos::kconfig {

enum class TokenKind {
  Word,    // identifiers, numbers, keywords
  String,  // quoted text, escapes already resolved
  Not,
  And,
  Or,
  LParen,
  RParen,
  Eq,
  Neq,
  Relational,  // < > <= >=
};

struct Token {
  TokenKind kind;
  std::string text;
};

/// Thrown by the lexer and expression parser without location info. The
/// Kconfig parser rethrows it as SyntaxError or UnsupportedConstruct.
class LineError : public std::runtime_error {
 public:
  LineError(const std::string& message, bool unsupported)
      : std::runtime_error(message), unsupported_(unsupported) {}
  bool unsupported() const noexcept { return unsupported_; }

 private:
  bool unsupported_;
};

/// Splits one logical Kconfig line. A `#` outside quotes ends the line.
std::vector<Token> tokenize(std::string_view line);

bool is_number_literal(std::string_view text);

/// Recursive-descent parser over a token range:
///   expr    := and ('||' and)*
///   and     := unary ('&&' unary)*
///   unary   := '!' unary | primary
///   primary := '(' expr ')' | WORD [('=' | '!=') literal]
class ExprParser {
 public:
  explicit ExprParser(std::span<const Token> tokens) : tokens_(tokens) {}

  ExprPtr parse_expression();
  std::size_t position() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ >= tokens_.size(); }

 private:
  ExprPtr parse_and();
  ExprPtr parse_unary();
  ExprPtr parse_primary();
  Literal parse_literal();
  const Token* peek() const { return at_end() ? nullptr : &tokens_[pos_]; }

  std::span<const Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace byos::kconfig
