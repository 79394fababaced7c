#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace byos::kconfig {

/// Three-valued Kconfig domain. The numeric order n < m < y is what the
/// algebra below relies on.
enum class Tristate : std::uint8_t { n = 0, m = 1, y = 2 };

constexpr Tristate tri_and(Tristate a, Tristate b) { return a < b ? a : b; }
constexpr Tristate tri_or(Tristate a, Tristate b) { return a < b ? b : a; }
constexpr Tristate tri_not(Tristate a) {
  return static_cast<Tristate>(2 - static_cast<int>(a));
}

std::string_view to_string(Tristate value);
std::optional<Tristate> parse_tristate(std::string_view text);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct SymbolRef {
  std::string name;
};
struct NotExpr {
  ExprPtr operand;
};
struct AndExpr {
  ExprPtr lhs;
  ExprPtr rhs;
};
struct OrExpr {
  ExprPtr lhs;
  ExprPtr rhs;
};

/// Right-hand side of `=` / `!=`. Unquoted literals may name another symbol.
struct Literal {
  std::string text;
  bool quoted = false;

  bool operator==(const Literal&) const = default;
};

struct EqExpr {
  ExprPtr lhs;
  Literal rhs;
};
struct NeqExpr {
  ExprPtr lhs;
  Literal rhs;
};
struct ConstTristate {
  Tristate value;
};

/// Dependency-expression tree node. Nodes are immutable and shared.
struct Expr {
  std::variant<SymbolRef, NotExpr, AndExpr, OrExpr, EqExpr, NeqExpr, ConstTristate> node;
};

ExprPtr make_symbol(std::string name);
ExprPtr make_not(ExprPtr operand);
ExprPtr make_and(ExprPtr lhs, ExprPtr rhs);
ExprPtr make_or(ExprPtr lhs, ExprPtr rhs);
ExprPtr make_eq(ExprPtr lhs, Literal rhs);
ExprPtr make_neq(ExprPtr lhs, Literal rhs);
ExprPtr make_const(Tristate value);

/// Conjunction that treats a null operand as "no condition".
ExprPtr conjoin(ExprPtr lhs, ExprPtr rhs);

/// Canonical, structure-preserving text form. parse_expr(to_string(e)) yields
/// a tree equal to e.
std::string to_string(const Expr& expr);
inline std::string to_string(const ExprPtr& expr) { return expr ? to_string(*expr) : std::string{}; }

bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

/// Symbols in order of first occurrence (left to right). Includes symbols
/// named by unquoted comparison literals that are not tristate constants or
/// numbers.
std::vector<std::string> referenced_symbols(const Expr& expr);

/// Source of symbol values for evaluation.
class ValueLookup {
 public:
  virtual ~ValueLookup() = default;
  /// Level of a symbol in boolean context. Unknown symbols are n.
  virtual Tristate tristate_of(std::string_view symbol) const = 0;
  /// Textual value used by `=` / `!=`; nullopt for unknown symbols.
  virtual std::optional<std::string> text_of(std::string_view symbol) const = 0;
};

using TristateAssignment = std::map<std::string, Tristate, std::less<>>;

Tristate evaluate_expr(const Expr& expr, const ValueLookup& values);
Tristate evaluate_expr(const Expr& expr, const TristateAssignment& assignment);

/// Parses a standalone expression such as `(A && !B) || C = y`.
ExprPtr parse_expr(std::string_view text);

}  // namespace byos::kconfig
