#include "byos/kconfig/expr.hpp"

#include <charconv>

#include "byos/kconfig/lexer.hpp"

namespace byos::kconfig {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

ExprPtr wrap(Expr expr) { return std::make_shared<const Expr>(std::move(expr)); }

int precedence(const Expr& expr) {
  return std::visit(overloaded{
                        [](const OrExpr&) { return 1; },
                        [](const AndExpr&) { return 2; },
                        [](const auto&) { return 3; },
                    },
                    expr.node);
}

std::string quote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string literal_text(const Literal& lit) { return lit.quoted ? quote(lit.text) : lit.text; }

// Parenthesize `child` when its precedence is below `min_precedence`.
std::string child_text(const Expr& child, int min_precedence) {
  std::string text = to_string(child);
  return precedence(child) < min_precedence ? "(" + text + ")" : text;
}

std::optional<long long> as_integer(std::string_view text) {
  if (text.empty()) return std::nullopt;
  long long value = 0;
  int base = 10;
  std::string_view digits = text;
  bool negative = false;
  if (digits.front() == '-') {
    negative = true;
    digits.remove_prefix(1);
  }
  if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
    base = 16;
    digits.remove_prefix(2);
  }
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  return negative ? -value : value;
}

bool literal_names_symbol(const Literal& lit) {
  return !lit.quoted && !parse_tristate(lit.text) && !is_number_literal(lit.text);
}

void collect(const Expr& expr, std::vector<std::string>& out, std::set<std::string>& seen) {
  auto add = [&](const std::string& name) {
    if (seen.insert(name).second) out.push_back(name);
  };
  std::visit(overloaded{
                 [&](const SymbolRef& s) { add(s.name); },
                 [&](const NotExpr& e) { collect(*e.operand, out, seen); },
                 [&](const AndExpr& e) {
                   collect(*e.lhs, out, seen);
                   collect(*e.rhs, out, seen);
                 },
                 [&](const OrExpr& e) {
                   collect(*e.lhs, out, seen);
                   collect(*e.rhs, out, seen);
                 },
                 [&](const EqExpr& e) {
                   collect(*e.lhs, out, seen);
                   if (literal_names_symbol(e.rhs)) add(e.rhs.text);
                 },
                 [&](const NeqExpr& e) {
                   collect(*e.lhs, out, seen);
                   if (literal_names_symbol(e.rhs)) add(e.rhs.text);
                 },
                 [](const ConstTristate&) {},
             },
             expr.node);
}

std::string comparison_lhs(const Expr& lhs, const ValueLookup& values) {
  if (const auto* sym = std::get_if<SymbolRef>(&lhs.node)) {
    return values.text_of(sym->name).value_or("n");
  }
  return std::string(to_string(evaluate_expr(lhs, values)));
}

std::string comparison_rhs(const Literal& lit, const ValueLookup& values) {
  if (literal_names_symbol(lit)) return values.text_of(lit.text).value_or("n");
  return lit.text;
}

bool values_equal(const std::string& a, const std::string& b) {
  auto ia = as_integer(a);
  auto ib = as_integer(b);
  if (ia && ib) return *ia == *ib;
  return a == b;
}

class MapLookup final : public ValueLookup {
 public:
  explicit MapLookup(const TristateAssignment& map) : map_(map) {}
  Tristate tristate_of(std::string_view symbol) const override {
    auto it = map_.find(symbol);
    return it == map_.end() ? Tristate::n : it->second;
  }
  std::optional<std::string> text_of(std::string_view symbol) const override {
    auto it = map_.find(symbol);
    if (it == map_.end()) return std::nullopt;
    return std::string(to_string(it->second));
  }

 private:
  const TristateAssignment& map_;
};

}  // namespace

std::string_view to_string(Tristate value) {
  switch (value) {
    case Tristate::n:
      return "n";
    case Tristate::m:
      return "m";
    case Tristate::y:
      return "y";
  }
  return "n";
}

std::optional<Tristate> parse_tristate(std::string_view text) {
  if (text == "y") return Tristate::y;
  if (text == "m") return Tristate::m;
  if (text == "n") return Tristate::n;
  return std::nullopt;
}

ExprPtr make_symbol(std::string name) { return wrap(Expr{SymbolRef{std::move(name)}}); }
ExprPtr make_not(ExprPtr operand) { return wrap(Expr{NotExpr{std::move(operand)}}); }
ExprPtr make_and(ExprPtr lhs, ExprPtr rhs) {
  return wrap(Expr{AndExpr{std::move(lhs), std::move(rhs)}});
}
ExprPtr make_or(ExprPtr lhs, ExprPtr rhs) {
  return wrap(Expr{OrExpr{std::move(lhs), std::move(rhs)}});
}
ExprPtr make_eq(ExprPtr lhs, Literal rhs) { return wrap(Expr{EqExpr{std::move(lhs), std::move(rhs)}}); }
ExprPtr make_neq(ExprPtr lhs, Literal rhs) {
  return wrap(Expr{NeqExpr{std::move(lhs), std::move(rhs)}});
}
ExprPtr make_const(Tristate value) { return wrap(Expr{ConstTristate{value}}); }

ExprPtr conjoin(ExprPtr lhs, ExprPtr rhs) {
  if (!lhs) return rhs;
  if (!rhs) return lhs;
  return make_and(std::move(lhs), std::move(rhs));
}

std::string to_string(const Expr& expr) {
  return std::visit(
      overloaded{
          [](const SymbolRef& s) { return s.name; },
          [](const NotExpr& e) { return "!" + child_text(*e.operand, 3); },
          // Same-precedence right children keep their parentheses so the
          // printed form preserves tree shape.
          [](const AndExpr& e) { return child_text(*e.lhs, 2) + " && " + child_text(*e.rhs, 3); },
          [](const OrExpr& e) { return child_text(*e.lhs, 1) + " || " + child_text(*e.rhs, 2); },
          [](const EqExpr& e) { return child_text(*e.lhs, 3) + " = " + literal_text(e.rhs); },
          [](const NeqExpr& e) { return child_text(*e.lhs, 3) + " != " + literal_text(e.rhs); },
          [](const ConstTristate& c) { return std::string(to_string(c.value)); },
      },
      expr.node);
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return structurally_equal(*a, *b);
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const SymbolRef& s) { return s.name == std::get<SymbolRef>(b.node).name; },
          [&](const NotExpr& e) { return structurally_equal(e.operand, std::get<NotExpr>(b.node).operand); },
          [&](const AndExpr& e) {
            const auto& o = std::get<AndExpr>(b.node);
            return structurally_equal(e.lhs, o.lhs) && structurally_equal(e.rhs, o.rhs);
          },
          [&](const OrExpr& e) {
            const auto& o = std::get<OrExpr>(b.node);
            return structurally_equal(e.lhs, o.lhs) && structurally_equal(e.rhs, o.rhs);
          },
          [&](const EqExpr& e) {
            const auto& o = std::get<EqExpr>(b.node);
            return e.rhs == o.rhs && structurally_equal(e.lhs, o.lhs);
          },
          [&](const NeqExpr& e) {
            const auto& o = std::get<NeqExpr>(b.node);
            return e.rhs == o.rhs && structurally_equal(e.lhs, o.lhs);
          },
          [&](const ConstTristate& c) { return c.value == std::get<ConstTristate>(b.node).value; },
      },
      a.node);
}

std::vector<std::string> referenced_symbols(const Expr& expr) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  collect(expr, out, seen);
  return out;
}

Tristate evaluate_expr(const Expr& expr, const ValueLookup& values) {
  return std::visit(
      overloaded{
          [&](const SymbolRef& s) { return values.tristate_of(s.name); },
          [&](const NotExpr& e) { return tri_not(evaluate_expr(*e.operand, values)); },
          [&](const AndExpr& e) {
            return tri_and(evaluate_expr(*e.lhs, values), evaluate_expr(*e.rhs, values));
          },
          [&](const OrExpr& e) {
            return tri_or(evaluate_expr(*e.lhs, values), evaluate_expr(*e.rhs, values));
          },
          [&](const EqExpr& e) {
            return values_equal(comparison_lhs(*e.lhs, values), comparison_rhs(e.rhs, values))
                       ? Tristate::y
                       : Tristate::n;
          },
          [&](const NeqExpr& e) {
            return values_equal(comparison_lhs(*e.lhs, values), comparison_rhs(e.rhs, values))
                       ? Tristate::n
                       : Tristate::y;
          },
          [](const ConstTristate& c) { return c.value; },
      },
      expr.node);
}

Tristate evaluate_expr(const Expr& expr, const TristateAssignment& assignment) {
  return evaluate_expr(expr, MapLookup(assignment));
}

}  // namespace byos::kconfig
