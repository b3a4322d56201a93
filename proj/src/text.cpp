#include "liederiv/text.hpp"

#include <cctype>
#include <optional>
#include <sstream>

namespace liederiv {

namespace {

struct Token {
  enum class Type { Number, Ident, Op, End };
  Type type = Type::End;
  std::string text;
  std::size_t pos = 0;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto digits = [&](std::size_t j) {
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    return j;
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::size_t j = digits(i);
      if (j < s.size() && s[j] == '.') j = digits(j + 1);
      if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        std::size_t end = digits(k);
        if (end == k) throw SyntaxError("malformed exponent in number", j);
        j = end;
      }
      // `3/4` is a single rational literal.
      if (j + 1 < s.size() && s[j] == '/' && std::isdigit(static_cast<unsigned char>(s[j + 1])) &&
          s.substr(i, j - i).find_first_of(".eE") == std::string_view::npos)
        j = digits(j + 1);
      out.push_back({Token::Type::Number, std::string(s.substr(i, j - i)), i});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
      j = digits(j);
      out.push_back({Token::Type::Ident, std::string(s.substr(i, j - i)), i});
      i = j;
      continue;
    }
    if (std::string_view("+-*/^()").find(c) != std::string_view::npos) {
      out.push_back({Token::Type::Op, std::string(1, c), i});
      ++i;
      continue;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", i);
  }
  out.push_back({Token::Type::End, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, Context ctx, int dim) : tokens_(tokenize(text)), ctx_(ctx), dim_(dim) {}

  Ast parse_all() {
    Ast e = expr();
    if (peek().type != Token::Type::End) throw SyntaxError("unexpected token '" + peek().text + "'", peek().pos);
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool at_op(char c) const { return peek().type == Token::Type::Op && peek().text[0] == c; }
  const Token& next() { return tokens_[pos_++]; }

  Ast binary(Ast::Kind k, Ast lhs, Ast rhs, std::size_t position) {
    Ast a;
    a.kind = k;
    a.position = position;
    a.children.push_back(std::move(lhs));
    a.children.push_back(std::move(rhs));
    return a;
  }

  Ast expr() {
    Ast lhs = term();
    while (at_op('+') || at_op('-')) {
      const Token& op = next();
      lhs = binary(op.text[0] == '+' ? Ast::Kind::Add : Ast::Kind::Sub, std::move(lhs), term(), op.pos);
    }
    return lhs;
  }

  Ast term() {
    Ast lhs = unary();
    while (at_op('*') || at_op('/')) {
      const Token& op = next();
      lhs = binary(op.text[0] == '*' ? Ast::Kind::Mul : Ast::Kind::Div, std::move(lhs), unary(), op.pos);
    }
    return lhs;
  }

  Ast unary() {
    if (at_op('-') || at_op('+')) {
      const Token& op = next();
      Ast inner = unary();
      if (op.text[0] == '+') return inner;
      Ast a;
      a.kind = Ast::Kind::Neg;
      a.position = op.pos;
      a.children.push_back(std::move(inner));
      return a;
    }
    return power();
  }

  Ast power() {
    Ast base = primary();
    if (at_op('^')) {
      const Token& op = next();
      const Token& e = next();
      if (e.type != Token::Type::Number || e.text.find_first_not_of("0123456789") != std::string::npos)
        throw SyntaxError("exponent must be a nonnegative integer", e.pos);
      Ast a;
      a.kind = Ast::Kind::Pow;
      a.position = op.pos;
      a.exponent = std::stoi(e.text);
      a.children.push_back(std::move(base));
      return a;
    }
    return base;
  }

  Ast primary() {
    const Token& t = next();
    switch (t.type) {
      case Token::Type::Number: {
        Ast a;
        a.kind = Ast::Kind::Number;
        a.number = t.text;
        a.position = t.pos;
        return a;
      }
      case Token::Type::Ident:
        return variable(t);
      case Token::Type::Op:
        if (t.text[0] == '(') {
          Ast inner = expr();
          if (!at_op(')')) throw SyntaxError("expected ')'", peek().pos);
          next();
          return inner;
        }
        throw SyntaxError("unexpected operator '" + t.text + "'", t.pos);
      case Token::Type::End:
        break;
    }
    throw SyntaxError("unexpected end of input", t.pos);
  }

  Ast variable(const Token& t) {
    std::size_t split = t.text.find_first_of("0123456789");
    if (split == std::string::npos) throw SyntaxError("unknown token '" + t.text + "'", t.pos);
    std::string name = t.text.substr(0, split);
    int index = std::stoi(t.text.substr(split));
    Ast a;
    a.kind = Ast::Kind::Variable;
    a.position = t.pos;
    if (name == "x") a.var = Ast::Var::X;
    else if (name == "p") a.var = Ast::Var::P;
    else if (name == "d") a.var = Ast::Var::D;
    else if (name == "dx") a.var = Ast::Var::DX;
    else throw SyntaxError("unknown token '" + t.text + "'", t.pos);
    bool legal = a.var == Ast::Var::X || (a.var == Ast::Var::P && ctx_ == Context::Symbol) ||
                 (a.var == Ast::Var::D && ctx_ == Context::Operator) ||
                 (a.var == Ast::Var::DX && ctx_ == Context::OneForm);
    if (!legal) throw SyntaxError("token '" + t.text + "' is not allowed in this context", t.pos);
    if (index < 1 || index > dim_)
      throw SyntaxError("variable index " + std::to_string(index) + " outside 1.." + std::to_string(dim_), t.pos);
    a.index = index - 1;
    return a;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Context ctx_;
  int dim_;
};

// Evaluates an Ast in a ring given by `Traits` (value type + product + generators).
template <class Traits>
typename Traits::Value lower(const Ast& a, const Traits& tr) {
  using V = typename Traits::Value;
  switch (a.kind) {
    case Ast::Kind::Number:
      try {
        return tr.constant(Scalar::parse(a.number, tr.mode));
      } catch (const PreconditionError& e) {
        throw SyntaxError(e.what(), a.position);
      }
    case Ast::Kind::Variable:
      return tr.variable(a.var, a.index);
    case Ast::Kind::Add:
      return lower(a.children[0], tr) + lower(a.children[1], tr);
    case Ast::Kind::Sub:
      return lower(a.children[0], tr) - lower(a.children[1], tr);
    case Ast::Kind::Neg:
      return -lower(a.children[0], tr);
    case Ast::Kind::Mul:
      return tr.mul(lower(a.children[0], tr), lower(a.children[1], tr));
    case Ast::Kind::Div: {
      V den = lower(a.children[1], tr);
      auto c = tr.as_constant(den);
      if (!c || c->is_zero()) throw SyntaxError("division only by a nonzero constant", a.position);
      V num = lower(a.children[0], tr);
      return tr.scale(num, Scalar::one(tr.mode) / *c);
    }
    case Ast::Kind::Pow: {
      V base = lower(a.children[0], tr);
      V r = tr.constant(Scalar::one(tr.mode));
      for (int i = 0; i < a.exponent; ++i) r = tr.mul(r, base);
      return r;
    }
  }
  throw SyntaxError("unreachable", a.position);
}

std::optional<Scalar> constant_of(const SymbolPoly& p) {
  if (p.is_zero()) return Scalar::zero(p.mode());
  if (p.size() != 1) return std::nullopt;
  const auto& [m, c] = *p.terms().begin();
  if (!m.base.is_zero() || !m.fiber.is_zero()) return std::nullopt;
  return c;
}

struct PolyTraits {
  using Value = SymbolPoly;
  int dim;
  Mode mode;
  Value constant(const Scalar& c) const { return SymbolPoly::constant(dim, c); }
  // P and DX both map to fiber variables; the context check already happened.
  Value variable(Ast::Var v, int i) const {
    return v == Ast::Var::X ? SymbolPoly::x(dim, i, mode) : SymbolPoly::xi(dim, i, mode);
  }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value scale(const Value& a, const Scalar& c) const { return a * c; }
  std::optional<Scalar> as_constant(const Value& v) const { return constant_of(v); }
};

struct OperatorTraits {
  using Value = WeylOp;
  int dim;
  Mode mode;
  Value constant(const Scalar& c) const { return WeylOp::constant(dim, c); }
  Value variable(Ast::Var v, int i) const {
    return v == Ast::Var::X ? WeylOp::x(dim, i, mode) : WeylOp::partial(dim, i, mode);
  }
  Value mul(const Value& a, const Value& b) const { return weyl_compose(a, b); }
  Value scale(const Value& a, const Scalar& c) const { return c * a; }
  std::optional<Scalar> as_constant(const Value& v) const { return constant_of(v.normal_symbol()); }
};

std::string monomial_str(const Monomial& m, const Scalar& c, char fiber_letter) {
  std::vector<std::string> factors;
  auto push = [&](const std::string& name, int e) {
    if (e == 0) return;
    factors.push_back(e == 1 ? name : name + "^" + std::to_string(e));
  };
  for (int i = 0; i < m.base.size(); ++i) push("x" + std::to_string(i + 1), m.base[i]);
  for (int i = 0; i < m.fiber.size(); ++i) push(std::string(1, fiber_letter) + std::to_string(i + 1), m.fiber[i]);
  if (factors.empty()) return c.str();
  std::string joined;
  for (std::size_t i = 0; i < factors.size(); ++i) joined += (i ? " * " : "") + factors[i];
  if (c.is_one()) return joined;
  if ((-c).is_one()) return "-" + joined;
  return c.str() + " * " + joined;
}

std::string poly_str(const SymbolPoly& p, char fiber_letter) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : p.terms()) {
    if (!out.empty()) out += " + ";
    out += monomial_str(m, c, fiber_letter);
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\n\r");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\n\r");
  return std::string(s.substr(b, e - b + 1));
}

// Splits at `sep` occurring outside brackets/braces/parentheses.
std::vector<std::string> split_top(std::string_view s, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '[' || c == '{' || c == '(') ++depth;
    else if (c == ']' || c == '}' || c == ')') --depth;
    else if (c == sep && depth == 0) {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
    if (depth < 0) throw SyntaxError("unbalanced brackets", i);
  }
  if (depth != 0) throw SyntaxError("unbalanced brackets", s.size());
  parts.push_back(trim(s.substr(start)));
  return parts;
}

}  // namespace

Ast parse(std::string_view text, Context ctx, int dim) {
  if (dim < 1) throw PreconditionError("dimension must be at least 1");
  return Parser(text, ctx, dim).parse_all();
}

SymbolPoly parse_symbol(std::string_view text, int dim, Mode mode) {
  return lower(parse(text, Context::Symbol, dim), PolyTraits{dim, mode});
}

WeylOp parse_operator(std::string_view text, int dim, Mode mode) {
  return lower(parse(text, Context::Operator, dim), OperatorTraits{dim, mode});
}

std::vector<SymbolPoly> parse_oneform_components(std::string_view text, int dim, Mode mode) {
  SymbolPoly p = lower(parse(text, Context::OneForm, dim), PolyTraits{dim, mode});
  std::vector<SymbolPoly> comps(static_cast<std::size_t>(dim), SymbolPoly(dim, mode));
  for (const auto& [m, c] : p.terms()) {
    if (m.fiber.degree() != 1) throw SyntaxError("expression is not linear in dx1..dx" + std::to_string(dim), 0);
    int axis = 0;
    while (m.fiber[axis] == 0) ++axis;
    comps[static_cast<std::size_t>(axis)].add_term(Monomial{m.base, MultiIndex(dim)}, c);
  }
  return comps;
}

ClosedOneForm parse_oneform(std::string_view text, int dim, Mode mode) {
  auto comps = parse_oneform_components(text, dim, mode);
  return ClosedOneForm(std::move(comps));
}

std::string to_string(const SymbolPoly& p) { return poly_str(p, 'p'); }

std::string to_string(const WeylOp& d) { return poly_str(d.normal_symbol(), 'd'); }

std::string to_string(const ClosedOneForm& w) {
  std::string out;
  for (int i = 0; i < w.dim(); ++i) {
    if (w[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + to_string(w[i]) + ") * dx" + std::to_string(i + 1);
  }
  return out.empty() ? "0" : out;
}

const std::string& Record::at(std::string_view key) const {
  for (const auto& [k, v] : fields)
    if (k == key) return v;
  throw PreconditionError("record field '" + std::string(key) + "' is missing");
}

bool Record::has(std::string_view key) const {
  for (const auto& [k, v] : fields)
    if (k == key) return true;
  return false;
}

std::string Record::str() const {
  std::string body;
  for (const auto& [k, v] : fields) body += (body.empty() ? "" : "; ") + k + " = " + v;
  return tag.empty() ? body : tag + "{" + body + "}";
}

Record parse_record(std::string_view text) {
  Record r;
  std::string s = trim(text);
  if (auto brace = s.find('{'); brace != std::string::npos && s.find('=') > brace) {
    if (s.back() != '}') throw SyntaxError("record missing closing '}'", s.size());
    r.tag = trim(std::string_view(s).substr(0, brace));
    s = s.substr(brace + 1, s.size() - brace - 2);
  }
  if (trim(s).empty()) return r;
  for (const auto& part : split_top(s, ';')) {
    if (part.empty()) continue;
    auto eq = part.find('=');
    if (eq == std::string::npos) throw SyntaxError("record field without '=': " + part, 0);
    r.fields.emplace_back(trim(std::string_view(part).substr(0, eq)), trim(std::string_view(part).substr(eq + 1)));
  }
  return r;
}

std::vector<Scalar> parse_vector(std::string_view text, Mode mode) {
  std::string s = trim(text);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw SyntaxError("expected '[...]'", 0);
  std::vector<Scalar> out;
  std::string inner = trim(std::string_view(s).substr(1, s.size() - 2));
  if (inner.empty()) return out;
  for (const auto& item : split_top(inner, ',')) {
    try {
      out.push_back(Scalar::parse(item, mode));
    } catch (const PreconditionError& e) {
      throw SyntaxError(e.what(), 0);
    }
  }
  return out;
}

std::vector<std::vector<Scalar>> parse_matrix(std::string_view text, Mode mode) {
  std::string s = trim(text);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw SyntaxError("expected '[[...], ...]'", 0);
  std::vector<std::vector<Scalar>> rows;
  for (const auto& row : split_top(std::string_view(s).substr(1, s.size() - 2), ',')) rows.push_back(parse_vector(row, mode));
  for (const auto& r : rows)
    if (r.size() != rows.front().size()) throw SyntaxError("ragged matrix", 0);
  return rows;
}

std::string vector_str(const std::vector<Scalar>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i].str();
  return out + "]";
}

std::string matrix_str(const std::vector<std::vector<Scalar>>& rows) {
  std::string out = "[";
  for (std::size_t i = 0; i < rows.size(); ++i) out += (i ? ", " : "") + vector_str(rows[i]);
  return out + "]";
}

}  // namespace liederiv
