#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "liederiv/symbol.hpp"
#include "liederiv/weyl.hpp"

namespace liederiv {

// Which tokens are legal and how `*` is interpreted.
//   Symbol:   x1..xn, p1..pn; `*` is the commutative product.
//   Operator: x1..xn, d1..dn; `*` is composition, normal-ordered on lowering.
//   OneForm:  x1..xn, dx1..dxn; the result must be linear in the dx's.
enum class Context { Symbol, Operator, OneForm };

struct Ast {
  enum class Kind { Number, Variable, Add, Sub, Neg, Mul, Div, Pow };
  enum class Var { X, P, D, DX };

  Kind kind = Kind::Number;
  std::string number;  // Number
  Var var = Var::X;    // Variable
  int index = 0;       // Variable, 0-based
  int exponent = 0;    // Pow
  std::vector<Ast> children;
  std::size_t position = 0;
};

// Throws SyntaxError with the offending offset; also rejects tokens that are
// illegal in `ctx` and variable indices above `dim`.
Ast parse(std::string_view text, Context ctx, int dim);

SymbolPoly parse_symbol(std::string_view text, int dim, Mode mode = Mode::Exact);
WeylOp parse_operator(std::string_view text, int dim, Mode mode = Mode::Exact);
// Components of a 1-form without the closedness check.
std::vector<SymbolPoly> parse_oneform_components(std::string_view text, int dim, Mode mode = Mode::Exact);
// Parses and validates; a non-closed form raises PreconditionError, not SyntaxError.
ClosedOneForm parse_oneform(std::string_view text, int dim, Mode mode = Mode::Exact);

// Canonical form: `c * x1^a1 * ... * p1^b1 * ...` per term, terms in canonical
// order joined by ` + `; unit exponents and unit coefficients are omitted.
std::string to_string(const SymbolPoly& p);
// Same syntax with `d` in place of `p`.
std::string to_string(const WeylOp& d);
// `(w1) * dx1 + ... + (wn) * dxn`, zero components omitted, `0` for the zero form.
std::string to_string(const ClosedOneForm& w);

// `key = value; key = value` records with an optional `tag{...}` wrapper.
// Splits only at top-level separators, so values may contain brackets.
struct Record {
  std::string tag;
  std::vector<std::pair<std::string, std::string>> fields;

  const std::string& at(std::string_view key) const;
  bool has(std::string_view key) const;
  std::string str() const;
};

Record parse_record(std::string_view text);

// `[[a, b], [c, d]]` and `[a, b]`.
std::vector<std::vector<Scalar>> parse_matrix(std::string_view text, Mode mode);
std::vector<Scalar> parse_vector(std::string_view text, Mode mode);
std::string matrix_str(const std::vector<std::vector<Scalar>>& rows);
std::string vector_str(const std::vector<Scalar>& v);

}  // namespace liederiv
