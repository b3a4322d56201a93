#include "liederiv/serialize.hpp"

#include "liederiv/text.hpp"

namespace liederiv {

namespace {

Record expect(std::string_view text, std::string_view tag) {
  Record r = parse_record(text);
  if (r.tag != tag) throw SyntaxError("expected a '" + std::string(tag) + "{...}' record, got '" + r.tag + "'", 0);
  return r;
}

// Missing optional fields fall back to zero data.
std::string field_or(const Record& r, std::string_view key, std::string_view fallback) {
  return r.has(key) ? r.at(key) : std::string(fallback);
}

Scalar scalar_field(const Record& r, std::string_view key, std::string_view fallback, Mode mode) {
  try {
    return Scalar::parse(field_or(r, key, fallback), mode);
  } catch (const SyntaxError&) {
    throw;
  } catch (const PreconditionError& e) {
    throw SyntaxError(std::string(key) + ": " + e.what(), 0);
  }
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

bool parse_bool(std::string_view s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw SyntaxError("expected true or false, got '" + std::string(s) + "'", 0);
}

}  // namespace

std::string to_string(const Matrix& m) { return matrix_str(m.rows()); }

std::string to_string(const AffineMap& phi) {
  return Record{"affine", {{"A", to_string(phi.A)}, {"b", vector_str(phi.b)}}}.str();
}

std::string to_string(const FlowField& Y) {
  return Record{"field", {{"A", to_string(Y.A)}, {"b", vector_str(Y.b)}}}.str();
}

std::string to_string(const D1Derivation& c) {
  return Record{"d1",
                {{"Y", to_string(c.Y)},
                 {"kappa", c.kappa.str()},
                 {"lambda", c.lambda.str()},
                 {"omega", to_string(c.omega)},
                 {"weight", to_string(c.div.weight)}}}
      .str();
}

std::string to_string(const SDerivation& c) {
  return Record{"s", {{"P", to_string(c.P)}, {"kappa", c.kappa.str()}, {"omega", to_string(c.omega)}}}.str();
}

std::string to_string(const DDerivation& c) {
  return Record{"d", {{"P", to_string(c.P)}, {"omega", to_string(c.omega)}}}.str();
}

std::string to_string(const AutD1& a) {
  return Record{"aut_d1",
                {{"phi", to_string(a.phi)},
                 {"K", a.K.str()},
                 {"Lambda", a.Lambda.str()},
                 {"Omega", to_string(a.Omega)},
                 {"weight", to_string(a.div.weight)}}}
      .str();
}

std::string to_string(const AutS& a) {
  return Record{"aut_s", {{"phi", to_string(a.phi)}, {"K", a.K.str()}, {"Omega", to_string(a.Omega)}}}.str();
}

std::string to_string(const AutD& a) {
  return Record{"aut_d", {{"phi", to_string(a.phi)}, {"Omega", to_string(a.Omega)}, {"conj", bool_str(a.conj)}}}.str();
}

Matrix parse_matrix_value(std::string_view text, int dim, Mode mode) {
  auto rows = parse_matrix(text, mode);
  if (static_cast<int>(rows.size()) != dim || static_cast<int>(rows[0].size()) != dim)
    throw DimensionMismatch(static_cast<int>(rows.size()), dim);
  return Matrix::from_rows(rows);
}

AffineMap parse_affine(std::string_view text, int dim, Mode mode) {
  Record r = expect(text, "affine");
  auto b = parse_vector(r.at("b"), mode);
  if (static_cast<int>(b.size()) != dim) throw DimensionMismatch(static_cast<int>(b.size()), dim);
  return AffineMap(parse_matrix_value(r.at("A"), dim, mode), std::move(b));
}

FlowField parse_flow_field(std::string_view text, int dim, Mode mode) {
  Record r = expect(text, "field");
  auto b = parse_vector(r.at("b"), mode);
  if (static_cast<int>(b.size()) != dim) throw DimensionMismatch(static_cast<int>(b.size()), dim);
  return FlowField{parse_matrix_value(r.at("A"), dim, mode), std::move(b)};
}

D1Derivation parse_d1_derivation(std::string_view text, int dim, Mode mode) {
  Record r = expect(text, "d1");
  return {parse_operator(field_or(r, "Y", "0"), dim, mode), scalar_field(r, "kappa", "0", mode),
          scalar_field(r, "lambda", "0", mode), parse_oneform(field_or(r, "omega", "0"), dim, mode),
          Divergence{parse_symbol(field_or(r, "weight", "0"), dim, mode)}};
}

SDerivation parse_s_derivation(std::string_view text, int dim, Mode mode) {
  Record r = expect(text, "s");
  return {parse_symbol(field_or(r, "P", "0"), dim, mode), scalar_field(r, "kappa", "0", mode),
          parse_oneform(field_or(r, "omega", "0"), dim, mode)};
}

DDerivation parse_d_derivation(std::string_view text, int dim, Mode mode) {
  Record r = expect(text, "d");
  return {parse_operator(field_or(r, "P", "0"), dim, mode), parse_oneform(field_or(r, "omega", "0"), dim, mode)};
}

AutD1 parse_aut_d1(std::string_view text, int dim, Mode mode) {
  Record r = expect(text, "aut_d1");
  return {parse_affine(r.at("phi"), dim, mode), scalar_field(r, "K", "1", mode), scalar_field(r, "Lambda", "0", mode),
          parse_oneform(field_or(r, "Omega", "0"), dim, mode),
          Divergence{parse_symbol(field_or(r, "weight", "0"), dim, mode)}};
}

AutS parse_aut_s(std::string_view text, int dim, Mode mode) {
  Record r = expect(text, "aut_s");
  return {parse_affine(r.at("phi"), dim, mode), scalar_field(r, "K", "1", mode),
          parse_oneform(field_or(r, "Omega", "0"), dim, mode)};
}

AutD parse_aut_d(std::string_view text, int dim, Mode mode) {
  Record r = expect(text, "aut_d");
  return {parse_affine(r.at("phi"), dim, mode), parse_oneform(field_or(r, "Omega", "0"), dim, mode),
          parse_bool(field_or(r, "conj", "false"))};
}

}  // namespace liederiv
