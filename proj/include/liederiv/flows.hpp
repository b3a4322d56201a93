#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "liederiv/derivations.hpp"

namespace liederiv {

// Dense square matrix of Scalars (row-major).
class Matrix {
 public:
  explicit Matrix(int n = 1, Mode mode = Mode::Exact);
  static Matrix identity(int n, Mode mode = Mode::Exact);
  static Matrix from_rows(const std::vector<std::vector<Scalar>>& rows);

  int size() const { return n_; }
  Mode mode() const { return mode_; }
  const Scalar& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * n_ + j)]; }
  Scalar& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * n_ + j)]; }
  std::vector<std::vector<Scalar>> rows() const;

  Matrix transpose() const;
  Scalar determinant() const;
  Scalar trace() const;
  // Throws PreconditionError when singular.
  Matrix inverse() const;
  bool is_nilpotent() const;
  Matrix to_approx() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Scalar& c, const Matrix& a);
  std::vector<Scalar> apply(const std::vector<Scalar>& v) const;
  bool operator==(const Matrix& o) const;

 private:
  int n_;
  Mode mode_;
  std::vector<Scalar> a_;
};

double max_distance(const Matrix& a, const Matrix& b);

// x ↦ Ax + b with A invertible.
struct AffineMap {
  Matrix A;
  std::vector<Scalar> b;

  AffineMap(Matrix A_, std::vector<Scalar> b_);
  static AffineMap identity(int n, Mode mode = Mode::Exact);
  static AffineMap translation(std::vector<Scalar> b);

  int dim() const { return A.size(); }
  Mode mode() const { return A.mode(); }
  AffineMap inverse() const;
  AffineMap to_approx() const;
  // The components φ(x)ⁱ as fiber-free polynomials in dimension `dim`.
  std::vector<SymbolPoly> images(int dim) const;
  std::vector<Scalar> operator()(const std::vector<Scalar>& x) const;
  bool operator==(const AffineMap&) const = default;
};

// (this ∘ other)(x) = this(other(x)).
AffineMap compose(const AffineMap& a, const AffineMap& b);
double max_distance(const AffineMap& a, const AffineMap& b);

// The affine vector field Y(x) = Ax + b.
struct FlowField {
  Matrix A;
  std::vector<Scalar> b;

  int dim() const { return A.size(); }
  Mode mode() const { return A.mode(); }
  WeylOp as_vector_field() const;
  // Reads off (A, b) from a vector field with affine coefficients; Unsupported otherwise.
  static FlowField from_vector_field(const WeylOp& Y);
  FlowField operator-() const;
  FlowField to_approx() const;
};

// Exp(tY). Exact mode needs a nilpotent A (the flow is then polynomial in t);
// otherwise ExactnessUnavailable. Approx mode uses a matrix exponential.
AffineMap flow_at(const FlowField& Y, const Scalar& t);

// Exp(sY) with s the extra last base variable of dimension n + 1. Exact, nilpotent A only.
std::vector<SymbolPoly> symbolic_flow(const FlowField& Y);

// J(φ) = e^{exponent}·factor, with exponent = g∘φ − g and factor = |det A|.
struct Jacobian {
  SymbolPoly exponent;
  Scalar factor;
  bool operator==(const Jacobian&) const = default;
};

// Div(φ) = ln J(φ) = exponent + ln(factor).
struct LogFunction {
  SymbolPoly poly;
  Scalar log_of;
  // The function as one polynomial; Approx, or Exact when log_of = 1.
  SymbolPoly value() const;
};

Jacobian jacobian_cocycle(const AffineMap& phi, const Divergence& div);
// ψ*(J(φ))·J(ψ), the right-hand side of the cocycle identity for J(φ∘ψ).
Jacobian cocycle_rhs(const Jacobian& j_phi, const AffineMap& psi, const Jacobian& j_psi);
LogFunction div_of_map(const AffineMap& phi, const Divergence& div);
// ln J(Exp(tY)), from the Jacobian.
LogFunction div_of_flow(const FlowField& Y, const Scalar& t, const Divergence& div);
// ∫₀ᵗ (div Y)∘Exp(sY) ds: exact when A is nilpotent, Gauss-Legendre (32 nodes) in Approx mode.
SymbolPoly div_flow_integral(const FlowField& Y, const Scalar& t, const Divergence& div);
SymbolPoly pullback_function(const SymbolPoly& f, const AffineMap& phi);
// (φ*ω)ⱼ = Σᵢ ωᵢ∘φ · A_{ij}.
ClosedOneForm pullback_form(const ClosedOneForm& w, const AffineMap& phi);
// (φ_*X)(f) = (X(f∘φ))∘φ⁻¹; for vector fields and, by the same substitution, any operator.
WeylOp pushforward(const AffineMap& phi, const WeylOp& d);
// S ∘ (lift of φ⁻¹): (x, ξ) ↦ S(φ⁻¹x, Aᵀξ).
SymbolPoly cotangent_pushforward(const AffineMap& phi, const SymbolPoly& s);
SymbolPoly fiber_homothety(const SymbolPoly& s, const Scalar& K);
SymbolPoly fiber_translation(const SymbolPoly& s, const ClosedOneForm& w);
// e^{ω̄}(D) = Σ ω̄ᵏ(D)/k!, a finite sum.
WeylOp lowering_exponential(const ClosedOneForm& w, const WeylOp& d);
// e^{ω^v}(S) as the finite series.
SymbolPoly vertical_exponential(const ClosedOneForm& w, const SymbolPoly& s);

struct AutD1 {
  AffineMap phi;
  Scalar K;
  Scalar Lambda;
  ClosedOneForm Omega;
  Divergence div;
};

struct AutS {
  AffineMap phi;
  Scalar K;
  ClosedOneForm Omega;
};

struct AutD {
  AffineMap phi;
  ClosedOneForm Omega;
  bool conj = false;
};

// φ_*(X) + (K f + Λ div X + Ω(X))∘φ⁻¹.
WeylOp apply_aut_d1(const AutD1& a, const WeylOp& op);
// K⁻¹ S∘𝒯_Ω∘h_K∘(lift of φ⁻¹).
SymbolPoly apply_aut_s(const AutS& a, const SymbolPoly& s);
// φ_* ∘ 𝒞^conj ∘ e^{Ω̄}.
WeylOp apply_aut_d(const AutD& a, const WeylOp& d);
AutD1 compose(const AutD1& a, const AutD1& b);
AutS compose(const AutS& a, const AutS& b);
// Only for conj = false on both sides.
AutD compose(const AutD& a, const AutD& b);

double max_distance(const ClosedOneForm& a, const ClosedOneForm& b);
double max_distance(const AutD1& a, const AutD1& b);
double max_distance(const AutS& a, const AutS& b);
double max_distance(const AutD& a, const AutD& b);

struct NotIntegrable {
  std::string reason;
};

template <class Aut>
using GroupElement = std::variant<Aut, NotIntegrable>;

// Φ_t generated by c. The underlying diffeomorphisms are φ_t = Exp(−tY), so
// that d/dt Φ_t at 0 is c. Y must be affine (Unsupported otherwise). Exact
// mode needs nilpotent A and κ = 0; t's mode selects the regime.
GroupElement<AutD1> one_param_group_d1(const D1Derivation& c, const Scalar& t);
// NotIntegrable when the normalized P is not in 𝒮₁.
GroupElement<AutS> one_param_group_s(const SDerivation& c, const Scalar& t);
// NotIntegrable when the normalized P is not a vector field.
GroupElement<AutD> one_param_group_d(const DDerivation& c, const Scalar& t);

using OpFamily = std::function<WeylOp(const Scalar& t, const WeylOp&)>;
using SymbolFamily = std::function<SymbolPoly(const Scalar& t, const SymbolPoly&)>;

struct GeneratorReport {
  Mode regime = Mode::Exact;
  std::size_t probes = 0;
  std::size_t failures = 0;
  std::vector<Witness> witnesses;
  bool passed() const { return failures == 0; }
};

// d/dt Φ_t(probe) at t = 0 against c(probe). Exact: Φ_t(probe) is sampled at
// t = 0, 1, 2, ... until the finite differences vanish, and the derivative of
// the interpolating polynomial is compared exactly. Approx: central difference
// with h = 1e−5, per-coefficient tolerance 1e−6.
GeneratorReport generator_check(const OpFamily& family, const OpMap& c, const std::vector<WeylOp>& probes, Mode regime);
GeneratorReport generator_check(const SymbolFamily& family, const SymbolMap& c, const std::vector<SymbolPoly>& probes,
                                Mode regime);

OpFamily family_d1(const D1Derivation& c);
SymbolFamily family_s(const SDerivation& c);
OpFamily family_d(const DDerivation& c);

}  // namespace liederiv
