#pragma once

#include <climits>
#include <utility>
#include <vector>

#include "liederiv/poly.hpp"

namespace liederiv {

// Differential operator Σ a_{β,α} x^β ∂^α with polynomial coefficients,
// stored in normal order (every x-factor left of every ∂-factor).
//
// The normal-ordered coefficients live in a SymbolPoly whose fiber index
// plays the role of the ∂ multi-index; this is also the standard-ordering
// full symbol of the operator.
class WeylOp {
 public:
  static constexpr int kZeroOrder = INT_MIN;

  explicit WeylOp(int dim = 1, Mode mode = Mode::Exact) : normal_(dim, mode) {}
  explicit WeylOp(SymbolPoly normal_symbol) : normal_(std::move(normal_symbol)) {}

  static WeylOp multiplication(const SymbolPoly& f);
  static WeylOp constant(int dim, const Scalar& c) { return WeylOp(SymbolPoly::constant(dim, c)); }
  static WeylOp x(int dim, int axis, Mode mode = Mode::Exact) { return WeylOp(SymbolPoly::x(dim, axis, mode)); }
  static WeylOp partial(int dim, int axis, Mode mode = Mode::Exact) { return WeylOp(SymbolPoly::xi(dim, axis, mode)); }
  static WeylOp vector_field(const std::vector<SymbolPoly>& components);

  int dim() const { return normal_.dim(); }
  Mode mode() const { return normal_.mode(); }
  bool is_zero() const { return normal_.is_zero(); }
  const SymbolPoly& normal_symbol() const { return normal_; }
  // Max |α| over terms; kZeroOrder for the zero operator.
  int order() const;
  // Order ≤ 1 with no zeroth-order part.
  bool is_vector_field() const;
  // Coefficients Xⁱ of a first-order operator (its zeroth-order part is ignored).
  std::vector<SymbolPoly> field_components() const;
  // D(f) for a fiber-free polynomial f, by literal differentiation.
  SymbolPoly apply(const SymbolPoly& f) const;

  WeylOp to_approx() const { return WeylOp(normal_.to_approx()); }
  WeylOp to_mode(Mode m) const { return WeylOp(normal_.to_mode(m)); }

  WeylOp operator-() const { return WeylOp(-normal_); }
  WeylOp& operator+=(const WeylOp& o) { normal_ += o.normal_; return *this; }
  WeylOp& operator-=(const WeylOp& o) { normal_ -= o.normal_; return *this; }
  WeylOp& operator*=(const Scalar& c) { normal_ *= c; return *this; }
  friend WeylOp operator+(WeylOp a, const WeylOp& b) { return a += b; }
  friend WeylOp operator-(WeylOp a, const WeylOp& b) { return a -= b; }
  friend WeylOp operator*(const Scalar& c, WeylOp a) { return a *= c; }
  friend WeylOp operator*(WeylOp a, const Scalar& c) { return a *= c; }
  bool operator==(const WeylOp& o) const { return normal_ == o.normal_; }

 private:
  SymbolPoly normal_;
};

// a ∘ b, re-normal-ordered with ∂^α x^β = Σ_{γ≤α} C(α,γ) (∂^γ x^β) ∂^{α−γ}.
WeylOp weyl_compose(const WeylOp& a, const WeylOp& b);
WeylOp weyl_commutator(const WeylOp& a, const WeylOp& b);

// σᵢ(D): the top-order symbol when i = order(D), zero when i > order(D).
// Throws for D = 0 or i < order(D).
SymbolPoly symbol_of_order(const WeylOp& d, int i);
SymbolPoly principal_symbol(const WeylOp& d);
WeylOp quantize_standard(const SymbolPoly& s);

// 𝒞(D) = −D*, with D* the formal adjoint for the standard density on ℝⁿ.
WeylOp conjugation(const WeylOp& d);
std::pair<SymbolPoly, WeylOp> split_constant_part(const WeylOp& d);

}  // namespace liederiv
