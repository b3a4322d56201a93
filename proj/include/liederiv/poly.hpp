#pragma once

#include <array>
#include <compare>
#include <map>
#include <span>
#include <vector>

#include "liederiv/scalar.hpp"

namespace liederiv {

// Exponent vector of length n (the ambient dimension), stored inline.
class MultiIndex {
 public:
  static constexpr int kMaxSize = 8;

  MultiIndex() = default;
  explicit MultiIndex(int n);
  explicit MultiIndex(const std::vector<int>& e);
  static MultiIndex unit(int n, int axis);

  int size() const { return n_; }
  int operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return e_[static_cast<std::size_t>(i)]; }
  int degree() const;
  bool is_zero() const { return degree() == 0; }
  // componentwise <=
  bool divides(const MultiIndex& o) const;

  MultiIndex operator+(const MultiIndex& o) const;
  MultiIndex operator-(const MultiIndex& o) const;

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;

 private:
  std::array<int, kMaxSize> e_{};  // unused slots stay zero
  int n_ = 0;
};

// x^base ξ^fiber. Ordering is lexicographic on the concatenation (base, fiber).
struct Monomial {
  MultiIndex base;
  MultiIndex fiber;

  auto operator<=>(const Monomial&) const = default;
  bool operator==(const Monomial&) const = default;
};

enum class Axis { Base, Fiber };

// Polynomial in x¹..xⁿ (base) and ξ₁..ξₙ (fiber) with Scalar coefficients.
//
// Canonical: no zero coefficients stored, terms kept in Monomial order, so
// structural equality is mathematical equality. The zero polynomial is the
// empty map and still carries its dimension and scalar mode.
class SymbolPoly {
 public:
  using Terms = std::map<Monomial, Scalar>;

  explicit SymbolPoly(int dim = 1, Mode mode = Mode::Exact);

  static SymbolPoly constant(int dim, const Scalar& c);
  static SymbolPoly term(int dim, Monomial m, const Scalar& c);
  static SymbolPoly x(int dim, int axis, Mode mode = Mode::Exact);
  static SymbolPoly xi(int dim, int axis, Mode mode = Mode::Exact);

  int dim() const { return dim_; }
  Mode mode() const { return mode_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Scalar coefficient(const Monomial& m) const;

  // Adds c to the coefficient of m, dropping the term if it cancels.
  void add_term(const Monomial& m, const Scalar& c);

  // Highest |fiber| over terms; -1 for the zero polynomial.
  int fiber_degree() const;
  // Lowest |fiber| over terms; -1 for the zero polynomial.
  int min_fiber_degree() const;
  int base_degree() const;
  // True when every term has the same fiber degree (zero counts as homogeneous).
  bool is_fiber_homogeneous() const;
  bool is_fiber_free() const { return fiber_degree() <= 0; }
  // Sum of the terms of fiber degree exactly i.
  SymbolPoly homogeneous_part(int i) const;
  // Value at the zero section (the fiber-degree-0 part).
  SymbolPoly zero_section_part() const { return homogeneous_part(0); }

  SymbolPoly to_approx() const;
  SymbolPoly to_mode(Mode m) const;

  SymbolPoly operator-() const;
  SymbolPoly& operator+=(const SymbolPoly& o);
  SymbolPoly& operator-=(const SymbolPoly& o);
  SymbolPoly& operator*=(const Scalar& c);
  friend SymbolPoly operator+(SymbolPoly a, const SymbolPoly& b) { return a += b; }
  friend SymbolPoly operator-(SymbolPoly a, const SymbolPoly& b) { return a -= b; }
  friend SymbolPoly operator*(SymbolPoly a, const Scalar& c) { return a *= c; }
  friend SymbolPoly operator*(const Scalar& c, SymbolPoly a) { return a *= c; }
  friend SymbolPoly operator*(const SymbolPoly& a, const SymbolPoly& b);

  bool operator==(const SymbolPoly& o) const;

  // Pads every exponent vector with zeros up to new_dim (new variables are appended).
  SymbolPoly embed(int new_dim) const;

 private:
  void check_compatible(const SymbolPoly& o) const;

  int dim_;
  Mode mode_;
  Terms terms_;
};

SymbolPoly poly_add(const SymbolPoly& a, const SymbolPoly& b);
SymbolPoly poly_mul(const SymbolPoly& a, const SymbolPoly& b);
// Formal partial derivative ∂/∂x^axis or ∂/∂ξ_axis (axis is 0-based).
SymbolPoly poly_diff(const SymbolPoly& a, Axis which, int axis);
SymbolPoly pow(const SymbolPoly& a, int e);

// Replaces x^i by x_images[i] and ξ_i by xi_images[i]. All images share one
// dimension (which may differ from p's) and p's scalar mode.
SymbolPoly substitute(const SymbolPoly& p, std::span<const SymbolPoly> x_images,
                      std::span<const SymbolPoly> xi_images);

// ∫₀ᵘᵖᵖᵉʳ p ds where s is the last base variable of p; the result drops that
// variable (dimension decreases by one). p must not depend on the last fiber variable.
SymbolPoly integrate_last_base(const SymbolPoly& p, const Scalar& upper);

// Max |a_m - b_m| over the union of monomials.
double max_coefficient_distance(const SymbolPoly& a, const SymbolPoly& b);

}  // namespace liederiv
