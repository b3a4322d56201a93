#pragma once

#include <vector>

#include "liederiv/poly.hpp"

namespace liederiv {

// Closed 1-form ω = Σ ωᵢ(x) dxⁱ with polynomial, fiber-free components.
//
// Construction checks ∂ᵢωⱼ = ∂ⱼωᵢ (exactly, or to a small tolerance for
// Approx data) and reports the first offending pair.
class ClosedOneForm {
 public:
  explicit ClosedOneForm(int dim = 1, Mode mode = Mode::Exact);
  // Throws PreconditionError naming (i, j) when the form is not closed.
  explicit ClosedOneForm(std::vector<SymbolPoly> components);
  static ClosedOneForm exact(const SymbolPoly& h);

  int dim() const { return dim_; }
  Mode mode() const { return mode_; }
  const std::vector<SymbolPoly>& components() const { return components_; }
  const SymbolPoly& operator[](int i) const { return components_[static_cast<std::size_t>(i)]; }
  bool is_zero() const;

  ClosedOneForm to_approx() const;
  ClosedOneForm to_mode(Mode m) const;

  ClosedOneForm operator-() const;
  friend ClosedOneForm operator+(const ClosedOneForm& a, const ClosedOneForm& b);
  friend ClosedOneForm operator-(const ClosedOneForm& a, const ClosedOneForm& b) { return a + (-b); }
  friend ClosedOneForm operator*(const Scalar& c, const ClosedOneForm& w);
  bool operator==(const ClosedOneForm& o) const = default;

 private:
  int dim_;
  Mode mode_;
  std::vector<SymbolPoly> components_;
};

// Returns the first (i, j) with ∂ᵢωⱼ ≠ ∂ⱼωᵢ, or {-1, -1} when closed.
std::pair<int, int> closedness_defect(const std::vector<SymbolPoly>& components, double tol = 1e-9);

// Σᵢ (∂_{ξᵢ}a ∂_{xⁱ}b − ∂_{xⁱ}a ∂_{ξᵢ}b), so that {ξⱼ, xⁱ} = δⁱⱼ.
SymbolPoly poisson_bracket(const SymbolPoly& a, const SymbolPoly& b);

// Deg: scales the fiber-degree-i part by (i − 1).
SymbolPoly deg_derivation(const SymbolPoly& s);

// ω^v(s) = Σᵢ ωᵢ(x) ∂_{ξᵢ}s.
SymbolPoly vertical_lift_apply(const ClosedOneForm& w, const SymbolPoly& s);

// h with dh = ω and h(0) = 0, by radial integration h(x) = ∫₀¹ Σᵢ ωᵢ(tx) xⁱ dt.
SymbolPoly potential(const ClosedOneForm& w);

// ω(X) = Σᵢ ωᵢ Xⁱ for the component functions of a vector field.
SymbolPoly pair_with(const ClosedOneForm& w, const std::vector<SymbolPoly>& field_components);

}  // namespace liederiv
