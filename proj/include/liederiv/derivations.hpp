#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "liederiv/symbol.hpp"
#include "liederiv/weyl.hpp"

namespace liederiv {

// Divergence of the density |η| = e^g |dx|: div X = Σᵢ ∂ᵢXⁱ + X(g).
struct Divergence {
  SymbolPoly weight;  // g, fiber-free; g = 0 is the standard density

  static Divergence standard(int dim, Mode mode = Mode::Exact) { return {SymbolPoly(dim, mode)}; }
  bool operator==(const Divergence&) const = default;
};

// Throws unless X is a vector field (order ≤ 1, X(1) = 0).
SymbolPoly divergence(const Divergence& div, const WeylOp& X);

// C_{Y,κ,λ,ω}(X + f) = [Y, X + f] + κ f + λ div X + ω(X) on first-order operators.
struct D1Derivation {
  WeylOp Y;
  Scalar kappa;
  Scalar lambda;
  ClosedOneForm omega;
  Divergence div;
};

// C_{P,κ,ω}(S) = {P, S} + κ Deg(S) + ω^v(S). Normalized when P vanishes on the zero section.
struct SDerivation {
  SymbolPoly P;
  Scalar kappa;
  ClosedOneForm omega;

  bool normalized() const { return P.zero_section_part().is_zero(); }
};

// C_{P,ω}(D) = [P, D] + ω̄(D). Normalized when P(1) = 0.
struct DDerivation {
  WeylOp P;
  ClosedOneForm omega;

  bool normalized() const { return P.normal_symbol().zero_section_part().is_zero(); }
};

// Throws PreconditionError when order(op) > 1.
WeylOp apply_d1_derivation(const D1Derivation& c, const WeylOp& op);
SymbolPoly apply_s_derivation(const SDerivation& c, const SymbolPoly& s);
WeylOp apply_d_derivation(const DDerivation& c, const WeylOp& d);

// ω̄(D) = [D, h] for the potential h of ω.
WeylOp lowering_derivation(const ClosedOneForm& omega, const WeylOp& d);

// The gauge representative with P(1) = 0: (P − h, ω − dh) for h = P(1).
DDerivation normalize_d_pair(const WeylOp& P, const ClosedOneForm& omega);
// (P − h, κ, ω − dh) for h the zero-section part of P.
SDerivation normalize_s_pair(const SymbolPoly& P, const Scalar& kappa, const ClosedOneForm& omega);

using OpMap = std::function<WeylOp(const WeylOp&)>;
using SymbolMap = std::function<SymbolPoly(const SymbolPoly&)>;

enum class Algebra { D1, S, D };
std::string_view algebra_name(Algebra a);

struct Witness {
  std::size_t trial = 0;
  std::string a, b;
  std::string lhs, rhs;
  std::string note;
};

struct CheckOptions {
  int dim = 2;
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  int max_order = 3;  // operator order / fiber degree of random elements
  int max_base = 3;   // coefficient degree of random elements
  unsigned workers = 1;
  std::size_t max_witnesses = 3;
};

struct DerivationReport {
  Algebra algebra = Algebra::D;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::vector<Witness> witnesses;

  bool passed() const { return failures == 0; }
};

// C[A, B] = [CA, B] + [A, CB] on random pairs; for D1 also checks C(A) ∈ 𝒟¹.
// Trial k draws from its own seed stream, so reports do not depend on `workers`.
DerivationReport check_derivation_property(const OpMap& c, Algebra algebra, const CheckOptions& opt);
DerivationReport check_derivation_property(const SymbolMap& c, const CheckOptions& opt);

struct RelationResult {
  std::string table;
  std::string relation;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::vector<Witness> witnesses;
};

struct TableReport {
  std::uint64_t seed = 0;
  std::vector<RelationResult> relations;

  bool passed() const;
};

// Commutation relations of Der 𝒟¹, Der 𝒮 and Der 𝒟 as equalities of maps on
// random probes, including the vanishing of every commutator not listed.
TableReport verify_commutation_tables(int dim, std::size_t trials, std::uint64_t seed);

// σᵢ(C(quantize(s))) for s fiber-homogeneous of degree i. Throws when s is not
// homogeneous or C raises the order of quantize(s) (C does not respect the filtration).
SymbolPoly induced_classical_derivation(const DDerivation& c, const SymbolPoly& s);
// Same map with an explicit lift of s (any operator whose i-th symbol is s).
SymbolPoly induced_classical_derivation(const DDerivation& c, const SymbolPoly& s, const WeylOp& lift);

enum class Lemma1Algebra { Weyl, SymbolGraded, SymbolFiltered };
std::string_view lemma1_algebra_name(Lemma1Algebra a);

struct Lemma1Caps {
  int dim = 1;
  int max_order = 3;  // order / fiber degree of the truncated space
  int max_base = 3;   // coefficient degree of the truncated space and the probes
};

struct Lemma1Report {
  Lemma1Algebra algebra = Lemma1Algebra::Weyl;
  int i = 0, k = 0;
  Lemma1Caps caps;
  std::size_t space_dim = 0;  // dimension of the truncated space
  std::size_t lhs_dim = 0;    // dim {A : [A, probes] ⊂ target}
  std::size_t rhs_dim = 0;    // dim (ℝ·1 + expected filter) ∩ truncated space
  bool rhs_in_lhs = false;
  bool lhs_in_rhs = false;
  std::vector<std::string> lhs_basis;  // printed basis of the computed subspace

  bool equal() const { return rhs_in_lhs && lhs_in_rhs; }
};

// Truncated verification of the "extended" filter characterizations: computes
// {A : [A, 𝒫_k-probes] ⊂ target_i} by exact linear algebra over the monomial
// basis and compares it with ℝ·1 + 𝒫^{i−k+1}. Caps above (n 2, order 3, degree 3) are refused.
Lemma1Report lemma1_bruteforce(Lemma1Algebra algebra, int i, int k, const Lemma1Caps& caps);

// Parameter read-off from a black-box derivation (uniqueness of normalized data).
// κ = −C(1); P from C(xʲ) = ∂_{ξⱼ}P − κxʲ; ω from C(ξⱼ).
SDerivation read_off_s(const SymbolMap& c, int dim, Mode mode = Mode::Exact);
// P from [P, xʲ] = C(xʲ) with P(1) = 0; ω from C(∂ⱼ) − [P, ∂ⱼ].
DDerivation read_off_d(const OpMap& c, int dim, Mode mode = Mode::Exact);
// κ = C(1); Y from C(xʲ) − κxʲ; λ and ω from C on ∂ⱼ and x¹∂₁.
D1Derivation read_off_d1(const OpMap& c, const Divergence& div);

struct DegSolveReport {
  std::size_t unknowns = 0;
  std::size_t equations = 0;
  int rank = 0;
  int augmented_rank = 0;

  bool solvable() const { return rank == augmented_rank; }
};

// Tries to solve C̃ = Deg over filtration-respecting C_{P,ω} with P a vector
// field of coefficient degree ≤ max_base and ω = dh, deg h ≤ max_base + 1,
// probing on monomials of 𝒮_0..𝒮_2.
DegSolveReport solve_deg_as_induced(int dim, int max_base);

}  // namespace liederiv
