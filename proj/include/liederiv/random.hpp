#pragma once

#include <cstdint>
#include <random>

#include "liederiv/symbol.hpp"
#include "liederiv/weyl.hpp"

namespace liederiv {

// Sparse random elements for property checks: monomials sampled uniformly
// from a degree box, coefficients uniform integers in [-3, 3] \ {0}.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : rng_(seed) {}

  // Seed for an independent stream, so trial k draws the same data no matter
  // how trials are distributed over workers.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

  int uniform_int(int lo, int hi);
  Scalar coefficient(Mode mode = Mode::Exact);
  MultiIndex multi_index(int dim, int max_degree);

  // Up to `terms` monomials with |base| ≤ max_base, |fiber| ≤ max_fiber.
  SymbolPoly symbol(int dim, int max_fiber, int max_base, int terms = 4, Mode mode = Mode::Exact);
  // A fiber-homogeneous symbol of fiber degree exactly `degree` (nonzero).
  SymbolPoly homogeneous_symbol(int dim, int degree, int max_base, int terms = 3, Mode mode = Mode::Exact);
  SymbolPoly function(int dim, int max_base, int terms = 3, Mode mode = Mode::Exact);
  WeylOp op(int dim, int max_order, int max_base, int terms = 4, Mode mode = Mode::Exact);
  WeylOp vector_field(int dim, int max_base, int terms = 3, Mode mode = Mode::Exact);
  WeylOp first_order(int dim, int max_base, int terms = 4, Mode mode = Mode::Exact);
  // dh for a random h with h(0) = 0 (every closed form on ℝⁿ is exact).
  ClosedOneForm closed_form(int dim, int max_base, int terms = 3, Mode mode = Mode::Exact);

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace liederiv
