#include "liederiv/random.hpp"

namespace liederiv {

std::uint64_t RandomSource::derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the pair
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int RandomSource::uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

Scalar RandomSource::coefficient(Mode mode) {
  int v = uniform_int(1, 6);
  return Scalar::from_int(v <= 3 ? v : 3 - v, mode);
}

MultiIndex RandomSource::multi_index(int dim, int max_degree) {
  // Uniform over {α : |α| ≤ max_degree} by rejection from the box.
  while (true) {
    MultiIndex m(dim);
    for (int i = 0; i < dim; ++i) m[i] = uniform_int(0, max_degree);
    if (m.degree() <= max_degree) return m;
  }
}

SymbolPoly RandomSource::symbol(int dim, int max_fiber, int max_base, int terms, Mode mode) {
  SymbolPoly p(dim, mode);
  int count = uniform_int(1, terms);
  for (int k = 0; k < count; ++k) p.add_term(Monomial{multi_index(dim, max_base), multi_index(dim, max_fiber)}, coefficient(mode));
  return p;
}

SymbolPoly RandomSource::homogeneous_symbol(int dim, int degree, int max_base, int terms, Mode mode) {
  while (true) {
    SymbolPoly p(dim, mode);
    int count = uniform_int(1, terms);
    for (int k = 0; k < count; ++k) {
      MultiIndex fiber(dim);
      for (int j = 0; j < degree; ++j) fiber[uniform_int(0, dim - 1)] += 1;
      p.add_term(Monomial{multi_index(dim, max_base), fiber}, coefficient(mode));
    }
    if (!p.is_zero()) return p;
  }
}

SymbolPoly RandomSource::function(int dim, int max_base, int terms, Mode mode) {
  return symbol(dim, 0, max_base, terms, mode);
}

WeylOp RandomSource::op(int dim, int max_order, int max_base, int terms, Mode mode) {
  return WeylOp(symbol(dim, max_order, max_base, terms, mode));
}

WeylOp RandomSource::vector_field(int dim, int max_base, int terms, Mode mode) {
  return WeylOp(homogeneous_symbol(dim, 1, max_base, terms, mode));
}

WeylOp RandomSource::first_order(int dim, int max_base, int terms, Mode mode) {
  return vector_field(dim, max_base, terms, mode) + WeylOp(function(dim, max_base, terms, mode));
}

ClosedOneForm RandomSource::closed_form(int dim, int max_base, int terms, Mode mode) {
  return ClosedOneForm::exact(function(dim, max_base + 1, terms, mode));
}

}  // namespace liederiv
