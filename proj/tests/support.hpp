#pragma once

#include <string_view>

#include "liederiv/flows.hpp"
#include "liederiv/random.hpp"
#include "liederiv/text.hpp"
#include "oracle.hpp"

namespace support {

using namespace liederiv;

inline SymbolPoly sym(std::string_view s, int n = 1, Mode m = Mode::Exact) { return parse_symbol(s, n, m); }
inline WeylOp op(std::string_view s, int n = 1, Mode m = Mode::Exact) { return parse_operator(s, n, m); }
inline ClosedOneForm form(std::string_view s, int n = 1, Mode m = Mode::Exact) { return parse_oneform(s, n, m); }
inline Scalar q(long a, long b = 1) { return Scalar::rational(a, b); }

// Random invertible affine map: unipotent-times-diagonal with small rational entries.
inline AffineMap random_affine(RandomSource& rng, int n, Mode mode = Mode::Exact) {
  Matrix L = Matrix::identity(n, mode), U = Matrix::identity(n, mode), D = Matrix::identity(n, mode);
  for (int i = 0; i < n; ++i) {
    int d = 0;
    while (d == 0) d = rng.uniform_int(-2, 2);
    D(i, i) = Scalar::from_int(d, mode);
    for (int j = 0; j < i; ++j) L(i, j) = Scalar::from_int(rng.uniform_int(-2, 2), mode);
    for (int j = i + 1; j < n; ++j) U(i, j) = Scalar::from_int(rng.uniform_int(-2, 2), mode);
  }
  std::vector<Scalar> b;
  for (int i = 0; i < n; ++i) b.push_back(Scalar::from_int(rng.uniform_int(-2, 2), mode));
  return AffineMap(L * D * U, b);
}

// Strictly upper triangular A, so the flow is polynomial in t.
inline FlowField random_nilpotent_field(RandomSource& rng, int n, Mode mode = Mode::Exact) {
  Matrix A(n, mode);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) A(i, j) = Scalar::from_int(rng.uniform_int(-2, 2), mode);
  std::vector<Scalar> b;
  for (int i = 0; i < n; ++i) b.push_back(Scalar::from_int(rng.uniform_int(-2, 2), mode));
  return FlowField{A, b};
}

// Diagonal A with small nonzero entries.
inline FlowField random_diagonal_field(RandomSource& rng, int n) {
  Matrix A(n, Mode::Approx);
  for (int i = 0; i < n; ++i) A(i, i) = Scalar::real(rng.uniform_int(1, 4) * 0.25 * (rng.uniform_int(0, 1) ? 1 : -1));
  std::vector<Scalar> b;
  for (int i = 0; i < n; ++i) b.push_back(Scalar::real(rng.uniform_int(-2, 2)));
  return FlowField{A, b};
}

inline bool close(const SymbolPoly& a, const SymbolPoly& b, double tol) {
  return max_coefficient_distance(a, b) <= tol;
}
inline bool close(const WeylOp& a, const WeylOp& b, double tol) {
  return max_coefficient_distance(a.normal_symbol(), b.normal_symbol()) <= tol;
}

// x^e as an oracle polynomial in dimension n.
inline oracle::Poly test_monomial(int n, const std::vector<int>& e) {
  oracle::Exps x(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(i)];
  return {{x, 1}};
}

// All x-monomials with total degree ≤ d.
inline std::vector<oracle::Poly> test_functions(int n, int d) {
  std::vector<oracle::Poly> out;
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == n) {
      out.push_back(test_monomial(n, e));
      return;
    }
    for (int k = 0; k <= left; ++k) {
      e[static_cast<std::size_t>(i)] = k;
      self(self, i + 1, left - k);
    }
  };
  rec(rec, 0, d);
  return out;
}

}  // namespace support
