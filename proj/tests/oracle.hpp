#pragma once

// Straight-line reference implementations used as test oracles. They work on
// a bare exponent map over 2n variables (x1..xn then p1..pn) and share no
// arithmetic code with the library.

#include <gmpxx.h>

#include <map>
#include <vector>

#include "liederiv/weyl.hpp"

namespace oracle {

using Exps = std::vector<int>;
using Poly = std::map<Exps, mpq_class>;

inline Poly from(const liederiv::SymbolPoly& p) {
  const int n = p.dim();
  Poly r;
  for (const auto& [m, c] : p.terms()) {
    Exps e(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) {
      e[static_cast<std::size_t>(i)] = m.base[i];
      e[static_cast<std::size_t>(n + i)] = m.fiber[i];
    }
    r[e] = c.as_rational();
  }
  return r;
}

inline liederiv::SymbolPoly to(const Poly& p, int n) {
  liederiv::SymbolPoly r(n);
  for (const auto& [e, c] : p) {
    liederiv::MultiIndex b(n), f(n);
    for (int i = 0; i < n; ++i) {
      b[i] = e[static_cast<std::size_t>(i)];
      f[i] = e[static_cast<std::size_t>(n + i)];
    }
    r.add_term(liederiv::Monomial{b, f}, liederiv::Scalar::rational(c));
  }
  return r;
}

inline void clean(Poly& p) {
  for (auto it = p.begin(); it != p.end();) it = it->second == 0 ? p.erase(it) : std::next(it);
}

inline Poly add(Poly a, const Poly& b, const mpq_class& s = 1) {
  for (const auto& [e, c] : b) a[e] += s * c;
  clean(a);
  return a;
}

inline Poly mul(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Exps e = ea;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      r[e] += ca * cb;
    }
  clean(r);
  return r;
}

inline Poly diff(const Poly& a, int var) {
  Poly r;
  for (const auto& [e, c] : a) {
    int k = e[static_cast<std::size_t>(var)];
    if (k == 0) continue;
    Exps d = e;
    d[static_cast<std::size_t>(var)] -= 1;
    r[d] += c * k;
  }
  clean(r);
  return r;
}

// Σᵢ ∂_{pᵢ}a ∂_{xⁱ}b − ∂_{xⁱ}a ∂_{pᵢ}b
inline Poly poisson(const Poly& a, const Poly& b, int n) {
  Poly r;
  for (int i = 0; i < n; ++i) {
    r = add(r, mul(diff(a, n + i), diff(b, i)));
    r = add(r, mul(diff(a, i), diff(b, n + i)), -1);
  }
  return r;
}

// Literal action of a normal-ordered operator on an x-only polynomial.
inline Poly apply(const liederiv::WeylOp& d, const Poly& f) {
  const int n = d.dim();
  Poly r;
  for (const auto& [m, c] : d.normal_symbol().terms()) {
    Poly g = f;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < m.fiber[i]; ++k) g = diff(g, i);
    Poly coef;
    Exps e(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] = m.base[i];
    coef[e] = c.as_rational();
    r = add(r, mul(coef, g));
  }
  return r;
}

// D*(g) = Σ (−1)^{|α|} ∂^α(a_α g), by integration by parts term by term.
inline Poly adjoint_apply(const liederiv::WeylOp& d, const Poly& g) {
  const int n = d.dim();
  Poly r;
  for (const auto& [m, c] : d.normal_symbol().terms()) {
    Exps e(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] = m.base[i];
    Poly coef;
    coef[e] = c.as_rational();
    Poly h = mul(coef, g);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < m.fiber[i]; ++k) h = diff(h, i);
    r = add(r, h, m.fiber.degree() % 2 == 0 ? 1 : -1);
  }
  return r;
}

// Σ a_α (∂ + ω)^α f: the operator e^{−h} D e^{h} evaluated on f, for ω = dh.
inline Poly twisted_apply(const liederiv::WeylOp& d, const std::vector<Poly>& w, const Poly& f) {
  const int n = d.dim();
  Poly r;
  for (const auto& [m, c] : d.normal_symbol().terms()) {
    Poly g = f;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < m.fiber[i]; ++k) g = add(diff(g, i), mul(w[static_cast<std::size_t>(i)], g));
    Exps e(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] = m.base[i];
    Poly coef;
    coef[e] = c.as_rational();
    r = add(r, mul(coef, g));
  }
  return r;
}

}  // namespace oracle
