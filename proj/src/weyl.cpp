#include "liederiv/weyl.hpp"

#include <algorithm>

namespace liederiv {

namespace {

mpz_class binomial(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

// n!/(n-k)!
mpz_class falling(int n, int k) {
  mpz_class r = 1;
  for (int i = 0; i < k; ++i) r *= n - i;
  return r;
}

// Calls f(γ) for every multi-index γ with 0 ≤ γ ≤ bound componentwise.
template <class F>
void for_each_below(const MultiIndex& bound, F&& f) {
  MultiIndex g(bound.size());
  while (true) {
    f(g);
    int i = 0;
    for (; i < bound.size(); ++i) {
      if (g[i] < bound[i]) {
        ++g[i];
        break;
      }
      g[i] = 0;
    }
    if (i == bound.size()) return;
  }
}

Scalar from_integer(const mpz_class& z, Mode m) {
  return m == Mode::Exact ? Scalar::rational(mpq_class(z)) : Scalar::real(z.get_d());
}

}  // namespace

WeylOp WeylOp::multiplication(const SymbolPoly& f) {
  if (!f.is_fiber_free()) throw PreconditionError("multiplication operator needs a fiber-free polynomial");
  return WeylOp(f);
}

WeylOp WeylOp::vector_field(const std::vector<SymbolPoly>& components) {
  if (components.empty()) throw PreconditionError("vector field needs components");
  const int n = components.front().dim();
  if (static_cast<int>(components.size()) != n) throw DimensionMismatch(n, static_cast<int>(components.size()));
  SymbolPoly s(n, components.front().mode());
  for (int i = 0; i < n; ++i) {
    if (!components[static_cast<std::size_t>(i)].is_fiber_free())
      throw PreconditionError("vector field components must be fiber-free");
    s += components[static_cast<std::size_t>(i)] * SymbolPoly::xi(n, i, s.mode());
  }
  return WeylOp(s);
}

int WeylOp::order() const { return normal_.is_zero() ? kZeroOrder : normal_.fiber_degree(); }

bool WeylOp::is_vector_field() const {
  return order() <= 1 && normal_.homogeneous_part(0).is_zero();
}

std::vector<SymbolPoly> WeylOp::field_components() const {
  if (order() > 1) throw PreconditionError("operator of order > 1 is not a first-order operator");
  std::vector<SymbolPoly> c(static_cast<std::size_t>(dim()), SymbolPoly(dim(), mode()));
  for (const auto& [m, v] : normal_.terms()) {
    if (m.fiber.degree() != 1) continue;
    int axis = 0;
    while (m.fiber[axis] == 0) ++axis;
    c[static_cast<std::size_t>(axis)].add_term(Monomial{m.base, MultiIndex(dim())}, v);
  }
  return c;
}

SymbolPoly WeylOp::apply(const SymbolPoly& f) const {
  if (f.dim() != dim()) throw DimensionMismatch(dim(), f.dim());
  if (f.mode() != mode()) throw ModeMismatch();
  if (!f.is_fiber_free()) throw PreconditionError("operators act on fiber-free polynomials");
  const int n = dim();
  SymbolPoly r(n, mode());
  for (const auto& [m, c] : normal_.terms()) {
    for (const auto& [fm, fc] : f.terms()) {
      if (!m.fiber.divides(fm.base)) continue;
      mpz_class factor = 1;
      for (int i = 0; i < n; ++i) factor *= falling(fm.base[i], m.fiber[i]);
      r.add_term(Monomial{m.base + (fm.base - m.fiber), MultiIndex(n)}, c * fc * from_integer(factor, mode()));
    }
  }
  return r;
}

WeylOp weyl_compose(const WeylOp& a, const WeylOp& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  if (a.mode() != b.mode()) throw ModeMismatch();
  const int n = a.dim();
  const Mode mode = a.mode();
  SymbolPoly r(n, mode);
  for (const auto& [ma, ca] : a.normal_symbol().terms()) {
    for (const auto& [mb, cb] : b.normal_symbol().terms()) {
      // x^β ∂^α ∘ x^δ ∂^ε with β = ma.base, α = ma.fiber, δ = mb.base, ε = mb.fiber.
      const Scalar coeff = ca * cb;
      MultiIndex bound(n);
      for (int i = 0; i < n; ++i) bound[i] = std::min(ma.fiber[i], mb.base[i]);
      for_each_below(bound, [&](const MultiIndex& g) {
        mpz_class factor = 1;
        for (int i = 0; i < n; ++i) factor *= binomial(ma.fiber[i], g[i]) * falling(mb.base[i], g[i]);
        r.add_term(Monomial{ma.base + (mb.base - g), (ma.fiber - g) + mb.fiber}, coeff * from_integer(factor, mode));
      });
    }
  }
  return WeylOp(std::move(r));
}

WeylOp weyl_commutator(const WeylOp& a, const WeylOp& b) { return weyl_compose(a, b) - weyl_compose(b, a); }

SymbolPoly symbol_of_order(const WeylOp& d, int i) {
  if (d.is_zero()) throw PreconditionError("symbol of the zero operator is undefined");
  if (i < d.order())
    throw PreconditionError("symbol order " + std::to_string(i) + " is below the operator order " +
                            std::to_string(d.order()));
  return d.normal_symbol().homogeneous_part(i);
}

SymbolPoly principal_symbol(const WeylOp& d) { return symbol_of_order(d, d.order()); }

WeylOp quantize_standard(const SymbolPoly& s) { return WeylOp(s); }

WeylOp conjugation(const WeylOp& d) {
  const int n = d.dim();
  WeylOp r(n, d.mode());
  for (const auto& [m, c] : d.normal_symbol().terms()) {
    // −(x^β ∂^α)* = (−1)^{|α|+1} ∂^α ∘ x^β
    WeylOp dx(SymbolPoly::term(n, Monomial{MultiIndex(n), m.fiber}, Scalar::one(d.mode())));
    WeylOp xb(SymbolPoly::term(n, Monomial{m.base, MultiIndex(n)}, Scalar::one(d.mode())));
    Scalar sign = Scalar::from_int(m.fiber.degree() % 2 == 0 ? -1 : 1, d.mode());
    r += (sign * c) * weyl_compose(dx, xb);
  }
  return r;
}

std::pair<SymbolPoly, WeylOp> split_constant_part(const WeylOp& d) {
  SymbolPoly f = d.normal_symbol().homogeneous_part(0);
  return {f, d - WeylOp(f)};
}

}  // namespace liederiv
