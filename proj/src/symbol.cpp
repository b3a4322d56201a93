#include "liederiv/symbol.hpp"

#include <string>

namespace liederiv {

std::pair<int, int> closedness_defect(const std::vector<SymbolPoly>& w, double tol) {
  const int n = static_cast<int>(w.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      SymbolPoly lhs = poly_diff(w[static_cast<std::size_t>(j)], Axis::Base, i);
      SymbolPoly rhs = poly_diff(w[static_cast<std::size_t>(i)], Axis::Base, j);
      bool closed = lhs.mode() == Mode::Exact ? lhs == rhs : max_coefficient_distance(lhs, rhs) <= tol;
      if (!closed) return {i, j};
    }
  return {-1, -1};
}

ClosedOneForm::ClosedOneForm(int dim, Mode mode) : dim_(dim), mode_(mode) {
  if (dim < 1) throw PreconditionError("dimension must be at least 1");
  components_.assign(static_cast<std::size_t>(dim), SymbolPoly(dim, mode));
}

ClosedOneForm::ClosedOneForm(std::vector<SymbolPoly> components) {
  if (components.empty()) throw PreconditionError("a 1-form needs at least one component");
  dim_ = components.front().dim();
  mode_ = components.front().mode();
  if (static_cast<int>(components.size()) != dim_)
    throw DimensionMismatch(dim_, static_cast<int>(components.size()));
  for (const auto& c : components) {
    if (c.dim() != dim_) throw DimensionMismatch(dim_, c.dim());
    if (c.mode() != mode_) throw ModeMismatch();
    if (!c.is_fiber_free()) throw PreconditionError("1-form components must not depend on the fiber variables");
  }
  if (auto [i, j] = closedness_defect(components); i >= 0)
    throw PreconditionError("1-form is not closed: d_" + std::to_string(i + 1) + " w_" + std::to_string(j + 1) +
                            " != d_" + std::to_string(j + 1) + " w_" + std::to_string(i + 1));
  components_ = std::move(components);
}

ClosedOneForm ClosedOneForm::exact(const SymbolPoly& h) {
  if (!h.is_fiber_free()) throw PreconditionError("potential must not depend on the fiber variables");
  std::vector<SymbolPoly> c;
  for (int i = 0; i < h.dim(); ++i) c.push_back(poly_diff(h, Axis::Base, i));
  ClosedOneForm w(h.dim(), h.mode());
  w.components_ = std::move(c);
  return w;
}

bool ClosedOneForm::is_zero() const {
  for (const auto& c : components_)
    if (!c.is_zero()) return false;
  return true;
}

ClosedOneForm ClosedOneForm::to_approx() const {
  ClosedOneForm r(dim_, Mode::Approx);
  for (int i = 0; i < dim_; ++i) r.components_[static_cast<std::size_t>(i)] = (*this)[i].to_approx();
  return r;
}

ClosedOneForm ClosedOneForm::to_mode(Mode m) const {
  if (m == mode_) return *this;
  if (m == Mode::Approx) return to_approx();
  throw ExactnessUnavailable("cannot convert an Approx 1-form to Exact");
}

ClosedOneForm ClosedOneForm::operator-() const {
  ClosedOneForm r(*this);
  for (auto& c : r.components_) c = -c;
  return r;
}

ClosedOneForm operator+(const ClosedOneForm& a, const ClosedOneForm& b) {
  if (a.dim_ != b.dim_) throw DimensionMismatch(a.dim_, b.dim_);
  if (a.mode_ != b.mode_) throw ModeMismatch();
  ClosedOneForm r(a);
  for (std::size_t i = 0; i < r.components_.size(); ++i) r.components_[i] += b.components_[i];
  return r;
}

ClosedOneForm operator*(const Scalar& c, const ClosedOneForm& w) {
  ClosedOneForm r(w);
  for (auto& comp : r.components_) comp *= c;
  return r;
}

SymbolPoly poisson_bracket(const SymbolPoly& a, const SymbolPoly& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  if (a.mode() != b.mode()) throw ModeMismatch();
  SymbolPoly r(a.dim(), a.mode());
  for (int i = 0; i < a.dim(); ++i) {
    r += poly_diff(a, Axis::Fiber, i) * poly_diff(b, Axis::Base, i);
    r -= poly_diff(a, Axis::Base, i) * poly_diff(b, Axis::Fiber, i);
  }
  return r;
}

SymbolPoly deg_derivation(const SymbolPoly& s) {
  SymbolPoly r(s.dim(), s.mode());
  for (const auto& [m, c] : s.terms()) r.add_term(m, c * Scalar::from_int(m.fiber.degree() - 1, s.mode()));
  return r;
}

SymbolPoly vertical_lift_apply(const ClosedOneForm& w, const SymbolPoly& s) {
  if (w.dim() != s.dim()) throw DimensionMismatch(w.dim(), s.dim());
  SymbolPoly r(s.dim(), s.mode());
  for (int i = 0; i < s.dim(); ++i) r += w[i] * poly_diff(s, Axis::Fiber, i);
  return r;
}

SymbolPoly potential(const ClosedOneForm& w) {
  SymbolPoly h(w.dim(), w.mode());
  for (int i = 0; i < w.dim(); ++i)
    for (const auto& [m, c] : w[i].terms()) {
      Monomial lifted = m;
      lifted.base[i] += 1;
      h.add_term(lifted, c / Scalar::from_int(m.base.degree() + 1, w.mode()));
    }
  return h;
}

SymbolPoly pair_with(const ClosedOneForm& w, const std::vector<SymbolPoly>& field) {
  if (static_cast<int>(field.size()) != w.dim()) throw DimensionMismatch(w.dim(), static_cast<int>(field.size()));
  SymbolPoly r(w.dim(), w.mode());
  for (int i = 0; i < w.dim(); ++i) r += w[i] * field[static_cast<std::size_t>(i)];
  return r;
}

}  // namespace liederiv
