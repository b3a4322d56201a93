#include "liederiv/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace liederiv {

MultiIndex::MultiIndex(int n) : n_(n) {
  if (n < 0 || n > kMaxSize) throw PreconditionError("too many variables: " + std::to_string(n));
}

MultiIndex::MultiIndex(const std::vector<int>& e) : MultiIndex(static_cast<int>(e.size())) {
  std::copy(e.begin(), e.end(), e_.begin());
}

MultiIndex MultiIndex::unit(int n, int axis) {
  MultiIndex m(n);
  m[axis] = 1;
  return m;
}

int MultiIndex::degree() const { return std::accumulate(e_.begin(), e_.begin() + n_, 0); }

bool MultiIndex::divides(const MultiIndex& o) const {
  for (std::size_t i = 0; i < static_cast<std::size_t>(n_); ++i)
    if (e_[i] > o.e_[i]) return false;
  return true;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  MultiIndex r(*this);
  for (std::size_t i = 0; i < static_cast<std::size_t>(n_); ++i) r.e_[i] += o.e_[i];
  return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex& o) const {
  MultiIndex r(*this);
  for (std::size_t i = 0; i < static_cast<std::size_t>(n_); ++i) r.e_[i] -= o.e_[i];
  return r;
}

SymbolPoly::SymbolPoly(int dim, Mode mode) : dim_(dim), mode_(mode) {
  if (dim < 1) throw PreconditionError("dimension must be at least 1");
}

SymbolPoly SymbolPoly::constant(int dim, const Scalar& c) {
  return term(dim, Monomial{MultiIndex(dim), MultiIndex(dim)}, c);
}

SymbolPoly SymbolPoly::term(int dim, Monomial m, const Scalar& c) {
  if (m.base.size() != dim || m.fiber.size() != dim) throw DimensionMismatch(dim, m.base.size());
  SymbolPoly p(dim, c.mode());
  if (!c.is_zero()) p.terms_.emplace(std::move(m), c);
  return p;
}

SymbolPoly SymbolPoly::x(int dim, int axis, Mode mode) {
  if (axis < 0 || axis >= dim) throw PreconditionError("axis out of range");
  return term(dim, Monomial{MultiIndex::unit(dim, axis), MultiIndex(dim)}, Scalar::one(mode));
}

SymbolPoly SymbolPoly::xi(int dim, int axis, Mode mode) {
  if (axis < 0 || axis >= dim) throw PreconditionError("axis out of range");
  return term(dim, Monomial{MultiIndex(dim), MultiIndex::unit(dim, axis)}, Scalar::one(mode));
}

Scalar SymbolPoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Scalar::zero(mode_) : it->second;
}

void SymbolPoly::add_term(const Monomial& m, const Scalar& c) {
  if (c.mode() != mode_) throw ModeMismatch();
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

int SymbolPoly::fiber_degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, m.fiber.degree());
  return d;
}

int SymbolPoly::min_fiber_degree() const {
  if (terms_.empty()) return -1;
  int d = terms_.begin()->first.fiber.degree();
  for (const auto& [m, c] : terms_) d = std::min(d, m.fiber.degree());
  return d;
}

int SymbolPoly::base_degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, m.base.degree());
  return d;
}

bool SymbolPoly::is_fiber_homogeneous() const { return fiber_degree() == min_fiber_degree(); }

SymbolPoly SymbolPoly::homogeneous_part(int i) const {
  SymbolPoly r(dim_, mode_);
  for (const auto& [m, c] : terms_)
    if (m.fiber.degree() == i) r.terms_.emplace_hint(r.terms_.end(), m, c);
  return r;
}

SymbolPoly SymbolPoly::to_approx() const {
  SymbolPoly r(dim_, Mode::Approx);
  for (const auto& [m, c] : terms_) r.add_term(m, c.to_approx());
  return r;
}

SymbolPoly SymbolPoly::to_mode(Mode m) const {
  if (m == mode_) return *this;
  if (m == Mode::Approx) return to_approx();
  throw ExactnessUnavailable("cannot convert an Approx polynomial to Exact");
}

void SymbolPoly::check_compatible(const SymbolPoly& o) const {
  if (dim_ != o.dim_) throw DimensionMismatch(dim_, o.dim_);
  if (mode_ != o.mode_) throw ModeMismatch();
}

SymbolPoly SymbolPoly::operator-() const {
  SymbolPoly r(*this);
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

SymbolPoly& SymbolPoly::operator+=(const SymbolPoly& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

SymbolPoly& SymbolPoly::operator-=(const SymbolPoly& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

SymbolPoly& SymbolPoly::operator*=(const Scalar& c) {
  if (c.mode() != mode_) throw ModeMismatch();
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  // Approx products can underflow to zero.
  std::erase_if(terms_, [](const auto& kv) { return kv.second.is_zero(); });
  return *this;
}

SymbolPoly operator*(const SymbolPoly& a, const SymbolPoly& b) {
  a.check_compatible(b);
  SymbolPoly r(a.dim_, a.mode_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_)
      r.add_term(Monomial{ma.base + mb.base, ma.fiber + mb.fiber}, ca * cb);
  return r;
}

bool SymbolPoly::operator==(const SymbolPoly& o) const {
  if (dim_ != o.dim_ || mode_ != o.mode_) return false;
  return terms_ == o.terms_;
}

SymbolPoly SymbolPoly::embed(int new_dim) const {
  if (new_dim < dim_) throw DimensionMismatch(new_dim, dim_);
  SymbolPoly r(new_dim, mode_);
  for (const auto& [m, c] : terms_) {
    MultiIndex base(new_dim), fiber(new_dim);
    for (int i = 0; i < dim_; ++i) {
      base[i] = m.base[i];
      fiber[i] = m.fiber[i];
    }
    r.terms_.emplace(Monomial{std::move(base), std::move(fiber)}, c);
  }
  return r;
}

SymbolPoly poly_add(const SymbolPoly& a, const SymbolPoly& b) { return a + b; }

SymbolPoly poly_mul(const SymbolPoly& a, const SymbolPoly& b) { return a * b; }

SymbolPoly poly_diff(const SymbolPoly& a, Axis which, int axis) {
  if (axis < 0 || axis >= a.dim()) throw PreconditionError("axis out of range");
  SymbolPoly r(a.dim(), a.mode());
  for (const auto& [m, c] : a.terms()) {
    const MultiIndex& idx = which == Axis::Base ? m.base : m.fiber;
    int e = idx[axis];
    if (e == 0) continue;
    Monomial d = m;
    (which == Axis::Base ? d.base : d.fiber)[axis] = e - 1;
    r.add_term(d, c * Scalar::from_int(e, a.mode()));
  }
  return r;
}

SymbolPoly pow(const SymbolPoly& a, int e) {
  if (e < 0) throw PreconditionError("negative polynomial power");
  SymbolPoly result = SymbolPoly::constant(a.dim(), Scalar::one(a.mode()));
  SymbolPoly base = a;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

namespace {

// Lazily cached powers of a single polynomial.
class PowerCache {
 public:
  explicit PowerCache(const SymbolPoly& p) : powers_{SymbolPoly::constant(p.dim(), Scalar::one(p.mode())), p} {}
  const SymbolPoly& get(int e) {
    while (static_cast<int>(powers_.size()) <= e) powers_.push_back(powers_.back() * powers_[1]);
    return powers_[static_cast<std::size_t>(e)];
  }

 private:
  std::vector<SymbolPoly> powers_;
};

}  // namespace

SymbolPoly substitute(const SymbolPoly& p, std::span<const SymbolPoly> x_images,
                      std::span<const SymbolPoly> xi_images) {
  const int n = p.dim();
  if (static_cast<int>(x_images.size()) != n || static_cast<int>(xi_images.size()) != n)
    throw DimensionMismatch(n, static_cast<int>(x_images.size()));
  const int target = x_images.front().dim();
  for (std::size_t i = 0; i < x_images.size(); ++i) {
    if (x_images[i].dim() != target || xi_images[i].dim() != target)
      throw DimensionMismatch(target, x_images[i].dim());
    if (x_images[i].mode() != p.mode() || xi_images[i].mode() != p.mode()) throw ModeMismatch();
  }
  std::vector<PowerCache> xs, xis;
  xs.reserve(static_cast<std::size_t>(n));
  xis.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    xs.emplace_back(x_images[static_cast<std::size_t>(i)]);
    xis.emplace_back(xi_images[static_cast<std::size_t>(i)]);
  }
  SymbolPoly result(target, p.mode());
  for (const auto& [m, c] : p.terms()) {
    SymbolPoly t = SymbolPoly::constant(target, c);
    for (int i = 0; i < n && !t.is_zero(); ++i) {
      if (m.base[i]) t = t * xs[static_cast<std::size_t>(i)].get(m.base[i]);
      if (m.fiber[i]) t = t * xis[static_cast<std::size_t>(i)].get(m.fiber[i]);
    }
    result += t;
  }
  return result;
}

SymbolPoly integrate_last_base(const SymbolPoly& p, const Scalar& upper) {
  const int n = p.dim();
  if (n < 2) throw PreconditionError("integration variable would leave an empty ring");
  if (upper.mode() != p.mode()) throw ModeMismatch();
  SymbolPoly r(n - 1, p.mode());
  for (const auto& [m, c] : p.terms()) {
    if (m.fiber[n - 1] != 0) throw PreconditionError("integrand depends on the auxiliary fiber variable");
    int k = m.base[n - 1];
    MultiIndex base(n - 1), fiber(n - 1);
    for (int i = 0; i < n - 1; ++i) {
      base[i] = m.base[i];
      fiber[i] = m.fiber[i];
    }
    r.add_term(Monomial{std::move(base), std::move(fiber)},
               c * upper.pow(k + 1) / Scalar::from_int(k + 1, p.mode()));
  }
  return r;
}

double max_coefficient_distance(const SymbolPoly& a, const SymbolPoly& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  if (a.mode() != b.mode()) throw ModeMismatch();
  double worst = 0;
  for (const auto& [m, c] : a.terms()) worst = std::max(worst, std::fabs((c - b.coefficient(m)).to_double()));
  for (const auto& [m, c] : b.terms())
    if (!a.terms().contains(m)) worst = std::max(worst, std::fabs(c.to_double()));
  return worst;
}

}  // namespace liederiv
