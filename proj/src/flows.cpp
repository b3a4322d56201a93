#include "liederiv/flows.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "liederiv/text.hpp"

namespace liederiv {

// ---- Matrix ----

Matrix::Matrix(int n, Mode mode) : n_(n), mode_(mode), a_(static_cast<std::size_t>(n * n), Scalar::zero(mode)) {
  if (n < 1) throw PreconditionError("matrix dimension must be positive");
}

Matrix Matrix::identity(int n, Mode mode) {
  Matrix m(n, mode);
  for (int i = 0; i < n; ++i) m(i, i) = Scalar::one(mode);
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Scalar>>& rows) {
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw PreconditionError("empty matrix");
  Matrix m(n, rows[0][0].mode());
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n) throw PreconditionError("matrix is not square");
    for (int j = 0; j < n; ++j) {
      const Scalar& v = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (v.mode() != m.mode_) throw ModeMismatch();
      m(i, j) = v;
    }
  }
  return m;
}

std::vector<std::vector<Scalar>> Matrix::rows() const {
  std::vector<std::vector<Scalar>> r(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r[static_cast<std::size_t>(i)].push_back((*this)(i, j));
  return r;
}

Matrix Matrix::transpose() const {
  Matrix t(n_, mode_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Scalar Matrix::trace() const {
  Scalar s = Scalar::zero(mode_);
  for (int i = 0; i < n_; ++i) s += (*this)(i, i);
  return s;
}

namespace {

// Row pivot: any nonzero entry when exact, the largest one otherwise.
int pivot_row(const Matrix& m, int col, int from) {
  int best = -1;
  double best_abs = 0;
  for (int r = from; r < m.size(); ++r) {
    if (m(r, col).is_zero()) continue;
    if (m.mode() == Mode::Exact) return r;
    double v = std::fabs(m(r, col).to_double());
    if (v > best_abs) {
      best = r;
      best_abs = v;
    }
  }
  return best;
}

void swap_rows(Matrix& m, int a, int b) {
  for (int j = 0; j < m.size(); ++j) std::swap(m(a, j), m(b, j));
}

}  // namespace

Scalar Matrix::determinant() const {
  Matrix m = *this;
  Scalar det = Scalar::one(mode_);
  for (int c = 0; c < n_; ++c) {
    int p = pivot_row(m, c, c);
    if (p < 0) return Scalar::zero(mode_);
    if (p != c) {
      swap_rows(m, p, c);
      det = -det;
    }
    det *= m(c, c);
    for (int r = c + 1; r < n_; ++r) {
      if (m(r, c).is_zero()) continue;
      Scalar f = m(r, c) / m(c, c);
      for (int j = c; j < n_; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return det;
}

Matrix Matrix::inverse() const {
  Matrix m = *this, inv = identity(n_, mode_);
  for (int c = 0; c < n_; ++c) {
    int p = pivot_row(m, c, c);
    if (p < 0 || (mode_ == Mode::Approx && std::fabs(m(p, c).to_double()) < 1e-14))
      throw PreconditionError("matrix is singular");
    swap_rows(m, p, c);
    swap_rows(inv, p, c);
    Scalar d = m(c, c);
    for (int j = 0; j < n_; ++j) {
      m(c, j) /= d;
      inv(c, j) /= d;
    }
    for (int r = 0; r < n_; ++r) {
      if (r == c || m(r, c).is_zero()) continue;
      Scalar f = m(r, c);
      for (int j = 0; j < n_; ++j) {
        m(r, j) -= f * m(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

bool Matrix::is_nilpotent() const {
  Matrix p = *this;
  for (int k = 1; k < n_; ++k) p = p * *this;
  for (const auto& v : p.a_)
    if (mode_ == Mode::Exact ? !v.is_zero() : std::fabs(v.to_double()) > 1e-12) return false;
  return true;
}

Matrix Matrix::to_approx() const {
  Matrix m(n_, Mode::Approx);
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i].to_approx();
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.n_ != b.n_) throw DimensionMismatch(a.n_, b.n_);
  Matrix r(a.n_, a.mode_);
  for (int i = 0; i < a.n_; ++i)
    for (int k = 0; k < a.n_; ++k) {
      if (a(i, k).is_zero()) continue;
      for (int j = 0; j < a.n_; ++j) r(i, j) += a(i, k) * b(k, j);
    }
  return r;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.n_ != b.n_) throw DimensionMismatch(a.n_, b.n_);
  Matrix r = a;
  for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += b.a_[i];
  return r;
}

Matrix operator*(const Scalar& c, const Matrix& a) {
  Matrix r = a;
  for (auto& v : r.a_) v *= c;
  return r;
}

std::vector<Scalar> Matrix::apply(const std::vector<Scalar>& v) const {
  if (static_cast<int>(v.size()) != n_) throw DimensionMismatch(n_, static_cast<int>(v.size()));
  std::vector<Scalar> r(v.size(), Scalar::zero(mode_));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r[static_cast<std::size_t>(i)] += (*this)(i, j) * v[static_cast<std::size_t>(j)];
  return r;
}

bool Matrix::operator==(const Matrix& o) const { return n_ == o.n_ && mode_ == o.mode_ && a_ == o.a_; }

double max_distance(const Matrix& a, const Matrix& b) {
  double worst = 0;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) worst = std::max(worst, std::fabs((a(i, j) - b(i, j)).to_double()));
  return worst;
}

// ---- AffineMap ----

AffineMap::AffineMap(Matrix A_, std::vector<Scalar> b_) : A(std::move(A_)), b(std::move(b_)) {
  if (static_cast<int>(b.size()) != A.size()) throw DimensionMismatch(A.size(), static_cast<int>(b.size()));
  for (const auto& v : b)
    if (v.mode() != A.mode()) throw ModeMismatch();
  Scalar det = A.determinant();
  if (det.is_zero() || (A.mode() == Mode::Approx && std::fabs(det.to_double()) < 1e-12))
    throw PreconditionError("affine map is not invertible");
}

AffineMap AffineMap::identity(int n, Mode mode) {
  return AffineMap(Matrix::identity(n, mode), std::vector<Scalar>(static_cast<std::size_t>(n), Scalar::zero(mode)));
}

AffineMap AffineMap::translation(std::vector<Scalar> b) {
  Mode mode = b.empty() ? Mode::Exact : b[0].mode();
  Matrix I = Matrix::identity(static_cast<int>(b.size()), mode);
  return AffineMap(std::move(I), std::move(b));
}

AffineMap AffineMap::inverse() const {
  Matrix inv = A.inverse();
  std::vector<Scalar> c = inv.apply(b);
  for (auto& v : c) v = -v;
  return AffineMap(std::move(inv), std::move(c));
}

AffineMap AffineMap::to_approx() const {
  std::vector<Scalar> c;
  for (const auto& v : b) c.push_back(v.to_approx());
  return AffineMap(A.to_approx(), std::move(c));
}

std::vector<SymbolPoly> AffineMap::images(int dim_out) const {
  std::vector<SymbolPoly> out;
  for (int i = 0; i < dim(); ++i) {
    SymbolPoly p = SymbolPoly::constant(dim_out, b[static_cast<std::size_t>(i)]);
    for (int j = 0; j < dim(); ++j) p += SymbolPoly::x(dim_out, j, mode()) * A(i, j);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Scalar> AffineMap::operator()(const std::vector<Scalar>& x) const {
  std::vector<Scalar> y = A.apply(x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += b[i];
  return y;
}

AffineMap compose(const AffineMap& a, const AffineMap& b) { return AffineMap(a.A * b.A, a(b.b)); }

double max_distance(const AffineMap& a, const AffineMap& b) {
  double worst = max_distance(a.A, b.A);
  for (std::size_t i = 0; i < a.b.size(); ++i) worst = std::max(worst, std::fabs((a.b[i] - b.b[i]).to_double()));
  return worst;
}

// ---- FlowField ----

WeylOp FlowField::as_vector_field() const {
  std::vector<SymbolPoly> comps;
  for (int i = 0; i < dim(); ++i) {
    SymbolPoly p = SymbolPoly::constant(dim(), b[static_cast<std::size_t>(i)]);
    for (int j = 0; j < dim(); ++j) p += SymbolPoly::x(dim(), j, mode()) * A(i, j);
    comps.push_back(std::move(p));
  }
  return WeylOp::vector_field(comps);
}

FlowField FlowField::from_vector_field(const WeylOp& Y) {
  if (!Y.is_zero() && !Y.is_vector_field()) throw PreconditionError("not a vector field");
  const int n = Y.dim();
  FlowField f{Matrix(n, Y.mode()), std::vector<Scalar>(static_cast<std::size_t>(n), Scalar::zero(Y.mode()))};
  if (Y.is_zero()) return f;
  auto comps = Y.field_components();
  for (int i = 0; i < n; ++i)
    for (const auto& [m, c] : comps[static_cast<std::size_t>(i)].terms()) {
      int d = m.base.degree();
      if (d > 1) throw Unsupported("vector field is not affine; completeness is only decided for affine fields");
      if (d == 0) {
        f.b[static_cast<std::size_t>(i)] = c;
      } else {
        int j = 0;
        while (m.base[j] == 0) ++j;
        f.A(i, j) = c;
      }
    }
  return f;
}

FlowField FlowField::operator-() const {
  FlowField r{Scalar::from_int(-1, mode()) * A, b};
  for (auto& v : r.b) v = -v;
  return r;
}

FlowField FlowField::to_approx() const {
  FlowField r{A.to_approx(), b};
  for (auto& v : r.b) v = v.to_approx();
  return r;
}

namespace {

// [[A, b], [0, 0]], whose exponential carries e^{tA} and ∫₀ᵗ e^{sA} ds b.
Matrix augmented(const FlowField& Y) {
  const int n = Y.dim();
  Matrix M(n + 1, Y.mode());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) M(i, j) = Y.A(i, j);
    M(i, n) = Y.b[static_cast<std::size_t>(i)];
  }
  return M;
}

AffineMap from_augmented(const Matrix& E, int n) {
  Matrix A(n, E.mode());
  std::vector<Scalar> b;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = E(i, j);
    b.push_back(E(i, n));
  }
  return AffineMap(std::move(A), std::move(b));
}

Scalar factorial(int k, Mode mode) {
  Scalar f = Scalar::one(mode);
  for (int i = 2; i <= k; ++i) f *= Scalar::from_int(i, mode);
  return f;
}

void require_exact_flow(const FlowField& Y) {
  if (!Y.A.is_nilpotent())
    throw ExactnessUnavailable("exact flows need a nilpotent linear part; use approximate mode");
}

}  // namespace

AffineMap flow_at(const FlowField& Y_in, const Scalar& t) {
  // approximate t takes exact data along; the reverse would silently round
  if (t.mode() == Mode::Exact && Y_in.mode() != Mode::Exact) throw ModeMismatch();
  const FlowField Y = t.mode() == Mode::Approx ? Y_in.to_approx() : Y_in;
  const int n = Y.dim();
  Matrix M = augmented(Y);
  if (t.mode() == Mode::Exact) {
    require_exact_flow(Y);
    // M^{n+1} = 0, so the series stops.
    Matrix E = Matrix::identity(n + 1), term = Matrix::identity(n + 1);
    for (int k = 1; k <= n; ++k) {
      term = (t / Scalar::from_int(k, Mode::Exact)) * (term * M);
      E = E + term;
    }
    return from_augmented(E, n);
  }
  Eigen::MatrixXd m(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) m(i, j) = M(i, j).to_double() * t.to_double();
  Eigen::MatrixXd e = m.exp();
  Matrix E(n + 1, Mode::Approx);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) E(i, j) = Scalar::real(e(i, j));
  return from_augmented(E, n);
}

std::vector<SymbolPoly> symbolic_flow(const FlowField& Y) {
  if (Y.mode() != Mode::Exact) throw PreconditionError("symbolic flows are exact only");
  require_exact_flow(Y);
  const int n = Y.dim();
  Matrix M = augmented(Y), power = Matrix::identity(n + 1);
  std::vector<SymbolPoly> out(static_cast<std::size_t>(n), SymbolPoly(n + 1));
  for (int k = 0; k <= n; ++k) {
    Scalar inv_fact = Scalar::one(Mode::Exact) / factorial(k, Mode::Exact);
    MultiIndex sk(n + 1);
    sk[n] = k;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= n; ++j) {
        if (power(i, j).is_zero()) continue;
        MultiIndex base = sk;
        if (j < n) base[j] += 1;
        out[static_cast<std::size_t>(i)].add_term(Monomial{base, MultiIndex(n + 1)}, power(i, j) * inv_fact);
      }
    power = power * M;
  }
  return out;
}

// ---- Jacobian and Div ----

namespace {

std::vector<SymbolPoly> identity_fiber(int n, int dim_out, Mode mode) {
  std::vector<SymbolPoly> v;
  for (int i = 0; i < n; ++i) v.push_back(SymbolPoly::xi(dim_out, i, mode));
  return v;
}

// f(images(x)) for fiber-free f of dimension images.size().
SymbolPoly compose_function(const SymbolPoly& f, const std::vector<SymbolPoly>& images) {
  if (images.empty()) return f;
  const int dim_out = images[0].dim();
  return substitute(f, images, identity_fiber(f.dim(), dim_out, f.mode()));
}

// (ψ*ω)ⱼ = Σᵢ ωᵢ∘ψ ∂ⱼψⁱ with ψ given by component images, for j < n.
std::vector<SymbolPoly> pullback_components(const ClosedOneForm& w, const std::vector<SymbolPoly>& images) {
  const int n = w.dim();
  const int dim_out = images[0].dim();
  std::vector<SymbolPoly> out(static_cast<std::size_t>(n), SymbolPoly(dim_out, w.mode()));
  for (int i = 0; i < n; ++i) {
    if (w[i].is_zero()) continue;
    SymbolPoly wi = compose_function(w[i], images);
    for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] += wi * poly_diff(images[static_cast<std::size_t>(i)], Axis::Base, j);
  }
  return out;
}

std::vector<SymbolPoly> gradient(const SymbolPoly& f, int n) {
  std::vector<SymbolPoly> g;
  for (int j = 0; j < n; ++j) g.push_back(poly_diff(f, Axis::Base, j));
  return g;
}

Scalar exp_scalar(const Scalar& x) {
  if (x.is_zero()) return Scalar::one(x.mode());
  if (x.is_exact()) throw ExactnessUnavailable("e^x is irrational for rational x != 0; use approximate mode");
  return Scalar::real(std::exp(x.to_double()));
}

// Gauss-Legendre nodes and weights on [0, t].
std::vector<std::pair<double, double>> quadrature_nodes(double t) {
  using GL = boost::math::quadrature::gauss<double, 32>;
  std::vector<std::pair<double, double>> out;
  const auto& x = GL::abscissa();
  const auto& w = GL::weights();
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.emplace_back(t * (1 + x[i]) / 2, w[i] * t / 2);
    if (x[i] != 0) out.emplace_back(t * (1 - x[i]) / 2, w[i] * t / 2);
  }
  return out;
}

}  // namespace

SymbolPoly pullback_function(const SymbolPoly& f, const AffineMap& phi) {
  if (f.dim() != phi.dim()) throw DimensionMismatch(f.dim(), phi.dim());
  return compose_function(f, phi.images(phi.dim()));
}

ClosedOneForm pullback_form(const ClosedOneForm& w, const AffineMap& phi) {
  if (w.dim() != phi.dim()) throw DimensionMismatch(w.dim(), phi.dim());
  return ClosedOneForm(pullback_components(w, phi.images(phi.dim())));
}

Jacobian jacobian_cocycle(const AffineMap& phi, const Divergence& div) {
  if (div.weight.mode() != phi.mode()) throw ModeMismatch();
  return {pullback_function(div.weight, phi) - div.weight, phi.A.determinant().abs()};
}

Jacobian cocycle_rhs(const Jacobian& j_phi, const AffineMap& psi, const Jacobian& j_psi) {
  return {pullback_function(j_phi.exponent, psi) + j_psi.exponent, j_phi.factor * j_psi.factor};
}

SymbolPoly LogFunction::value() const {
  if (log_of.is_one()) return poly;
  if (log_of.is_exact()) throw ExactnessUnavailable("logarithm of a rational other than 1");
  return poly + SymbolPoly::constant(poly.dim(), Scalar::real(std::log(log_of.to_double())));
}

LogFunction div_of_map(const AffineMap& phi, const Divergence& div) {
  Jacobian j = jacobian_cocycle(phi, div);
  return {j.exponent, j.factor};
}

LogFunction div_of_flow(const FlowField& Y, const Scalar& t, const Divergence& div) {
  return div_of_map(flow_at(Y, t), div.weight.mode() == t.mode() ? div : Divergence{div.weight.to_mode(t.mode())});
}

SymbolPoly div_flow_integral(const FlowField& Y_in, const Scalar& t, const Divergence& div) {
  const int n = Y_in.dim();
  if (t.mode() == Mode::Exact && Y_in.mode() != Mode::Exact) throw ModeMismatch();
  const FlowField Y = t.mode() == Mode::Approx ? Y_in.to_approx() : Y_in;
  Divergence dv{div.weight.to_mode(t.mode())};
  SymbolPoly dY = divergence(dv, Y.as_vector_field());
  if (t.mode() == Mode::Exact) {
    auto flow = symbolic_flow(Y);
    return integrate_last_base(compose_function(dY, flow), t);
  }
  SymbolPoly acc(n, Mode::Approx);
  for (auto [s, w] : quadrature_nodes(t.to_double()))
    acc += pullback_function(dY, flow_at(Y, Scalar::real(s))) * Scalar::real(w);
  return acc;
}

// ---- pushforwards and fiber maps ----

namespace {

// (x, ξ) ↦ (φ⁻¹x, Aᵀξ) images, optionally scaling ξ by K and adding Ω∘φ⁻¹.
SymbolPoly lift_substitute(const AffineMap& phi, const SymbolPoly& s, const Scalar* K, const ClosedOneForm* w) {
  const int n = phi.dim();
  if (s.dim() != n) throw DimensionMismatch(s.dim(), n);
  if (s.mode() != phi.mode()) throw ModeMismatch();
  auto xs = phi.inverse().images(n);
  std::vector<SymbolPoly> xis;
  for (int i = 0; i < n; ++i) {
    SymbolPoly p(n, s.mode());
    for (int k = 0; k < n; ++k) p += SymbolPoly::xi(n, k, s.mode()) * phi.A(k, i);
    if (K) p *= *K;
    if (w && !(*w)[i].is_zero()) p += compose_function((*w)[i], xs);
    xis.push_back(std::move(p));
  }
  return substitute(s, xs, xis);
}

}  // namespace

WeylOp pushforward(const AffineMap& phi, const WeylOp& d) {
  return WeylOp(lift_substitute(phi, d.normal_symbol(), nullptr, nullptr));
}

SymbolPoly cotangent_pushforward(const AffineMap& phi, const SymbolPoly& s) {
  return lift_substitute(phi, s, nullptr, nullptr);
}

SymbolPoly fiber_homothety(const SymbolPoly& s, const Scalar& K) {
  const int n = s.dim();
  std::vector<SymbolPoly> xs, xis;
  for (int i = 0; i < n; ++i) {
    xs.push_back(SymbolPoly::x(n, i, s.mode()));
    xis.push_back(SymbolPoly::xi(n, i, s.mode()) * K);
  }
  return substitute(s, xs, xis);
}

SymbolPoly fiber_translation(const SymbolPoly& s, const ClosedOneForm& w) {
  const int n = s.dim();
  if (w.dim() != n) throw DimensionMismatch(w.dim(), n);
  std::vector<SymbolPoly> xs, xis;
  for (int i = 0; i < n; ++i) {
    xs.push_back(SymbolPoly::x(n, i, s.mode()));
    xis.push_back(SymbolPoly::xi(n, i, s.mode()) + w[i]);
  }
  return substitute(s, xs, xis);
}

WeylOp lowering_exponential(const ClosedOneForm& w, const WeylOp& d) {
  WeylOp sum = d, term = d;
  for (int k = 1; !term.is_zero(); ++k) {
    term = lowering_derivation(w, term);
    term *= Scalar::one(d.mode()) / Scalar::from_int(k, d.mode());
    sum += term;
  }
  return sum;
}

SymbolPoly vertical_exponential(const ClosedOneForm& w, const SymbolPoly& s) {
  SymbolPoly sum = s, term = s;
  for (int k = 1; !term.is_zero(); ++k) {
    term = vertical_lift_apply(w, term) * (Scalar::one(s.mode()) / Scalar::from_int(k, s.mode()));
    sum += term;
  }
  return sum;
}

// ---- automorphisms ----

WeylOp apply_aut_d1(const AutD1& a, const WeylOp& op) {
  if (op.order() > 1) throw PreconditionError("D1 automorphisms act on operators of order <= 1");
  auto [f, X] = split_constant_part(op);
  SymbolPoly g = f * a.K + divergence(a.div, X) * a.Lambda + pair_with(a.Omega, X.field_components());
  AffineMap inv = a.phi.inverse();
  return pushforward(a.phi, X) + WeylOp(pullback_function(g, inv));
}

SymbolPoly apply_aut_s(const AutS& a, const SymbolPoly& s) {
  if (a.K.is_zero()) throw PreconditionError("K must be nonzero");
  return lift_substitute(a.phi, s, &a.K, &a.Omega) * (Scalar::one(s.mode()) / a.K);
}

WeylOp apply_aut_d(const AutD& a, const WeylOp& d) {
  WeylOp e = lowering_exponential(a.Omega, d);
  if (a.conj) e = conjugation(e);
  return pushforward(a.phi, e);
}

AutD1 compose(const AutD1& a, const AutD1& b) {
  if (!(a.div == b.div)) throw PreconditionError("descriptors use different densities");
  ClosedOneForm dDiv = ClosedOneForm::exact(jacobian_cocycle(b.phi, b.div).exponent);
  return {compose(a.phi, b.phi), a.K * b.K, a.Lambda + a.K * b.Lambda,
          a.K * b.Omega + pullback_form(a.Omega, b.phi) + a.Lambda * dDiv, a.div};
}

AutS compose(const AutS& a, const AutS& b) {
  return {compose(a.phi, b.phi), a.K * b.K, b.Omega + b.K * pullback_form(a.Omega, b.phi)};
}

AutD compose(const AutD& a, const AutD& b) {
  if (a.conj || b.conj) throw Unsupported("composition of descriptors with conjugation");
  return {compose(a.phi, b.phi), pullback_form(a.Omega, b.phi) + b.Omega, false};
}

double max_distance(const ClosedOneForm& a, const ClosedOneForm& b) {
  double worst = 0;
  for (int i = 0; i < a.dim(); ++i) worst = std::max(worst, max_coefficient_distance(a[i], b[i]));
  return worst;
}

double max_distance(const AutD1& a, const AutD1& b) {
  return std::max({max_distance(a.phi, b.phi), std::fabs((a.K - b.K).to_double()),
                   std::fabs((a.Lambda - b.Lambda).to_double()), max_distance(a.Omega, b.Omega)});
}

double max_distance(const AutS& a, const AutS& b) {
  return std::max({max_distance(a.phi, b.phi), std::fabs((a.K - b.K).to_double()), max_distance(a.Omega, b.Omega)});
}

double max_distance(const AutD& a, const AutD& b) {
  if (a.conj != b.conj) return std::numeric_limits<double>::infinity();
  return std::max(max_distance(a.phi, b.phi), max_distance(a.Omega, b.Omega));
}

// ---- one-parameter groups ----

namespace {

// ∫₀ᵗ e^{κ(t−s)} integrand(s) ds for a 1-form valued integrand. Exact mode
// takes the integrand in dimension n+1 (s last) and needs κ = 0.
ClosedOneForm integrate_forms_exact(const std::vector<SymbolPoly>& integrand, const Scalar& t) {
  std::vector<SymbolPoly> comps;
  for (const auto& c : integrand) comps.push_back(integrate_last_base(c, t));
  return ClosedOneForm(std::move(comps));
}

ClosedOneForm integrate_forms_approx(int n, const Scalar& t, const std::function<double(double)>& weight,
                                     const std::function<ClosedOneForm(const Scalar&)>& integrand) {
  std::vector<SymbolPoly> acc(static_cast<std::size_t>(n), SymbolPoly(n, Mode::Approx));
  for (auto [s, w] : quadrature_nodes(t.to_double())) {
    ClosedOneForm f = integrand(Scalar::real(s));
    Scalar c = Scalar::real(w * weight(s));
    for (int j = 0; j < n; ++j) acc[static_cast<std::size_t>(j)] += f[j] * c;
  }
  return ClosedOneForm(std::move(acc));
}

void check_regime(Mode regime, const std::vector<Mode>& data) {
  if (regime == Mode::Approx) return;
  for (Mode m : data)
    if (m != Mode::Exact) throw ModeMismatch();
}

}  // namespace

GroupElement<AutD1> one_param_group_d1(const D1Derivation& c_in, const Scalar& t) {
  const Mode mode = t.mode();
  check_regime(mode, {c_in.Y.mode(), c_in.kappa.mode(), c_in.lambda.mode(), c_in.omega.mode(), c_in.div.weight.mode()});
  D1Derivation c{c_in.Y.to_mode(mode), c_in.kappa.to_mode(mode), c_in.lambda.to_mode(mode), c_in.omega.to_mode(mode),
                 Divergence{c_in.div.weight.to_mode(mode)}};
  if (!c.Y.is_zero() && !c.Y.is_vector_field()) return NotIntegrable{"Y is not a vector field"};
  const int n = c.Y.dim();
  FlowField back = -FlowField::from_vector_field(c.Y);
  if (mode == Mode::Exact && !c.kappa.is_zero())
    throw ExactnessUnavailable("exact one-parameter groups need kappa = 0; use approximate mode");

  Scalar K = exp_scalar(c.kappa * t);
  Scalar Lambda = c.kappa.is_zero() ? c.lambda * t : c.lambda * (K - Scalar::one(mode)) / c.kappa;
  const SymbolPoly& g = c.div.weight;
  ClosedOneForm Omega(n, mode);
  if (mode == Mode::Exact) {
    auto flow = symbolic_flow(back);
    auto pulled = pullback_components(c.omega, flow);
    SymbolPoly divs = compose_function(g, flow) - g.embed(n + 1);
    for (int j = 0; j < n; ++j)
      pulled[static_cast<std::size_t>(j)] += poly_diff(divs, Axis::Base, j) * c.lambda;
    Omega = integrate_forms_exact(pulled, t);
  } else {
    const double kappa = c.kappa.to_double(), tt = t.to_double();
    Omega = integrate_forms_approx(
        n, t, [&](double s) { return std::exp(kappa * (tt - s)); },
        [&](const Scalar& s) {
          AffineMap phi = flow_at(back, s);
          auto grad = gradient(pullback_function(g, phi) - g, n);
          auto w = pullback_form(c.omega, phi).components();
          for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(j)] += grad[static_cast<std::size_t>(j)] * c.lambda;
          return ClosedOneForm(std::move(w));
        });
  }
  return AutD1{flow_at(back, t), K, Lambda, Omega, c.div};
}

GroupElement<AutS> one_param_group_s(const SDerivation& c_in, const Scalar& t) {
  const Mode mode = t.mode();
  check_regime(mode, {c_in.P.mode(), c_in.kappa.mode(), c_in.omega.mode()});
  SDerivation c = normalize_s_pair(c_in.P.to_mode(mode), c_in.kappa.to_mode(mode), c_in.omega.to_mode(mode));
  if (!c.P.is_zero() && !(c.P.is_fiber_homogeneous() && c.P.fiber_degree() == 1))
    return NotIntegrable{"P not in S_1"};
  const int n = c.P.dim();
  std::vector<SymbolPoly> field;
  for (int j = 0; j < n; ++j) field.push_back(poly_diff(c.P, Axis::Fiber, j));
  FlowField back = -FlowField::from_vector_field(WeylOp::vector_field(field));
  if (mode == Mode::Exact && !c.kappa.is_zero())
    throw ExactnessUnavailable("exact one-parameter groups need kappa = 0; use approximate mode");

  ClosedOneForm Omega(n, mode);
  if (mode == Mode::Exact) {
    Omega = integrate_forms_exact(pullback_components(c.omega, symbolic_flow(back)), t);
  } else {
    const double kappa = c.kappa.to_double();
    Omega = integrate_forms_approx(
        n, t, [&](double s) { return std::exp(kappa * s); },
        [&](const Scalar& s) { return pullback_form(c.omega, flow_at(back, s)); });
  }
  return AutS{flow_at(back, t), exp_scalar(c.kappa * t), Omega};
}

GroupElement<AutD> one_param_group_d(const DDerivation& c_in, const Scalar& t) {
  const Mode mode = t.mode();
  check_regime(mode, {c_in.P.mode(), c_in.omega.mode()});
  DDerivation c = normalize_d_pair(c_in.P.to_mode(mode), c_in.omega.to_mode(mode));
  if (!c.P.is_zero() && !c.P.is_vector_field()) return NotIntegrable{"P not in X"};
  const int n = c.P.dim();
  FlowField back = -FlowField::from_vector_field(c.P);
  ClosedOneForm Omega(n, mode);
  if (mode == Mode::Exact) {
    Omega = integrate_forms_exact(pullback_components(c.omega, symbolic_flow(back)), t);
  } else {
    Omega = integrate_forms_approx(
        n, t, [](double) { return 1.0; }, [&](const Scalar& s) { return pullback_form(c.omega, flow_at(back, s)); });
  }
  return AutD{flow_at(back, t), Omega, false};
}

namespace {

template <class Aut>
const Aut& integrable(const GroupElement<Aut>& g) {
  if (const auto* bad = std::get_if<NotIntegrable>(&g)) throw PreconditionError("NotIntegrable: " + bad->reason);
  return std::get<Aut>(g);
}

template <class Elem>
std::string show(const Elem& e) {
  return to_string(e);
}

template <class Elem>
bool is_zero_elem(const Elem& e) {
  return e.is_zero();
}

template <class Elem>
double elem_distance(const Elem& a, const Elem& b) {
  if constexpr (std::is_same_v<Elem, WeylOp>)
    return max_coefficient_distance(a.normal_symbol(), b.normal_symbol());
  else
    return max_coefficient_distance(a, b);
}

constexpr int kMaxTimeDegree = 40;

// d/dt at 0 of the polynomial through Φ_0, Φ_1, ..., found by forward differences.
template <class Elem>
std::optional<Elem> exact_derivative(const std::function<Elem(const Scalar&)>& at) {
  std::vector<Elem> vals;
  vals.push_back(at(Scalar::zero(Mode::Exact)));
  // diffs[k] holds Δᵏ at 0; a run of three vanishing higher differences ends the search.
  for (int N = 1; N <= kMaxTimeDegree; ++N) {
    while (static_cast<int>(vals.size()) < N + 3) vals.push_back(at(Scalar::from_int(static_cast<long>(vals.size()), Mode::Exact)));
    auto delta = [&](int order, int start) {
      Elem d = vals[static_cast<std::size_t>(start)] * Scalar::zero(Mode::Exact);
      mpz_class binom = 1;
      for (int j = 0; j <= order; ++j) {
        Scalar coef = Scalar::rational(mpq_class(binom)) * Scalar::from_int((order - j) % 2 == 0 ? 1 : -1, Mode::Exact);
        d += vals[static_cast<std::size_t>(start + j)] * coef;
        binom = binom * (order - j) / (j + 1);
      }
      return d;
    };
    if (!(is_zero_elem(delta(N, 0)) && is_zero_elem(delta(N, 1)) && is_zero_elem(delta(N, 2)))) continue;
    Elem deriv = vals[0] * Scalar::zero(Mode::Exact);
    for (int k = 1; k < N; ++k)
      deriv += delta(k, 0) * Scalar::rational(mpq_class(k % 2 == 1 ? 1 : -1, k));
    return deriv;
  }
  return std::nullopt;
}

template <class Elem, class Family, class Map>
GeneratorReport generator_impl(const Family& family, const Map& c, const std::vector<Elem>& probes, Mode regime) {
  GeneratorReport rep;
  rep.regime = regime;
  rep.probes = probes.size();
  for (std::size_t k = 0; k < probes.size(); ++k) {
    Witness w{k, show(probes[k]), "", "", "", ""};
    bool ok = false;
    if (regime == Mode::Exact) {
      auto d = exact_derivative<Elem>([&](const Scalar& t) { return family(t, probes[k]); });
      Elem expect = c(probes[k]);
      if (!d) {
        w.note = "family is not polynomial in t";
      } else {
        ok = *d == expect;
        w.lhs = show(*d);
      }
      w.rhs = show(expect);
    } else {
      const double h = 1e-5;
      Elem probe = probes[k].to_approx();
      Elem d = (family(Scalar::real(h), probe) - family(Scalar::real(-h), probe)) * Scalar::real(1 / (2 * h));
      Elem expect = probe;
      try {
        expect = c(probes[k]).to_approx();
      } catch (const ModeMismatch&) {
        expect = c(probe);
      }
      double dist = elem_distance(d, expect);
      ok = dist <= 1e-6;
      w.lhs = show(d);
      w.rhs = show(expect);
      w.note = "max coefficient distance " + std::to_string(dist);
    }
    if (ok) continue;
    ++rep.failures;
    if (rep.witnesses.size() < 3) rep.witnesses.push_back(std::move(w));
  }
  return rep;
}

}  // namespace

GeneratorReport generator_check(const OpFamily& family, const OpMap& c, const std::vector<WeylOp>& probes, Mode regime) {
  return generator_impl<WeylOp>(family, c, probes, regime);
}

GeneratorReport generator_check(const SymbolFamily& family, const SymbolMap& c, const std::vector<SymbolPoly>& probes,
                                Mode regime) {
  return generator_impl<SymbolPoly>(family, c, probes, regime);
}

namespace {

// Group elements are reused across probes, keyed by the printed t.
template <class Aut, class Make>
auto cached(Make make) {
  struct Cache {
    std::mutex lock;
    std::map<std::string, Aut> at;
  };
  auto cache = std::make_shared<Cache>();
  return [cache, make](const Scalar& t) {
    const std::string key = std::string(mode_name(t.mode())) + ":" + t.str();
    std::lock_guard<std::mutex> guard(cache->lock);
    auto it = cache->at.find(key);
    if (it == cache->at.end()) it = cache->at.emplace(key, integrable(make(t))).first;
    return it->second;
  };
}

}  // namespace

OpFamily family_d1(const D1Derivation& c) {
  auto group = cached<AutD1>([c](const Scalar& t) { return one_param_group_d1(c, t); });
  return [group](const Scalar& t, const WeylOp& op) { return apply_aut_d1(group(t), op.to_mode(t.mode())); };
}

SymbolFamily family_s(const SDerivation& c) {
  auto group = cached<AutS>([c](const Scalar& t) { return one_param_group_s(c, t); });
  return [group](const Scalar& t, const SymbolPoly& s) { return apply_aut_s(group(t), s.to_mode(t.mode())); };
}

OpFamily family_d(const DDerivation& c) {
  auto group = cached<AutD>([c](const Scalar& t) { return one_param_group_d(c, t); });
  return [group](const Scalar& t, const WeylOp& d) { return apply_aut_d(group(t), d.to_mode(t.mode())); };
}

}  // namespace liederiv
