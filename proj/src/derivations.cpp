#include "liederiv/derivations.hpp"

#include <future>
#include <optional>

#include "liederiv/linalg.hpp"
#include "liederiv/random.hpp"
#include "liederiv/text.hpp"

namespace liederiv {

SymbolPoly divergence(const Divergence& div, const WeylOp& X) {
  if (!X.is_vector_field()) throw PreconditionError("divergence is defined on vector fields only");
  if (div.weight.dim() != X.dim()) throw DimensionMismatch(div.weight.dim(), X.dim());
  auto comps = X.field_components();
  SymbolPoly r(X.dim(), X.mode());
  for (int i = 0; i < X.dim(); ++i) {
    const SymbolPoly& Xi = comps[static_cast<std::size_t>(i)];
    r += poly_diff(Xi, Axis::Base, i);
    r += Xi * poly_diff(div.weight, Axis::Base, i);
  }
  return r;
}

WeylOp apply_d1_derivation(const D1Derivation& c, const WeylOp& op) {
  if (op.order() > 1) throw PreconditionError("D1 derivations act on operators of order <= 1");
  auto [f, X] = split_constant_part(op);
  WeylOp r = weyl_commutator(c.Y, op);
  r += WeylOp(f * c.kappa);
  r += WeylOp(divergence(c.div, X) * c.lambda);
  r += WeylOp(pair_with(c.omega, X.field_components()));
  return r;
}

SymbolPoly apply_s_derivation(const SDerivation& c, const SymbolPoly& s) {
  if (c.P.dim() != s.dim()) throw DimensionMismatch(c.P.dim(), s.dim());
  return poisson_bracket(c.P, s) + deg_derivation(s) * c.kappa + vertical_lift_apply(c.omega, s);
}

WeylOp lowering_derivation(const ClosedOneForm& omega, const WeylOp& d) {
  return weyl_commutator(d, WeylOp::multiplication(potential(omega)));
}

WeylOp apply_d_derivation(const DDerivation& c, const WeylOp& d) {
  return weyl_commutator(c.P, d) + lowering_derivation(c.omega, d);
}

DDerivation normalize_d_pair(const WeylOp& P, const ClosedOneForm& omega) {
  auto [h, rest] = split_constant_part(P);
  return {rest, omega - ClosedOneForm::exact(h)};
}

SDerivation normalize_s_pair(const SymbolPoly& P, const Scalar& kappa, const ClosedOneForm& omega) {
  SymbolPoly h = P.zero_section_part();
  return {P - h, kappa, omega - ClosedOneForm::exact(h)};
}

std::string_view algebra_name(Algebra a) {
  switch (a) {
    case Algebra::D1: return "d1";
    case Algebra::S: return "s";
    case Algebra::D: return "d";
  }
  return "?";
}

namespace {

std::string show(const WeylOp& d) { return to_string(d); }
std::string show(const SymbolPoly& s) { return to_string(s); }

WeylOp bracket(const WeylOp& a, const WeylOp& b) { return weyl_commutator(a, b); }
SymbolPoly bracket(const SymbolPoly& a, const SymbolPoly& b) { return poisson_bracket(a, b); }

// Runs `trial(k)` for k in [0, n) on `workers` threads and merges by index.
template <class Result, class Trial>
std::vector<Result> run_trials(std::size_t n, unsigned workers, Trial trial) {
  std::vector<Result> out(n);
  if (workers <= 1 || n < 2) {
    for (std::size_t k = 0; k < n; ++k) out[k] = trial(k);
    return out;
  }
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < workers; ++w)
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t k = w; k < n; k += workers) out[k] = trial(k);
    }));
  for (auto& j : jobs) j.get();
  return out;
}

template <class Elem, class Map, class Draw>
DerivationReport check_impl(const Map& c, Algebra algebra, const CheckOptions& opt, Draw draw) {
  DerivationReport rep;
  rep.algebra = algebra;
  rep.seed = opt.seed;
  rep.trials = opt.trials;
  auto results = run_trials<std::optional<Witness>>(opt.trials, opt.workers, [&](std::size_t k) -> std::optional<Witness> {
    RandomSource rng(RandomSource::derive_seed(opt.seed, k));
    Elem a = draw(rng), b = draw(rng);
    Witness w{k, show(a), show(b), "", "", ""};
    try {
      Elem ca = c(a), cb = c(b);
      Elem lhs = c(bracket(a, b));
      Elem rhs = bracket(ca, b) + bracket(a, cb);
      if constexpr (std::is_same_v<Elem, WeylOp>) {
        if (algebra == Algebra::D1 && (ca.order() > 1 || cb.order() > 1)) {
          w.note = "image leaves the first-order operators";
          return w;
        }
      }
      if (lhs == rhs) return std::nullopt;
      w.lhs = show(lhs);
      w.rhs = show(rhs);
      return w;
    } catch (const Error& e) {
      w.note = e.what();
      return w;
    }
  });
  for (auto& r : results) {
    if (!r) continue;
    ++rep.failures;
    if (rep.witnesses.size() < opt.max_witnesses) rep.witnesses.push_back(std::move(*r));
  }
  return rep;
}

}  // namespace

DerivationReport check_derivation_property(const OpMap& c, Algebra algebra, const CheckOptions& opt) {
  if (algebra == Algebra::S) throw PreconditionError("operator maps act on D1 or D");
  if (opt.trials < 1) throw PreconditionError("trials must be at least 1");
  return check_impl<WeylOp>(c, algebra, opt, [&](RandomSource& r) {
    return algebra == Algebra::D1 ? r.first_order(opt.dim, opt.max_base) : r.op(opt.dim, opt.max_order, opt.max_base);
  });
}

DerivationReport check_derivation_property(const SymbolMap& c, const CheckOptions& opt) {
  if (opt.trials < 1) throw PreconditionError("trials must be at least 1");
  return check_impl<SymbolPoly>(c, Algebra::S, opt,
                                [&](RandomSource& r) { return r.symbol(opt.dim, opt.max_order, opt.max_base); });
}

bool TableReport::passed() const {
  for (const auto& r : relations)
    if (r.failures) return false;
  return true;
}

namespace {

template <class Elem>
using Map = std::function<Elem(const Elem&)>;

template <class Elem>
Map<Elem> map_commutator(Map<Elem> f, Map<Elem> g) {
  return [f, g](const Elem& a) { return f(g(a)) - g(f(a)); };
}

// One random instance of a relation: the two maps to compare and a probe.
template <class Elem>
struct Instance {
  Map<Elem> lhs, rhs;
  Elem probe;
};

template <class Elem>
RelationResult check_relation(const std::string& table, const std::string& name, std::size_t trials,
                              std::uint64_t seed, const std::function<Instance<Elem>(RandomSource&)>& draw) {
  RelationResult res{table, name, trials, 0, {}};
  for (std::size_t k = 0; k < trials; ++k) {
    RandomSource rng(RandomSource::derive_seed(seed, k));
    Instance<Elem> inst = draw(rng);
    Elem l = inst.lhs(inst.probe), r = inst.rhs(inst.probe);
    if (l == r) continue;
    ++res.failures;
    if (res.witnesses.size() < 3) res.witnesses.push_back({k, show(inst.probe), "", show(l), show(r), ""});
  }
  return res;
}

Map<WeylOp> d1_map(const D1Derivation& c) {
  return [c](const WeylOp& op) { return apply_d1_derivation(c, op); };
}

Map<SymbolPoly> s_map(const SDerivation& c) {
  return [c](const SymbolPoly& s) { return apply_s_derivation(c, s); };
}

Map<WeylOp> d_map(const DDerivation& c) {
  return [c](const WeylOp& d) { return apply_d_derivation(c, d); };
}

template <class Elem>
Map<Elem> zero_map(int dim) {
  return [dim](const Elem&) { return Elem(dim); };
}

}  // namespace

TableReport verify_commutation_tables(int dim, std::size_t trials, std::uint64_t seed) {
  TableReport rep;
  rep.seed = seed;
  const Scalar zero = Scalar::zero(Mode::Exact), one = Scalar::one(Mode::Exact);
  const ClosedOneForm no_form(dim);
  std::uint64_t stream = 0;
  auto next_seed = [&] { return RandomSource::derive_seed(seed, 1000003 * ++stream); };

  // Der 𝒟¹. Every derivation in one relation shares the same random density.
  auto C_Y = [&](const WeylOp& Y, const Divergence& dv) { return d1_map({Y, zero, zero, no_form, dv}); };
  auto C_A = [&](const Divergence& dv) { return d1_map({WeylOp(dim), one, zero, no_form, dv}); };
  auto C_div = [&](const Divergence& dv) { return d1_map({WeylOp(dim), zero, one, no_form, dv}); };
  auto C_w = [&](const ClosedOneForm& w, const Divergence& dv) { return d1_map({WeylOp(dim), zero, zero, w, dv}); };
  auto d1_draw = [dim](RandomSource& r) {
    return std::tuple{r.vector_field(dim, 2), r.vector_field(dim, 2), r.closed_form(dim, 2), r.closed_form(dim, 2),
                      Divergence{r.function(dim, 2)}, r.first_order(dim, 2)};
  };
  using D1Inst = Instance<WeylOp>;
  const std::string t1 = "Der D1";
  rep.relations.push_back(check_relation<WeylOp>(t1, "[C_Y,C_Y'] = C_[Y,Y']", trials, next_seed(), [&](RandomSource& r) {
    auto [Y, Y2, w, w2, dv, probe] = d1_draw(r);
    return D1Inst{map_commutator(C_Y(Y, dv), C_Y(Y2, dv)), C_Y(weyl_commutator(Y, Y2), dv), probe};
  }));
  rep.relations.push_back(check_relation<WeylOp>(t1, "[C_Y,C_div] = C_d(div Y)", trials, next_seed(), [&](RandomSource& r) {
    auto [Y, Y2, w, w2, dv, probe] = d1_draw(r);
    return D1Inst{map_commutator(C_Y(Y, dv), C_div(dv)), C_w(ClosedOneForm::exact(divergence(dv, Y)), dv), probe};
  }));
  rep.relations.push_back(check_relation<WeylOp>(t1, "[C_Y,C_w] = C_d(w(Y))", trials, next_seed(), [&](RandomSource& r) {
    auto [Y, Y2, w, w2, dv, probe] = d1_draw(r);
    return D1Inst{map_commutator(C_Y(Y, dv), C_w(w, dv)), C_w(ClosedOneForm::exact(pair_with(w, Y.field_components())), dv),
                  probe};
  }));
  rep.relations.push_back(check_relation<WeylOp>(t1, "[C_A,C_div] = C_div", trials, next_seed(), [&](RandomSource& r) {
    auto [Y, Y2, w, w2, dv, probe] = d1_draw(r);
    return D1Inst{map_commutator(C_A(dv), C_div(dv)), C_div(dv), probe};
  }));
  rep.relations.push_back(check_relation<WeylOp>(t1, "[C_A,C_w] = C_w", trials, next_seed(), [&](RandomSource& r) {
    auto [Y, Y2, w, w2, dv, probe] = d1_draw(r);
    return D1Inst{map_commutator(C_A(dv), C_w(w, dv)), C_w(w, dv), probe};
  }));
  rep.relations.push_back(check_relation<WeylOp>(t1, "[C_Y,C_A] = 0", trials, next_seed(), [&](RandomSource& r) {
    auto [Y, Y2, w, w2, dv, probe] = d1_draw(r);
    return D1Inst{map_commutator(C_Y(Y, dv), C_A(dv)), zero_map<WeylOp>(dim), probe};
  }));
  rep.relations.push_back(check_relation<WeylOp>(t1, "[C_div,C_w] = 0", trials, next_seed(), [&](RandomSource& r) {
    auto [Y, Y2, w, w2, dv, probe] = d1_draw(r);
    return D1Inst{map_commutator(C_div(dv), C_w(w, dv)), zero_map<WeylOp>(dim), probe};
  }));
  rep.relations.push_back(check_relation<WeylOp>(t1, "[C_w,C_w'] = 0", trials, next_seed(), [&](RandomSource& r) {
    auto [Y, Y2, w, w2, dv, probe] = d1_draw(r);
    return D1Inst{map_commutator(C_w(w, dv), C_w(w2, dv)), zero_map<WeylOp>(dim), probe};
  }));

  // Der 𝒮
  using SInst = Instance<SymbolPoly>;
  const std::string t2 = "Der S";
  auto C_P = [&](const SymbolPoly& P) { return s_map({P, zero, no_form}); };
  Map<SymbolPoly> Deg = [](const SymbolPoly& s) { return deg_derivation(s); };
  auto W_v = [&](const ClosedOneForm& w) { return s_map({SymbolPoly(dim), zero, w}); };
  auto s_draw = [dim](RandomSource& r) {
    return std::tuple{r.symbol(dim, 2, 2), r.symbol(dim, 2, 2), r.closed_form(dim, 2), r.closed_form(dim, 2),
                      r.symbol(dim, 3, 2)};
  };
  rep.relations.push_back(check_relation<SymbolPoly>(t2, "[C_P,C_P'] = C_{P,P'}", trials, next_seed(), [&](RandomSource& r) {
    auto [P, P2, w, w2, probe] = s_draw(r);
    return SInst{map_commutator(C_P(P), C_P(P2)), C_P(poisson_bracket(P, P2)), probe};
  }));
  rep.relations.push_back(check_relation<SymbolPoly>(t2, "[Deg,C_P] = C_Deg(P)", trials, next_seed(), [&](RandomSource& r) {
    auto [P, P2, w, w2, probe] = s_draw(r);
    return SInst{map_commutator(Deg, C_P(P)), C_P(deg_derivation(P)), probe};
  }));
  rep.relations.push_back(check_relation<SymbolPoly>(t2, "[w^v,C_P] = C_w^v(P)", trials, next_seed(), [&](RandomSource& r) {
    auto [P, P2, w, w2, probe] = s_draw(r);
    return SInst{map_commutator(W_v(w), C_P(P)), C_P(vertical_lift_apply(w, P)), probe};
  }));
  rep.relations.push_back(check_relation<SymbolPoly>(t2, "[w^v,Deg] = w^v", trials, next_seed(), [&](RandomSource& r) {
    auto [P, P2, w, w2, probe] = s_draw(r);
    return SInst{map_commutator(W_v(w), Deg), W_v(w), probe};
  }));
  rep.relations.push_back(check_relation<SymbolPoly>(t2, "[w^v,w'^v] = 0", trials, next_seed(), [&](RandomSource& r) {
    auto [P, P2, w, w2, probe] = s_draw(r);
    return SInst{map_commutator(W_v(w), W_v(w2)), zero_map<SymbolPoly>(dim), probe};
  }));

  // Der 𝒟
  using DInst = Instance<WeylOp>;
  const std::string t3 = "Der D";
  auto C_Q = [&](const WeylOp& P) { return d_map({P, no_form}); };
  auto W_bar = [&](const ClosedOneForm& w) { return d_map({WeylOp(dim), w}); };
  auto d_draw = [dim](RandomSource& r) {
    return std::tuple{r.op(dim, 2, 2), r.op(dim, 2, 2), r.closed_form(dim, 2), r.closed_form(dim, 2), r.op(dim, 3, 2)};
  };
  rep.relations.push_back(check_relation<WeylOp>(t3, "[C_P,C_P'] = C_[P,P']", trials, next_seed(), [&](RandomSource& r) {
    auto [P, P2, w, w2, probe] = d_draw(r);
    return DInst{map_commutator(C_Q(P), C_Q(P2)), C_Q(weyl_commutator(P, P2)), probe};
  }));
  rep.relations.push_back(check_relation<WeylOp>(t3, "[w_bar,C_P] = C_w_bar(P)", trials, next_seed(), [&](RandomSource& r) {
    auto [P, P2, w, w2, probe] = d_draw(r);
    return DInst{map_commutator(W_bar(w), C_Q(P)), C_Q(lowering_derivation(w, P)), probe};
  }));
  rep.relations.push_back(check_relation<WeylOp>(t3, "[w_bar,w'_bar] = 0", trials, next_seed(), [&](RandomSource& r) {
    auto [P, P2, w, w2, probe] = d_draw(r);
    return DInst{map_commutator(W_bar(w), W_bar(w2)), zero_map<WeylOp>(dim), probe};
  }));
  return rep;
}

SymbolPoly induced_classical_derivation(const DDerivation& c, const SymbolPoly& s, const WeylOp& lift) {
  if (!s.is_fiber_homogeneous()) throw PreconditionError("induced derivation needs a fiber-homogeneous symbol");
  if (s.is_zero()) return s;
  const int i = s.fiber_degree();
  if (symbol_of_order(lift, i) != s) throw PreconditionError("lift does not have the requested symbol");
  WeylOp image = apply_d_derivation(c, lift);
  if (image.is_zero()) return SymbolPoly(s.dim(), s.mode());
  if (image.order() > i) throw PreconditionError("derivation does not respect the filtration (P has order > 1)");
  return symbol_of_order(image, i);
}

SymbolPoly induced_classical_derivation(const DDerivation& c, const SymbolPoly& s) {
  return induced_classical_derivation(c, s, quantize_standard(s));
}

std::string_view lemma1_algebra_name(Lemma1Algebra a) {
  switch (a) {
    case Lemma1Algebra::Weyl: return "d";
    case Lemma1Algebra::SymbolGraded: return "s-graded";
    case Lemma1Algebra::SymbolFiltered: return "s";
  }
  return "?";
}

namespace {

std::vector<MultiIndex> multi_indices(int dim, int max_degree) {
  std::vector<MultiIndex> out;
  MultiIndex m(dim);
  std::function<void(int, int)> rec = [&](int axis, int budget) {
    if (axis == dim) {
      out.push_back(m);
      return;
    }
    for (int e = 0; e <= budget; ++e) {
      m[axis] = e;
      rec(axis + 1, budget - e);
    }
    m[axis] = 0;
  };
  rec(0, max_degree);
  return out;
}

std::vector<Monomial> monomial_basis(int dim, int max_fiber, int max_base) {
  std::vector<Monomial> out;
  for (const auto& b : multi_indices(dim, max_base))
    for (const auto& f : multi_indices(dim, max_fiber)) out.push_back(Monomial{b, f});
  return out;
}

Scalar exact_one() { return Scalar::one(Mode::Exact); }

// Radial reconstruction in the fiber: the P without zero-section part with ∂_{ξⱼ}P = grads[j].
SymbolPoly integrate_fiber_gradient(const std::vector<SymbolPoly>& grads) {
  const int n = static_cast<int>(grads.size());
  SymbolPoly P(n, grads.front().mode());
  for (int j = 0; j < n; ++j)
    for (const auto& [m, c] : grads[static_cast<std::size_t>(j)].terms()) {
      Monomial up = m;
      up.fiber[j] += 1;
      P.add_term(up, c / Scalar::from_int(m.fiber.degree() + 1, P.mode()));
    }
  return P;
}

SymbolPoly constant_only(const SymbolPoly& p, const char* what) {
  for (const auto& [m, c] : p.terms())
    if (!m.base.is_zero() || !m.fiber.is_zero()) throw PreconditionError(std::string(what) + " is not a constant");
  return p;
}

Scalar constant_value(const SymbolPoly& p, const char* what) {
  constant_only(p, what);
  return p.coefficient(Monomial{MultiIndex(p.dim()), MultiIndex(p.dim())});
}

}  // namespace

Lemma1Report lemma1_bruteforce(Lemma1Algebra algebra, int i, int k, const Lemma1Caps& caps) {
  if (caps.dim < 1 || caps.dim > 2 || caps.max_order < 0 || caps.max_order > 3 || caps.max_base < 0 || caps.max_base > 3)
    throw PreconditionError("lemma1 caps too large (limits: n <= 2, order <= 3, degree <= 3)");
  if (i < -1 || k < 1) throw PreconditionError("lemma1 needs i >= -1 and k >= 1");
  const int n = caps.dim;
  const bool weyl = algebra == Lemma1Algebra::Weyl;
  const bool graded = algebra == Lemma1Algebra::SymbolGraded;

  Lemma1Report rep;
  rep.algebra = algebra;
  rep.i = i;
  rep.k = k;
  rep.caps = caps;

  std::vector<Monomial> space = monomial_basis(n, caps.max_order, caps.max_base);
  std::vector<Monomial> probes;
  for (const auto& m : monomial_basis(n, k, caps.max_base))
    if (weyl || m.fiber.degree() == k) probes.push_back(m);
  rep.space_dim = space.size();

  auto violates = [&](const Monomial& m) {
    int d = m.fiber.degree();
    return graded ? d != i : d > i;
  };
  auto bracket_monomials = [&](const Monomial& a, const Monomial& b) {
    SymbolPoly pa = SymbolPoly::term(n, a, exact_one()), pb = SymbolPoly::term(n, b, exact_one());
    return weyl ? weyl_commutator(WeylOp(pa), WeylOp(pb)).normal_symbol() : poisson_bracket(pa, pb);
  };

  // Column c of the constraint matrix is the bracket of space[c] with every probe,
  // restricted to the monomials that leave the target.
  std::map<std::pair<std::size_t, Monomial>, SparseRow> rows;
  std::vector<bool> column_vanishes(space.size(), true);
  for (std::size_t c = 0; c < space.size(); ++c)
    for (std::size_t b = 0; b < probes.size(); ++b) {
      SymbolPoly br = bracket_monomials(space[c], probes[b]);
      for (const auto& [m, v] : br.terms())
        if (violates(m)) {
          rows[{b, m}][static_cast<int>(c)] = v.as_rational();
          column_vanishes[c] = false;
        }
    }
  RowReducer reducer(static_cast<int>(space.size()));
  for (auto& [key, row] : rows) reducer.add(std::move(row));
  auto kernel = reducer.nullspace();
  rep.lhs_dim = kernel.size();

  const int filter = i - k + 1;
  auto in_rhs = [&](const Monomial& m) {
    if (m.base.is_zero() && m.fiber.is_zero()) return true;
    if (filter < 0) return false;
    return graded ? m.fiber.degree() == filter : m.fiber.degree() <= filter;
  };
  rep.rhs_in_lhs = true;
  for (std::size_t c = 0; c < space.size(); ++c)
    if (in_rhs(space[c])) {
      ++rep.rhs_dim;
      if (!column_vanishes[c]) rep.rhs_in_lhs = false;
    }
  rep.lhs_in_rhs = true;
  for (const auto& v : kernel) {
    SymbolPoly elem(n);
    for (std::size_t c = 0; c < space.size(); ++c) {
      if (sgn(v[c]) == 0) continue;
      if (!in_rhs(space[c])) rep.lhs_in_rhs = false;
      elem.add_term(space[c], Scalar::rational(v[c]));
    }
    if (rep.lhs_basis.size() < 40) rep.lhs_basis.push_back(weyl ? to_string(WeylOp(elem)) : to_string(elem));
  }
  return rep;
}

SDerivation read_off_s(const SymbolMap& c, int dim, Mode mode) {
  const Scalar one = Scalar::one(mode);
  Scalar kappa = -constant_value(c(SymbolPoly::constant(dim, one)), "C(1)");
  std::vector<SymbolPoly> grads;
  for (int j = 0; j < dim; ++j) {
    SymbolPoly xj = SymbolPoly::x(dim, j, mode);
    grads.push_back(c(xj) + xj * kappa);
  }
  SymbolPoly P = integrate_fiber_gradient(grads);
  std::vector<SymbolPoly> w;
  for (int j = 0; j < dim; ++j) {
    SymbolPoly xij = SymbolPoly::xi(dim, j, mode);
    w.push_back(c(xij) - poisson_bracket(P, xij));
  }
  return {P, kappa, ClosedOneForm(std::move(w))};
}

DDerivation read_off_d(const OpMap& c, int dim, Mode mode) {
  std::vector<SymbolPoly> grads;
  for (int j = 0; j < dim; ++j) grads.push_back(c(WeylOp::x(dim, j, mode)).normal_symbol());
  WeylOp P(integrate_fiber_gradient(grads));
  std::vector<SymbolPoly> w;
  for (int j = 0; j < dim; ++j) {
    WeylOp dj = WeylOp::partial(dim, j, mode);
    SymbolPoly r = (c(dj) - weyl_commutator(P, dj)).normal_symbol();
    if (!r.is_fiber_free()) throw PreconditionError("map is not of the form [P, .] + w_bar");
    w.push_back(r);
  }
  return {P, ClosedOneForm(std::move(w))};
}

D1Derivation read_off_d1(const OpMap& c, const Divergence& div) {
  const int dim = div.weight.dim();
  const Mode mode = div.weight.mode();
  Scalar kappa = constant_value(c(WeylOp::constant(dim, Scalar::one(mode))).normal_symbol(), "C(1)");
  std::vector<SymbolPoly> Yc;
  for (int j = 0; j < dim; ++j) {
    SymbolPoly xj = SymbolPoly::x(dim, j, mode);
    SymbolPoly r = c(WeylOp(xj)).normal_symbol() - xj * kappa;
    if (!r.is_fiber_free()) throw PreconditionError("C(x^j) - kappa x^j is not a function");
    Yc.push_back(r);
  }
  WeylOp Y = WeylOp::vector_field(Yc);
  std::vector<SymbolPoly> residual;
  for (int j = 0; j < dim; ++j) {
    WeylOp dj = WeylOp::partial(dim, j, mode);
    residual.push_back((c(dj) - weyl_commutator(Y, dj)).normal_symbol());
  }
  WeylOp x1d1 = weyl_compose(WeylOp::x(dim, 0, mode), WeylOp::partial(dim, 0, mode));
  SymbolPoly R = (c(x1d1) - weyl_commutator(Y, x1d1)).normal_symbol();
  Scalar lambda = constant_value(R - SymbolPoly::x(dim, 0, mode) * residual[0], "lambda");
  std::vector<SymbolPoly> w;
  for (int j = 0; j < dim; ++j)
    w.push_back(residual[static_cast<std::size_t>(j)] - poly_diff(div.weight, Axis::Base, j) * lambda);
  return {Y, kappa, lambda, ClosedOneForm(std::move(w)), div};
}

DegSolveReport solve_deg_as_induced(int dim, int max_base) {
  std::vector<DDerivation> params;
  const ClosedOneForm no_form(dim);
  for (const auto& b : multi_indices(dim, max_base))
    for (int j = 0; j < dim; ++j)
      params.push_back({WeylOp(SymbolPoly::term(dim, Monomial{b, MultiIndex::unit(dim, j)}, exact_one())), no_form});
  for (const auto& g : multi_indices(dim, max_base + 1))
    if (!g.is_zero())
      params.push_back({WeylOp(dim), ClosedOneForm::exact(SymbolPoly::term(dim, Monomial{g, MultiIndex(dim)}, exact_one()))});

  std::vector<SymbolPoly> probes;
  for (const auto& m : monomial_basis(dim, 2, max_base)) probes.push_back(SymbolPoly::term(dim, m, exact_one()));

  const int unknowns = static_cast<int>(params.size());
  std::map<std::pair<std::size_t, Monomial>, SparseRow> rows;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    for (int u = 0; u < unknowns; ++u) {
      SymbolPoly image = induced_classical_derivation(params[static_cast<std::size_t>(u)], probes[p]);
      for (const auto& [m, v] : image.terms()) rows[{p, m}][u] = v.as_rational();
    }
    SymbolPoly target = deg_derivation(probes[p]);
    for (const auto& [m, v] : target.terms()) rows[{p, m}][unknowns] = v.as_rational();
  }
  RowReducer coeff(unknowns), augmented(unknowns + 1);
  for (auto& [key, row] : rows) {
    SparseRow lhs = row;
    lhs.erase(unknowns);
    coeff.add(std::move(lhs));
    augmented.add(std::move(row));
  }
  DegSolveReport rep;
  rep.unknowns = static_cast<std::size_t>(unknowns);
  rep.equations = rows.size();
  rep.rank = coeff.rank();
  rep.augmented_rank = augmented.rank();
  return rep;
}

}  // namespace liederiv
