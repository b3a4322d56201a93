#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "liederiv/derivations.hpp"
#include "support.hpp"

using namespace liederiv;
using namespace support;

static D1Derivation d1(const std::string& Y, Scalar k, Scalar l, const std::string& w, int n = 1,
                       const std::string& g = "0") {
  return D1Derivation{op(Y, n), k, l, form(w, n), Divergence{sym(g, n)}};
}

TEST_CASE("divergence") {
  auto std1 = Divergence::standard(1);
  CHECK(divergence(std1, op("d1")).is_zero());
  CHECK(divergence(std1, op("x1*d1")) == sym("1"));
  CHECK(divergence(Divergence{sym("x1")}, op("d1")) == sym("1"));
  CHECK_THROWS_AS(divergence(std1, op("d1 + 1")), PreconditionError);
  CHECK_THROWS_AS(divergence(std1, op("d1^2")), PreconditionError);
  // Σ ∂ᵢXⁱ + X(g) on random fields
  RandomSource rng(1);
  for (int t = 0; t < 30; ++t) {
    auto X = rng.vector_field(2, 3);
    auto g = rng.function(2, 2);
    auto comps = X.field_components();
    auto expect = poly_diff(comps[0], Axis::Base, 0) + poly_diff(comps[1], Axis::Base, 1) + X.apply(g);
    CHECK(divergence(Divergence{g}, X) == expect);
  }
}

TEST_CASE("apply derivations: examples") {
  CHECK(apply_d1_derivation(d1("0", q(1), q(0), "0"), op("x1^2")) == op("x1^2"));
  CHECK(apply_d1_derivation(d1("0", q(0), q(1), "0"), op("x1*d1")) == op("1"));
  CHECK(apply_d1_derivation(d1("d1", q(0), q(0), "0"), op("x1*d1")) == op("d1"));
  CHECK(apply_d1_derivation(d1("0", q(0), q(0), "x1*dx1"), op("x1*d1 + 3")) == op("x1^2"));
  CHECK_THROWS_AS(apply_d1_derivation(d1("0", q(1), q(0), "0"), op("d1^2")), PreconditionError);

  CHECK(apply_s_derivation(SDerivation{sym("0"), q(1), form("0")}, sym("p1^2")) == sym("p1^2"));
  CHECK(apply_s_derivation(SDerivation{sym("0"), q(0), form("dx1")}, sym("p1^2")) == sym("2*p1"));
  CHECK(apply_s_derivation(SDerivation{sym("p1"), q(0), form("0")}, sym("x1*p1")) == sym("p1"));

  CHECK(apply_d_derivation(DDerivation{op("0"), form("dx1")}, op("d1")) == op("1"));
  CHECK(apply_d_derivation(DDerivation{op("0"), form("x1^2*dx1")}, op("x1^3 + 2")).is_zero());
  CHECK(apply_d_derivation(DDerivation{op("d1"), form("0")}, op("x1*d1")) == op("d1"));
  CHECK(lowering_derivation(form("dx1"), op("d1^2")) == op("2*d1"));
}

TEST_CASE("lowering derivation matches the twisted-operator oracle at first order in ε") {
  // e^{−εh} D e^{εh} = D + ε ω̄(D) + O(ε²); the linear part of the twisted oracle is ω̄(D)
  RandomSource rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + trial % 2;
    auto D = rng.op(n, 3, 2);
    auto w = rng.closed_form(n, 2);
    auto lowered = lowering_derivation(w, D);
    for (const auto& f : test_functions(n, 2)) {
      // Leibniz: Σ over one factor of each ∂ⁱ replaced by ωᵢ
      std::vector<oracle::Poly> wo;
      for (int i = 0; i < n; ++i) wo.push_back(oracle::from(w[i]));
      oracle::Poly linear;
      for (const auto& [m, c] : D.normal_symbol().terms()) {
        // expand (∂ + ω)^α f to first order in ω
        std::vector<int> seq;
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < m.fiber[i]; ++k) seq.push_back(i);
        oracle::Poly acc;
        for (std::size_t pick = 0; pick < seq.size(); ++pick) {
          oracle::Poly g = f;
          for (std::size_t s = 0; s < seq.size(); ++s)
            g = s == pick ? oracle::mul(wo[static_cast<std::size_t>(seq[s])], g) : oracle::diff(g, seq[s]);
          acc = oracle::add(acc, g);
        }
        oracle::Exps e(static_cast<std::size_t>(2 * n));
        for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] = m.base[i];
        linear = oracle::add(linear, oracle::mul(oracle::Poly{{e, c.as_rational()}}, acc));
      }
      CHECK(oracle::apply(lowered, f) == linear);
    }
  }
}

TEST_CASE("normalize pairs") {
  auto n1 = normalize_d_pair(op("d1 + x1"), form("0"));
  CHECK(n1.P == op("d1"));
  CHECK(n1.omega == form("-dx1"));
  auto n2 = normalize_d_pair(op("x1*d1"), form("x1*dx1"));
  CHECK(n2.P == op("x1*d1"));
  CHECK(n2.omega == form("x1*dx1"));
  auto n3 = normalize_d_pair(op("x1^2"), form("2*x1*dx1"));
  CHECK(n3.P.is_zero());
  CHECK(n3.omega.is_zero());

  auto s1 = normalize_s_pair(sym("p1 + x1"), q(2), form("0"));
  CHECK(s1.P == sym("p1"));
  CHECK(s1.kappa == q(2));
  CHECK(s1.omega == form("-dx1"));
  auto s3 = normalize_s_pair(sym("x1^2"), q(0), form("2*x1*dx1"));
  CHECK(s3.P.is_zero());
  CHECK(s3.omega.is_zero());

  RandomSource rng(4);
  for (int t = 0; t < 20; ++t) {
    auto P = rng.op(2, 3, 2);
    auto w = rng.closed_form(2, 2);
    auto c = normalize_d_pair(P, w);
    CHECK(c.normalized());
    auto again = normalize_d_pair(c.P, c.omega);
    CHECK(again.P == c.P);
    CHECK(again.omega == c.omega);
    for (int k = 0; k < 20; ++k) {
      auto D = rng.op(2, 3, 2);
      CHECK(apply_d_derivation(c, D) == apply_d_derivation(DDerivation{P, w}, D));
    }
  }
}

TEST_CASE("gauge invariance") {
  RandomSource rng(30);
  for (int g = 0; g < 20; ++g) {
    int n = 1 + g % 3;
    auto P = rng.op(n, 3, 2);
    auto w = rng.closed_form(n, 2);
    auto h = rng.function(n, 3);
    DDerivation a{P, w}, b{P + WeylOp::multiplication(h), w + ClosedOneForm::exact(h)};
    auto Ps = rng.symbol(n, 3, 2);
    auto kappa = rng.coefficient();
    SDerivation sa{Ps, kappa, w}, sb{Ps + h, kappa, w + ClosedOneForm::exact(h)};
    for (int k = 0; k < 20; ++k) {
      auto D = rng.op(n, 3, 2);
      CHECK(apply_d_derivation(a, D) == apply_d_derivation(b, D));
      auto S = rng.symbol(n, 3, 2);
      CHECK(apply_s_derivation(sa, S) == apply_s_derivation(sb, S));
    }
  }
}

TEST_CASE("derivation property for the three families") {
  CheckOptions opt;
  opt.trials = 60;
  RandomSource rng(40);
  for (int n = 1; n <= 2; ++n) {
    opt.dim = n;
    D1Derivation c1{rng.vector_field(n, 2), rng.coefficient(), rng.coefficient(), rng.closed_form(n, 2),
                    Divergence{rng.function(n, 2)}};
    auto r1 = check_derivation_property([&](const WeylOp& a) { return apply_d1_derivation(c1, a); }, Algebra::D1, opt);
    CHECK(r1.passed());
    SDerivation cs{rng.symbol(n, 3, 2), rng.coefficient(), rng.closed_form(n, 2)};
    CHECK(check_derivation_property([&](const SymbolPoly& s) { return apply_s_derivation(cs, s); }, opt).passed());
    DDerivation cd{rng.op(n, 3, 2), rng.closed_form(n, 2)};
    CHECK(check_derivation_property([&](const WeylOp& a) { return apply_d_derivation(cd, a); }, Algebra::D, opt)
              .passed());
  }
  opt.dim = 1;
  auto zero = check_derivation_property([](const SymbolPoly& s) { return SymbolPoly(s.dim(), s.mode()); }, opt);
  CHECK(zero.passed());
  auto square = check_derivation_property([](const SymbolPoly& s) { return s * s; }, opt);
  CHECK_FALSE(square.passed());
  REQUIRE_FALSE(square.witnesses.empty());
  CHECK_FALSE(square.witnesses.front().lhs == square.witnesses.front().rhs);
  // D1 maps must stay inside first-order operators
  auto lift = check_derivation_property([](const WeylOp& a) { return weyl_compose(a, a); }, Algebra::D1, opt);
  CHECK_FALSE(lift.passed());
}

TEST_CASE("reports do not depend on the worker count") {
  CheckOptions opt;
  opt.trials = 40;
  opt.dim = 2;
  auto sq = [](const SymbolPoly& s) { return s * s; };
  auto r1 = check_derivation_property(sq, opt);
  opt.workers = 4;
  auto r4 = check_derivation_property(sq, opt);
  CHECK(r1.failures == r4.failures);
  REQUIRE(r1.witnesses.size() == r4.witnesses.size());
  for (std::size_t i = 0; i < r1.witnesses.size(); ++i) CHECK(r1.witnesses[i].a == r4.witnesses[i].a);
}

TEST_CASE("parameter read-off recovers normalized data") {
  RandomSource rng(50);
  for (int t = 0; t < 15; ++t) {
    int n = 1 + t % 3;
    auto w = rng.closed_form(n, 2);
    SDerivation cs = normalize_s_pair(rng.symbol(n, 3, 2), rng.coefficient(), w);
    auto rs = read_off_s([&](const SymbolPoly& s) { return apply_s_derivation(cs, s); }, n);
    CHECK(rs.P == cs.P);
    CHECK(rs.kappa == cs.kappa);
    CHECK(rs.omega == cs.omega);

    DDerivation cd = normalize_d_pair(rng.op(n, 3, 2), w);
    auto rd = read_off_d([&](const WeylOp& d) { return apply_d_derivation(cd, d); }, n);
    CHECK(rd.P == cd.P);
    CHECK(rd.omega == cd.omega);

    D1Derivation c1{rng.vector_field(n, 2), rng.coefficient(), rng.coefficient(), w, Divergence{rng.function(n, 2)}};
    auto r1 = read_off_d1([&](const WeylOp& d) { return apply_d1_derivation(c1, d); }, c1.div);
    CHECK(r1.Y == c1.Y);
    CHECK(r1.kappa == c1.kappa);
    CHECK(r1.lambda == c1.lambda);
    CHECK(r1.omega == c1.omega);
  }
  // κ = −C(1): Deg sends the constant 1 to −1
  auto deg = read_off_s([](const SymbolPoly& s) { return deg_derivation(s); }, 1);
  CHECK(deg.kappa == q(1));
  CHECK(deg.P.is_zero());
}

TEST_CASE("commutation tables") {
  for (int n = 1; n <= 2; ++n) {
    auto rep = verify_commutation_tables(n, 8, 3);
    CHECK(rep.passed());
    for (const auto& r : rep.relations) {
      INFO(r.table << ": " << r.relation);
      CHECK(r.failures == 0);
    }
    CHECK(rep.relations.size() >= 10);
  }
}

TEST_CASE("truncated filter characterization by brute force") {
  Lemma1Caps caps{1, 3, 3};
  for (auto alg : {Lemma1Algebra::Weyl, Lemma1Algebra::SymbolGraded, Lemma1Algebra::SymbolFiltered}) {
    for (auto [i, k] : std::vector<std::pair<int, int>>{{-1, 1}, {0, 1}, {1, 1}, {1, 2}}) {
      auto rep = lemma1_bruteforce(alg, i, k, caps);
      INFO(lemma1_algebra_name(alg) << " i=" << i << " k=" << k);
      CHECK(rep.rhs_in_lhs);
      CHECK(rep.lhs_in_rhs);
      CHECK(rep.lhs_dim == rep.rhs_dim);
    }
  }
  // (S, i = 0, k = 1, n = 1, caps 3)
  CHECK(lemma1_bruteforce(Lemma1Algebra::SymbolGraded, 0, 1, caps).equal());
  // n = 2 at a smaller cap
  CHECK(lemma1_bruteforce(Lemma1Algebra::Weyl, 0, 1, Lemma1Caps{2, 2, 2}).equal());
  CHECK_THROWS_AS(lemma1_bruteforce(Lemma1Algebra::Weyl, 0, 1, Lemma1Caps{3, 3, 3}), PreconditionError);
  CHECK_THROWS_AS(lemma1_bruteforce(Lemma1Algebra::Weyl, 0, 1, Lemma1Caps{1, 4, 3}), PreconditionError);
}

TEST_CASE("induced classical derivation") {
  CHECK(induced_classical_derivation(DDerivation{op("d1"), form("0")}, sym("x1*p1")) == sym("p1"));
  CHECK(induced_classical_derivation(DDerivation{op("0"), form("x1*dx1")}, sym("x1*p1^2")).is_zero());
  CHECK_THROWS_AS(induced_classical_derivation(DDerivation{op("d1"), form("0")}, sym("p1 + p1^2")),
                  PreconditionError);
  // a second-order P raises the order, so no induced map
  CHECK_THROWS_AS(induced_classical_derivation(DDerivation{op("d1^2"), form("0")}, sym("x1*p1")), PreconditionError);

  RandomSource rng(60);
  for (int t = 0; t < 40; ++t) {
    int n = 1 + t % 2;
    auto P = rng.vector_field(n, 2) + WeylOp::multiplication(rng.function(n, 2));
    DDerivation c{P, rng.closed_form(n, 2)};
    int i = rng.uniform_int(0, 3);
    auto s = rng.homogeneous_symbol(n, i, 2);
    auto base = induced_classical_derivation(c, s);
    auto junk = i == 0 ? WeylOp(n) : rng.op(n, i - 1, 2);
    CHECK(induced_classical_derivation(c, s, quantize_standard(s) + junk) == base);
    // grade preserving, and equal to {σ(P), s}
    CHECK((base.is_zero() || (base.is_fiber_homogeneous() && base.fiber_degree() == i)));
    auto sp = symbol_of_order(c.P - WeylOp::multiplication(c.P.normal_symbol().zero_section_part()), 1);
    CHECK(base == poisson_bracket(sp, s));
  }
}

TEST_CASE("Deg is not induced by any quantum derivation") {
  for (int n = 1; n <= 2; ++n) {
    auto rep = solve_deg_as_induced(n, 2);
    CHECK(rep.unknowns > 0);
    CHECK_FALSE(rep.solvable());
  }
}
