#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"

using namespace liederiv;
using namespace support;

// σᵢ that treats the zero operator as having zero symbol in every degree.
static SymbolPoly sigma(const WeylOp& d, int i) {
  return d.is_zero() ? SymbolPoly(d.dim(), d.mode()) : symbol_of_order(d, i);
}

TEST_CASE("scalar arithmetic and modes") {
  CHECK(q(1, 2) + q(1, 3) == q(5, 6));
  CHECK(Scalar::parse("-3/4", Mode::Exact) == q(-3, 4));
  CHECK(Scalar::parse("0.25", Mode::Exact) == q(1, 4));
  CHECK(Scalar::parse("1e-3", Mode::Exact) == q(1, 1000));
  CHECK(Scalar::parse("0.5", Mode::Approx).to_double() == 0.5);
  CHECK_THROWS_AS(q(1) + Scalar::real(1.0), ModeMismatch);
  CHECK(q(2).pow(-2) == q(1, 4));
  CHECK(q(-7, 3).str() == "-7/3");
}

TEST_CASE("poly add, mul, diff examples") {
  CHECK((sym("x1*p1") + sym("-x1*p1")).is_zero());
  CHECK(sym("p1^2") + sym("p1") == sym("p1^2 + p1"));
  CHECK(sym("1/2*x1") + sym("1/2*x1") == sym("x1"));
  CHECK(sym("p1") * sym("p1") == sym("p1^2"));
  CHECK((sym("x1 + p1") * sym("x1 - p1")) == sym("x1^2 - p1^2"));
  CHECK(poly_diff(sym("x1*p1^2"), Axis::Fiber, 0) == sym("2*x1*p1"));
  CHECK(poly_diff(sym("p2", 2), Axis::Base, 0).is_zero());
  CHECK(poly_diff(sym("x1^3"), Axis::Base, 0) == sym("3*x1^2"));
  CHECK_THROWS_AS(sym("x1", 1) + sym("x1", 2), DimensionMismatch);
  CHECK_THROWS_AS(sym("x1") + sym("x1", 1, Mode::Approx), ModeMismatch);
}

TEST_CASE("poly ring axioms and Leibniz against the oracle") {
  RandomSource rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + trial % 3;
    auto a = rng.symbol(n, 3, 3), b = rng.symbol(n, 3, 3), c = rng.symbol(n, 2, 2);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(oracle::to(oracle::mul(oracle::from(a), oracle::from(b)), n) == a * b);
    for (int v = 0; v < n; ++v) {
      CHECK(poly_diff(a * b, Axis::Base, v) == poly_diff(a, Axis::Base, v) * b + a * poly_diff(b, Axis::Base, v));
      CHECK(poly_diff(a * b, Axis::Fiber, v) ==
            poly_diff(a, Axis::Fiber, v) * b + a * poly_diff(b, Axis::Fiber, v));
    }
  }
}

TEST_CASE("substitute and integrate") {
  std::vector<SymbolPoly> xs{sym("x1 + 1")}, ps{sym("2*p1")};
  CHECK(substitute(sym("x1^2*p1"), xs, ps) == sym("2*x1^2*p1 + 4*x1*p1 + 2*p1"));
  // ∫₀² s·x1 ds = 2 x1, s is the last base variable
  CHECK(integrate_last_base(sym("x2*x1", 2), q(2)) == sym("2*x1"));
}

TEST_CASE("poisson bracket examples") {
  CHECK(poisson_bracket(sym("p1"), sym("x1")) == sym("1"));
  CHECK(poisson_bracket(sym("x1"), sym("p1")) == sym("-1"));
  CHECK(poisson_bracket(sym("x1*p1^2"), sym("x1*p1")) == sym("x1*p1^2"));
  RandomSource rng(3);
  for (int i = 0; i < 20; ++i) {
    auto s = rng.symbol(2, 3, 3);
    CHECK(poisson_bracket(s, s).is_zero());
  }
}

TEST_CASE("poisson bracket: oracle, Jacobi, Leibniz, grading") {
  RandomSource rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 1 + trial % 3;
    auto a = rng.symbol(n, 3, 3), b = rng.symbol(n, 3, 3), c = rng.symbol(n, 3, 2);
    CHECK(poisson_bracket(a, b) == oracle::to(oracle::poisson(oracle::from(a), oracle::from(b), n), n));
    auto jac = poisson_bracket(a, poisson_bracket(b, c)) + poisson_bracket(b, poisson_bracket(c, a)) +
               poisson_bracket(c, poisson_bracket(a, b));
    CHECK(jac.is_zero());
    CHECK(poisson_bracket(a, b * c) == poisson_bracket(a, b) * c + b * poisson_bracket(a, c));
    auto ha = rng.homogeneous_symbol(n, 2, 2), hb = rng.homogeneous_symbol(n, 3, 2);
    auto br = poisson_bracket(ha, hb);
    CHECK((br.is_zero() || (br.is_fiber_homogeneous() && br.fiber_degree() == 4)));
  }
}

TEST_CASE("Deg and vertical lift") {
  CHECK(deg_derivation(sym("p1^2")) == sym("p1^2"));
  CHECK(deg_derivation(sym("x1*p1")).is_zero());
  CHECK(deg_derivation(sym("x1^2")) == sym("-x1^2"));
  CHECK(vertical_lift_apply(form("dx1", 2), sym("p1^2", 2)) == sym("2*p1", 2));
  CHECK(vertical_lift_apply(form("x2*dx1 + x1*dx2", 2), sym("p1*p2", 2)) == sym("x2*p2 + x1*p1", 2));
  CHECK(vertical_lift_apply(form("x2*dx1 + x1*dx2", 2), sym("x1^3*x2", 2)).is_zero());

  RandomSource rng(8);
  for (int trial = 0; trial < 60; ++trial) {
    auto a = rng.symbol(2, 3, 2), b = rng.symbol(2, 3, 2);
    auto w = rng.closed_form(2, 2);
    CHECK(deg_derivation(poisson_bracket(a, b)) ==
          poisson_bracket(deg_derivation(a), b) + poisson_bracket(a, deg_derivation(b)));
    CHECK(vertical_lift_apply(w, poisson_bracket(a, b)) ==
          poisson_bracket(vertical_lift_apply(w, a), b) + poisson_bracket(a, vertical_lift_apply(w, b)));
    // the vertical lift agrees with the straight-line oracle Σ ωᵢ ∂_{ξᵢ}
    oracle::Poly expect;
    for (int i = 0; i < 2; ++i)
      expect = oracle::add(expect, oracle::mul(oracle::from(w[i]), oracle::diff(oracle::from(a), 2 + i)));
    CHECK(vertical_lift_apply(w, a) == oracle::to(expect, 2));
  }
}

TEST_CASE("potential and closedness") {
  CHECK(potential(form("dx1", 2)) == sym("x1", 2));
  auto h = potential(form("x2*dx1 + x1*dx2", 2));
  CHECK(h == sym("x1*x2", 2));
  CHECK(poly_diff(h, Axis::Base, 0) == sym("x2", 2));
  CHECK(poly_diff(h, Axis::Base, 1) == sym("x1", 2));
  CHECK_THROWS_AS(form("x2*dx1 - x1*dx2", 2), PreconditionError);
  CHECK_NOTHROW(parse_oneform_components("x2*dx1 - x1*dx2", 2));
  RandomSource rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    auto w = rng.closed_form(3, 3);
    CHECK(ClosedOneForm::exact(potential(w)) == w);
  }
}

TEST_CASE("weyl composition and commutator examples") {
  CHECK(weyl_compose(op("d1"), op("x1")) == op("x1*d1 + 1"));
  CHECK(weyl_compose(op("x1^2", 2), op("x2", 2)) == op("x1^2*x2", 2));
  CHECK(weyl_compose(op("x1*d1"), op("d1")) == op("x1*d1^2"));
  CHECK(weyl_commutator(op("d1"), op("x1")) == op("1"));
  CHECK(weyl_commutator(op("x1*d1"), op("d1")) == op("-d1"));
  RandomSource rng(4);
  for (int i = 0; i < 20; ++i) CHECK(weyl_commutator(rng.op(2, 3, 3), op("1", 2)).is_zero());
}

TEST_CASE("composition matches literal application on test functions") {
  RandomSource rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 1 + trial % 2;
    auto a = rng.op(n, 2, 2), b = rng.op(n, 2, 2), c = rng.op(n, 2, 1);
    auto ab = weyl_compose(a, b);
    for (const auto& f : test_functions(n, 4)) CHECK(oracle::apply(ab, f) == oracle::apply(a, oracle::apply(b, f)));
    CHECK(weyl_compose(weyl_compose(a, b), c) == weyl_compose(a, weyl_compose(b, c)));
    auto lhs = weyl_commutator(a, weyl_commutator(b, c)) + weyl_commutator(b, weyl_commutator(c, a)) +
               weyl_commutator(c, weyl_commutator(a, b));
    CHECK(lhs.is_zero());
  }
  // the library's own apply is literal differentiation too
  auto d = op("x1*d1^2 + 3*d1 + x1^2");
  auto f = sym("x1^4");
  CHECK(d.apply(f) == oracle::to(oracle::apply(d, oracle::from(f)), 1));
}

TEST_CASE("symbol maps") {
  CHECK(symbol_of_order(op("x1*d1^2 + d1"), 2) == sym("x1*p1^2"));
  CHECK(symbol_of_order(op("x1*d1^2 + d1"), 3).is_zero());
  CHECK_THROWS_AS(symbol_of_order(op("x1*d1^2"), 1), PreconditionError);
  CHECK(principal_symbol(op("x1*d1 + 5")) == sym("x1*p1"));
  CHECK(quantize_standard(sym("p1^2")) == op("d1^2"));
  CHECK(quantize_standard(sym("x1*p1")) == op("x1*d1"));
  RandomSource rng(6);
  for (int i = 0; i < 30; ++i) {
    auto s = rng.homogeneous_symbol(2, 2, 3);
    CHECK(symbol_of_order(quantize_standard(s), 2) == s);
  }
}

TEST_CASE("symbol compatibility of products and brackets") {
  RandomSource rng(9);
  for (int trial = 0; trial < 150; ++trial) {
    int n = 1 + trial % 3;
    auto a = rng.op(n, 3, 3), b = rng.op(n, 3, 3);
    if (a.is_zero() || b.is_zero()) continue;
    int ka = a.order(), kb = b.order();
    CHECK(principal_symbol(a) * principal_symbol(b) == sigma(weyl_compose(a, b), ka + kb));
    CHECK(poisson_bracket(principal_symbol(a), principal_symbol(b)) ==
          sigma(weyl_commutator(a, b), ka + kb - 1 < 0 ? 0 : ka + kb - 1));
  }
}

TEST_CASE("conjugation") {
  CHECK(conjugation(op("d1")) == op("d1"));
  CHECK(conjugation(op("x1^2 + 3")) == op("-x1^2 - 3"));
  RandomSource rng(12);
  for (int trial = 0; trial < 80; ++trial) {
    int n = 1 + trial % 2;
    auto a = rng.op(n, 3, 2), b = rng.op(n, 2, 2);
    CHECK(conjugation(conjugation(a)) == a);
    CHECK(conjugation(weyl_compose(a, b)) == -weyl_compose(conjugation(b), conjugation(a)));
    // −𝒞(D) is the formal adjoint, applied by integration by parts
    for (const auto& g : test_functions(n, 3))
      CHECK(oracle::apply(-conjugation(a), g) == oracle::adjoint_apply(a, g));
  }
}

TEST_CASE("split constant part") {
  auto [f1, r1] = split_constant_part(op("x1*d1 + x1"));
  CHECK(f1 == sym("x1"));
  CHECK(r1 == op("x1*d1"));
  auto [f2, r2] = split_constant_part(op("x1^2"));
  CHECK(f2 == sym("x1^2"));
  CHECK(r2.is_zero());
  auto [f3, r3] = split_constant_part(op("d1^2"));
  CHECK(f3.is_zero());
  CHECK(r3 == op("d1^2"));
}

TEST_CASE("text parsing") {
  CHECK(op("d1*x1") == WeylOp(sym("x1*p1 + 1")));
  CHECK(sym("x1*p1^2") == SymbolPoly::term(1, Monomial{MultiIndex(std::vector<int>{1}), MultiIndex(std::vector<int>{2})}, q(1)));
  CHECK(sym("(x1 + p1)^2") == sym("x1^2 + 2*x1*p1 + p1^2"));
  CHECK(sym("x1/2") == sym("1/2*x1"));
  CHECK_THROWS_AS(sym("x1 +"), SyntaxError);
  CHECK_THROWS_AS(sym("x3", 2), SyntaxError);
  CHECK_THROWS_AS(sym("d1"), SyntaxError);
  CHECK_THROWS_AS(op("p1"), SyntaxError);
  CHECK_THROWS_AS(form("x1*dx1*dx1"), SyntaxError);
  CHECK_THROWS_AS(sym("x1 $ 2"), SyntaxError);
  try {
    sym("x1 + * 2");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(std::string(e.what()).find('5') != std::string::npos);
  }
}

TEST_CASE("canonical strings round-trip") {
  RandomSource rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 1 + trial % 3;
    auto s = rng.symbol(n, 3, 3);
    CHECK(parse_symbol(to_string(s), n) == s);
    auto d = rng.op(n, 3, 3);
    CHECK(parse_operator(to_string(d), n) == d);
    auto w = rng.closed_form(n, 2);
    CHECK(parse_oneform(to_string(w), n) == w);
    auto sa = rng.symbol(n, 2, 2, 4, Mode::Approx) * Scalar::real(0.1);
    CHECK(parse_symbol(to_string(sa), n, Mode::Approx) == sa);
  }
  CHECK(to_string(sym("x1 - 3*p1")) == to_string(sym("-3*p1 + x1")));
  CHECK(to_string(SymbolPoly(2)) == "0");
}
