#include <random>

#include "doctest.h"
#include "dgdef/artin.hpp"
#include "dgdef/complex.hpp"
#include "dgdef/errors.hpp"
#include "support.hpp"

using namespace dgdef;

namespace {

Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int zero_bias) {
  Matrix m(r, c);
  std::uniform_int_distribution<int> z(0, 9);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      if (z(rng) >= zero_bias) m.at(i, j) = testing::small_rational(rng);
    }
  }
  return m;
}

// Rank oracle: plain Gauss-Jordan.
std::size_t rref_rank(const Matrix& m) { return rref(m).pivots.size(); }

AlgPtr pushout_xyt() {
  return DGAlgebra::Builder(nullptr, Regime::unbounded)
      .gen("x", 1)
      .gen("y", -1)
      .gen("t", 0)
      .diff("y", "y*x")
      .diff("t", "x*t")
      .build();
}

AlgPtr example_66() {
  return DGAlgebra::Builder()
      .gen("x", 0)
      .gen("y", 0)
      .gen("e", -1)
      .diff("e", "x^2")
      .rel("x^3")
      .rel("y^2")
      .rel("x^2*y")
      .rel("x*e")
      .rel("y*e")
      .build();
}

}  // namespace

TEST_CASE("Bareiss rank agrees with Gauss-Jordan") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(0, 7);
    std::size_t r = dim(rng);
    std::size_t c = dim(rng);
    Matrix m = random_matrix(rng, r, c, trial % 8);
    CHECK(rank(m) == rref_rank(m));
    for (const auto& v : nullspace(m)) {
      Vec mv = m.apply(v);
      CHECK(std::all_of(mv.begin(), mv.end(), [](const Rational& q) { return sgn(q) == 0; }));
    }
    CHECK(nullspace(m).size() + rank(m) == c);
    Vec x(c);
    for (auto& q : x) q = testing::small_rational(rng);
    auto sol = solve(m, m.apply(x));
    REQUIRE(sol);
    CHECK(m.apply(*sol) == m.apply(x));
  }
  Matrix singular(2, 2);
  singular.at(0, 0) = 1;
  singular.at(1, 0) = 2;
  Vec b = {Rational(1), Rational(1)};
  CHECK_FALSE(solve(singular, b));
}

TEST_CASE("complex of the trivial algebra and the killer algebra") {
  AlgPtr q = DGAlgebra::Builder().build();
  FiniteComplex c = extract_complex(q, Truncation::window(-2, 0));
  CHECK(c.closed());
  CHECK(c.basis(0).size() == 1);
  CHECK(cohomology(c).dims.at(0) == 1);

  AlgPtr k = DGAlgebra::Builder().gen("u", -1).diff("u", "1").build();
  FiniteComplex kc = extract_complex(k, Truncation::window(-1, 0), true);
  CHECK(kc.basis(-1).size() == 1);
  CHECK(kc.basis(0).size() == 1);
  CHECK(kc.boundary(-1).at(0, 0) == 1);
  auto h = cohomology(kc);
  CHECK(h.dims.at(-1) == 0);
  CHECK(h.dims.at(0) == 0);
}

TEST_CASE("weight component of the pushout carries [yt]") {
  AlgPtr p = pushout_xyt();
  Truncation t = Truncation::window(-1, 0);
  t.weights = {{"y", {1, 0}}, {"t", {0, 1}}};
  t.component = std::vector<int>{1, 1};
  FiniteComplex c = extract_complex(p, t, true);
  CHECK(c.basis(-1).size() == 1);
  CHECK(c.basis(0).size() == 1);
  auto h = cohomology(c);
  CHECK(h.dims.at(-1) >= 1);
  CHECK(h.representatives.at(-1).front() == p->parse("y*t"));
  CHECK_FALSE(solve_coboundary(c, p->parse("y*t")));

  Truncation bad = t;
  bad.weights = {{"y", {1, 0}}, {"t", {0, 1}}, {"x", {0, 1}}};
  CHECK_THROWS_WITH_AS(extract_complex(p, bad), doctest::Contains("MultigradingNotHomogeneous"), Error);
}

TEST_CASE("the algebra with e, de = x^2") {
  AlgPtr r = example_66();
  FiniteComplex c = extract_complex(r, Truncation::window(-1, 0), true);
  auto h = cohomology(c);
  CHECK(h.dims.at(0) == 4);
  CHECK(h.dims.at(-1) == 0);
  auto e = solve_coboundary(c, r->parse("x^2"));
  REQUIRE(e);
  CHECK(*e == r->gen("e"));
  CHECK(solve_coboundary(c, r->zero())->is_zero());
  CHECK_THROWS_WITH_AS(solve_coboundary(c, r->gen("e")), doctest::Contains("NotACocycle"), Error);
}

TEST_CASE("truncation certificates") {
  AlgPtr tate = DGAlgebra::Builder().gen("x", 0).gen("e", -1).diff("e", "x^2").build();
  Truncation wl = Truncation::window(-1, 0, 4);
  wl.infer_weight = false;
  FiniteComplex open = extract_complex(tate, wl);
  CHECK_FALSE(open.closed());
  CHECK(open.escaping());
  CHECK_THROWS_WITH_AS(extract_complex(tate, wl, true), doctest::Contains("TruncationNotClosed"), Error);
  CHECK_THROWS_WITH_AS(cohomology(open), doctest::Contains("NotClosed"), Error);

  FiniteComplex weighted = extract_complex(tate, Truncation::window(-1, 0, 6));
  CHECK(weighted.closed());
  CHECK(weighted.mode() == "weight<=6");
  auto h = cohomology(weighted);
  CHECK(h.dims.at(0) == 2);  // 1, x
  CHECK(h.dims.at(-1) == 0);
}

TEST_CASE("quasi-isomorphisms") {
  AlgPtr p = pushout_xyt();
  // dt = xt admits no inferred weight, so word length cuts are open.
  CHECK_THROWS_WITH_AS(is_quasi_iso(identity(p), Truncation::window(-2, 0)), doctest::Contains("TruncationNotClosed"),
                       Error);
  Truncation t = Truncation::window(-1, 0);
  t.weights = {{"y", {1, 0}}, {"t", {0, 1}}};
  t.component = std::vector<int>{1, 1};
  CHECK(is_quasi_iso(identity(p), t).value);

  AlgPtr b = DGAlgebra::Builder(nullptr, Regime::unbounded).gen("x", 1).gen("y", -1).diff("y", "y*x").build();
  Morphism kill_t = make_morphism(p, b, std::map<std::string, std::string>{{"x", "x"}, {"y", "y"}, {"t", "0"}});
  auto r = is_quasi_iso(kill_t, t);
  CHECK_FALSE(r.value);
  REQUIRE(r.witness);
  CHECK(*r.witness == p->parse("y*t"));

  AlgPtr a = DGAlgebra::Builder(nullptr, Regime::unbounded).gen("x", 1).build();
  Morphism i = make_morphism(a, b, std::map<std::string, std::string>{{"x", "x"}});
  CHECK(is_quasi_iso(i, Truncation::window(-3, 0)).value);
}

TEST_CASE("Nakayama over the dual numbers") {
  ArtinPtr eps = ArtinRing::make(DGAlgebra::Builder().base_gen("eps", 0).rel("eps^2").build());
  AlgPtr r = DGAlgebra::Builder(eps).gen("x", 0).gen("y", -1).gen("z", -1).diff("y", "eps*x").build();
  Truncation t = Truncation::window(-2, 0, 4);
  CHECK(nakayama_check(identity(r), t).verdict == NakayamaVerdict::iso);

  // Reduction is the identity; the perturbation is nilpotent.
  Morphism f = make_morphism(r, r, std::map<std::string, std::string>{
                                       {"x", "x + eps*x"}, {"y", "y + eps*z"}, {"z", "z + eps*y"}});
  CHECK(nakayama_check(f, t).verdict == NakayamaVerdict::iso);

  Morphism g = make_morphism(r, r, std::map<std::string, std::string>{{"x", "x"}, {"y", "y"}, {"z", "eps*y"}});
  auto res = nakayama_check(g, t);
  CHECK(res.verdict == NakayamaVerdict::neither);
  CHECK_FALSE(res.reduced_iso);

  AlgPtr mixed = DGAlgebra::Builder(eps).gen("x", 0).rel("x^2 + eps").build();
  CHECK_THROWS_WITH_AS(nakayama_check(identity(mixed), t), doctest::Contains("NotFlatCertificate"), Error);
}

TEST_CASE("property: boundaries compose to zero, Euler characteristic, coboundary round trip") {
  std::mt19937_64 rng(5);
  AlgPtr tate = DGAlgebra::Builder()
                    .gen("x", 0)
                    .gen("y", 0)
                    .gen("e", -1)
                    .gen("f", -1)
                    .gen("s", -2)
                    .diff("e", "x^2")
                    .diff("f", "x*y")
                    .diff("s", "y*e - x*f")
                    .build();
  FiniteComplex c = extract_complex(tate, Truncation::window(-3, 0, 5), true);
  for (int deg = -4; deg < 0; ++deg) {
    CHECK((c.boundary(deg + 1) * c.boundary(deg)).is_zero());
  }
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<int> deg(-3, -1);
    int k = deg(rng);
    Element h = testing::random_homogeneous(tate, k, 2, rng);
    Element z = d(h);
    auto h2 = solve_coboundary(c, z);
    REQUIRE(h2);
    CHECK(d(*h2) == z);
  }

  // Finite complexes: full window, so chain and cohomology Euler numbers agree.
  AlgPtr fin = DGAlgebra::Builder()
                   .gen("a", 0)
                   .gen("b", -1)
                   .gen("c", -1)
                   .gen("g", -2)
                   .diff("b", "a")
                   .diff("g", "c")
                   .rel("a^2")
                   .rel("a*b")
                   .rel("a*c")
                   .rel("a*g")
                   .rel("b*c")
                   .rel("b*g")
                   .rel("c*g")
                   .rel("g^2")
                   .build();
  FiniteComplex fc = extract_complex(fin, Truncation::window(-4, 0), true);
  auto h = cohomology(fc);
  long chain = 0;
  long coh = 0;
  for (int deg = -4; deg <= 0; ++deg) {
    long sign = (deg % 2 == 0) ? 1 : -1;
    chain += sign * static_cast<long>(fc.basis(deg).size());
    coh += sign * static_cast<long>(h.dims.at(deg));
  }
  CHECK(chain == coh);
  CHECK(h.dims.at(0) == 1);
}
