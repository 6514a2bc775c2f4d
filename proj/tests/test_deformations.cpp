#include <random>

#include "doctest.h"
#include "dgdef/deformations.hpp"
#include "dgdef/errors.hpp"
#include "dgdef/format.hpp"
#include "support.hpp"

using namespace dgdef;

namespace {

ArtinPtr dual_numbers() {
  static ArtinPtr a = ArtinRing::make(DGAlgebra::Builder().base_gen("eps", 0).rel("eps^2").build());
  return a;
}

ArtinPtr cube_ring() {
  static ArtinPtr a = ArtinRing::make(DGAlgebra::Builder().base_gen("t", 0).rel("t^3").build());
  return a;
}

Derivation der(const AlgPtr& r, int degree, const std::map<std::string, std::string>& vals) {
  std::map<std::string, Element> v;
  for (const auto& [k, e] : vals) v.emplace(k, r->parse(e));
  return Derivation::from_map(r, r, degree, v);
}

Derivation random_derivation(const AlgPtr& r, int degree, int wordlen, std::mt19937_64& rng) {
  std::vector<Element> vals(r->size(), r->zero());
  for (int i : r->nonbase_indices()) {
    vals[i] = testing::random_homogeneous(r, r->generators()[i].degree + degree, wordlen, rng, 3);
  }
  return Derivation(r, r, degree, vals);
}

// Random derivation with every coefficient in the maximal ideal of the base.
Derivation random_nilpotent(const AlgPtr& r, int degree, int wordlen, std::mt19937_64& rng) {
  std::vector<Element> vals(r->size(), r->zero());
  std::vector<Element> ideal;
  for (int i : r->base_indices()) ideal.push_back(r->gen(i));
  std::uniform_int_distribution<std::size_t> pick(0, ideal.size() - 1);
  for (int i : r->nonbase_indices()) {
    Element v = testing::random_homogeneous(r, r->generators()[i].degree + degree, wordlen, rng, 3);
    vals[i] = ideal[pick(rng)] * v;
  }
  return Derivation(r, r, degree, vals);
}

Derivation differential(const AlgPtr& r) {
  std::vector<Element> vals(r->size(), r->zero());
  for (int i : r->nonbase_indices()) vals[i] = r->diff(i);
  return Derivation(r, r, 1, vals);
}

// First-order deformations x^n + eps g of Q[x]/(x^n) modulo coordinate
// changes x -> x + eps h: counted with plain coefficient vectors.
int first_order_count(int n) {
  // The change of x^n is n x^{n-1} h, reduced modulo x^n; rank over h = x^k.
  std::vector<std::vector<long>> rows;
  for (int k = 0; k < n; ++k) {
    std::vector<long> v(n, 0);
    if (n - 1 + k < n) v[n - 1 + k] = n;
    rows.push_back(v);
  }
  int rank = 0;
  std::vector<bool> used(n, false);
  for (const auto& r : rows) {
    for (int c = 0; c < n; ++c) {
      if (r[c] != 0 && !used[c]) {
        used[c] = true;
        ++rank;
        break;
      }
    }
  }
  return n - rank;
}

}  // namespace

TEST_CASE("property: derivation Lie algebra axioms") {
  std::mt19937_64 rng(11);
  AlgPtr r = DGAlgebra::Builder()
                 .gen("x", 0)
                 .gen("y", 0)
                 .gen("a", -1)
                 .gen("b", -1)
                 .gen("w", -2)
                 .diff("a", "x^2")
                 .diff("b", "y^2")
                 .diff("w", "y^2*a - x^2*b")
                 .build();
  Derivation dd = differential(r);
  std::uniform_int_distribution<int> deg(-1, 1);
  for (int trial = 0; trial < 100; ++trial) {
    CAPTURE(trial);
    Derivation a = random_derivation(r, deg(rng), 3, rng);
    Derivation b = random_derivation(r, deg(rng), 3, rng);
    Derivation c = random_derivation(r, deg(rng), 2, rng);
    const int s = (a.degree() * b.degree()) % 2 == 0 ? 1 : -1;
    CHECK(bracket(a, b) == bracket(b, a).scaled(Rational(-s)));
    CHECK(bracket(a, bracket(b, c)) == bracket(bracket(a, b), c) + bracket(b, bracket(a, c)).scaled(Rational(s)));
    CHECK(delta(a) == bracket(dd, a));
    CHECK(delta(delta(a)).is_zero());
    const int sa = a.degree() % 2 == 0 ? 1 : -1;
    CHECK(delta(bracket(a, b)) == bracket(delta(a), b) + bracket(a, delta(b)).scaled(Rational(sa)));
    // Leibniz of a bracket on a random product.
    Element u = testing::random_homogeneous(r, -1, 2, rng);
    Element v = testing::random_homogeneous(r, 0, 2, rng);
    Derivation br = bracket(a, b);
    const int sign = ((br.degree() * -1) % 2 == 0) ? 1 : -1;
    CHECK(br.apply(u * v) == br.apply(u) * v + Rational(sign) * (u * br.apply(v)));
  }
}

TEST_CASE("derivation complexes") {
  AlgPtr q = DGAlgebra::Builder().build();
  DerivationComplex zero = derivation_lie(q, Truncation::window(-1, 1, 3));
  for (int n = -1; n <= 1; ++n) CHECK(zero.basis(n).empty());

  AlgPtr r = DGAlgebra::Builder().gen("x", 0).gen("y", -1).build();
  for (int s : {2, 3, 4}) {
    DerivationComplex dc = derivation_lie(r, Truncation::window(-1, 1, s));
    // Oracle by hand: y -> x^k (k <= s + 1) in degree 1; x -> x^k and y -> x^k y
    // in degree 0; x -> x^k y in degree -1.
    CHECK(dc.basis(1).size() == static_cast<std::size_t>(s + 2));
    CHECK(dc.basis(0).size() == static_cast<std::size_t>(2 * s + 3));
    CHECK(dc.basis(-1).size() == static_cast<std::size_t>(s + 1));
    auto h = dc.cohomology_dims();
    CHECK(h[1] == dc.basis(1).size());
  }
  DerivationComplex dc = derivation_lie(r, Truncation::window(-1, 1, 2));
  Derivation yx = der(r, 1, {{"y", "x"}});
  CHECK(dc.coords(yx));

  // Hypersurface: the class of e -> 1 is not a coboundary.
  AlgPtr t = DGAlgebra::Builder().gen("x", 0).gen("e", -1).diff("e", "x^2").build();
  DerivationComplex dt = derivation_lie(t, Truncation::window(0, 1, 3));
  Derivation e1 = der(t, 1, {{"e", "1"}});
  auto v = dt.coords(e1);
  REQUIRE(v);
  CHECK(delta(e1).is_zero());
  CHECK_FALSE(solve(dt.boundary(0), *v));
  CHECK(dt.cohomology_dims()[1] >= 1);

  // Word-length cut without weights escapes.
  AlgPtr k = DGAlgebra::Builder().gen("x", 0).gen("e", -1).diff("e", "x^2 + x").build();
  Truncation nt = Truncation::window(0, 1, 2);
  nt.infer_weight = false;
  CHECK_THROWS_WITH_AS(derivation_lie(k, nt), doctest::Contains("TruncationNotClosed"), Error);
}

TEST_CASE("Maurer-Cartan checks") {
  ArtinPtr a = dual_numbers();
  AlgPtr r = DGAlgebra::Builder().gen("x", 0).gen("y", -1).build();
  AlgPtr ra = change_base(r, a).algebra;
  Derivation zero = Derivation::zero(ra, ra, 1);
  CHECK(mc_check(zero, a).value);
  CHECK(mc_check_bracket(zero, a).value);
  Derivation xi = der(ra, 1, {{"y", "eps*x"}});
  CHECK(mc_check(xi, a).value);
  CHECK(mc_check_bracket(xi, a).value);
  StrictDeformation def = psi1_deform(r, a, xi);
  AlgPtr expected = DGAlgebra::Builder(a).gen("x", 0).gen("y", -1).diff("y", "eps*x").build();
  CHECK(same_presentation(def.total, expected));
  CHECK(def.reduction_iso);
  CHECK(def.cofibration.value);
  CHECK_THROWS_WITH_AS(mc_check(der(ra, 1, {{"y", "x"}}), a), doctest::Contains("CoefficientNotNilpotent"), Error);

  // A failing instance: the defect on w is t x^2.
  ArtinPtr c = cube_ring();
  AlgPtr s = DGAlgebra::Builder().gen("x", 0).gen("y", -1).gen("w", -2).diff("w", "x*y").build();
  AlgPtr sc = change_base(s, c).algebra;
  Derivation bad = der(sc, 1, {{"y", "t*x"}});
  MCResult m1 = mc_check(bad, c);
  MCResult m2 = mc_check_bracket(bad, c);
  CHECK_FALSE(m1.value);
  CHECK_FALSE(m2.value);
  REQUIRE(m1.defect.count("w"));
  CHECK(m1.defect.at("w") == sc->parse("t*x^2"));
  CHECK(m1.defect.size() == m2.defect.size());
  CHECK_THROWS_WITH_AS(psi1_deform(s, c, bad), doctest::Contains("NotMC"), Error);
}

TEST_CASE("property: over a square-zero base MC is delta xi = 0, and both checks agree") {
  std::mt19937_64 rng(5);
  ArtinPtr a = dual_numbers();
  AlgPtr s = DGAlgebra::Builder().gen("x", 0).gen("y", -1).gen("w", -2).diff("w", "x*y").build();
  AlgPtr sa = change_base(s, a).algebra;
  int closed = 0;
  int open = 0;
  for (int trial = 0; trial < 200; ++trial) {
    CAPTURE(trial);
    Derivation xi = trial % 2 == 0 ? delta(random_nilpotent(sa, 0, 3, rng)) : random_nilpotent(sa, 1, 3, rng);
    const bool mc = mc_check(xi, a).value;
    CHECK(mc == mc_check_bracket(xi, a).value);
    CHECK(mc == delta(xi).is_zero());
    (mc ? closed : open)++;
  }
  CHECK(closed >= 100);
  CHECK(open >= 1);
}

TEST_CASE("property: gauge transforms preserve Maurer-Cartan elements") {
  std::mt19937_64 rng(17);
  AlgPtr s = DGAlgebra::Builder().gen("x", 0).gen("y", -1).gen("w", -2).diff("w", "x*y").build();
  for (const ArtinPtr& a : {dual_numbers(), cube_ring()}) {
    AlgPtr sa = change_base(s, a).algebra;
    for (int trial = 0; trial < 120; ++trial) {
      CAPTURE(trial);
      // MC elements as gauge conjugates of the zero element.
      Derivation xi = gauge_transform(random_nilpotent(sa, 0, 2, rng), Derivation::zero(sa, sa, 1), a).xi;
      REQUIRE(mc_check(xi, a).value);
      Derivation theta = random_nilpotent(sa, 0, 2, rng);
      GaugeResult g = gauge_transform(theta, xi, a);
      CHECK(g.mc);
      CHECK(g.automorphism);
      CHECK(same_on_generators(compose(g.exp_theta, g.exp_minus_theta), identity(sa)));
      if (a->square_zero()) CHECK(g.xi == xi - delta(theta));
    }
  }
}

TEST_CASE("gauge transforms on examples") {
  ArtinPtr a = dual_numbers();
  AlgPtr r = DGAlgebra::Builder().gen("x", 0).gen("y", -1).build();
  AlgPtr ra = change_base(r, a).algebra;
  Derivation xi = der(ra, 1, {{"y", "eps*x"}});
  GaugeResult same = gauge_transform(Derivation::zero(ra, ra, 0), xi, a);
  CHECK(same.xi == xi);
  GaugeResult g = gauge_transform(der(ra, 0, {{"y", "eps*y"}}), xi, a);
  CHECK(g.mc);
  CHECK_THROWS_WITH_AS(gauge_transform(der(ra, 0, {{"y", "y"}}), xi, a), doctest::Contains("NotNilpotent"), Error);
}

TEST_CASE("gauge equivalence") {
  ArtinPtr a = dual_numbers();
  AlgPtr t = DGAlgebra::Builder().gen("x", 0).gen("e", -1).diff("e", "x^2").build();
  AlgPtr ta = change_base(t, a).algebra;
  Derivation zero = Derivation::zero(ta, ta, 1);
  GaugeEquivalence refl = are_gauge_equivalent(zero, zero, a);
  CHECK(refl.value);
  REQUIRE(refl.theta);
  CHECK(refl.theta->is_zero());

  Derivation xi = der(ta, 1, {{"e", "eps"}});
  REQUIRE(mc_check(xi, a).value);
  GaugeEquivalence neq = are_gauge_equivalent(zero, xi, a);
  CHECK_FALSE(neq.value);
  CHECK(neq.conclusive);

  Derivation theta = der(ta, 0, {{"x", "eps*x + eps"}, {"e", "3*eps*e"}});
  Derivation moved = gauge_transform(theta, xi, a).xi;
  GaugeEquivalence eq = are_gauge_equivalent(xi, moved, a);
  CHECK(eq.value);
  REQUIRE(eq.theta);
  CHECK(gauge_transform(*eq.theta, xi, a).xi == moved);
  GaugeEquivalence back = are_gauge_equivalent(moved, xi, a);
  CHECK(back.value);
  CHECK(gauge_transform(eq.theta->scaled(Rational(-1)), moved, a).xi == xi);

  // Over t^3 the witness combines two orders.
  ArtinPtr c = cube_ring();
  AlgPtr tc = change_base(t, c).algebra;
  Derivation xi0 = der(tc, 1, {{"e", "t^2"}});
  Derivation th = der(tc, 0, {{"x", "t*x + t^2"}, {"e", "t*e"}});
  Derivation moved3 = gauge_transform(th, xi0, c).xi;
  GaugeEquivalence eq3 = are_gauge_equivalent(xi0, moved3, c);
  CHECK(eq3.value);
  REQUIRE(eq3.theta);
  CHECK(gauge_transform(*eq3.theta, xi0, c).xi == moved3);
}

TEST_CASE("tangent dimensions against first-order deformation counts") {
  CHECK(first_order_count(2) == 1);
  CHECK(first_order_count(3) == 2);
  for (int n : {2, 3, 4}) {
    CAPTURE(n);
    AlgPtr x = DGAlgebra::Builder().gen("x", 0).rel("x^" + std::to_string(n)).build();
    TangentReport rep = tangent_obstruction_dims(x, 2, {0, 1, 2});
    CHECK(rep.dims[1] == static_cast<std::size_t>(first_order_count(n)));
    CHECK(rep.dims[2] == 0);
  }
  AlgPtr free = DGAlgebra::Builder().gen("x", 0).build();
  TangentReport fr = tangent_obstruction_dims(free, 2, {1, 2});
  CHECK(fr.dims[1] == 0);
  CHECK(fr.dims[2] == 0);
}

TEST_CASE("H0 of strict deformations") {
  ArtinPtr a = dual_numbers();
  AlgPtr r = DGAlgebra::Builder()
                 .gen("x", 0)
                 .gen("y", 0)
                 .gen("a", -1)
                 .gen("b", -1)
                 .diff("a", "x^2")
                 .diff("b", "y^2")
                 .build();
  AlgPtr ra = change_base(r, a).algebra;
  StrictDeformation trivial = psi1_deform(r, a, Derivation::zero(ra, ra, 1));
  H0Deformation h0 = h0_compare(trivial);
  CHECK(h0.finite);
  CHECK(h0.flat);
  CHECK(h0.dim_reduced == 4);
  CHECK(h0.dim_total == 8);

  StrictDeformation def = psi1_deform(r, a, der(ra, 1, {{"b", "eps"}}));
  H0Deformation h1 = h0_compare(def);
  AlgPtr classical = DGAlgebra::Builder(a).gen("x", 0).gen("y", 0).rel("x^2").rel("y^2 + eps").build();
  CHECK(same_ideal(h1.h0, classical));
  CHECK(h1.flat);
  CHECK(h1.dim_total == 8);

  ArtinPtr u = ArtinRing::make(DGAlgebra::Builder().base_gen("u", -1).build());
  AlgPtr ru = change_base(r, u).algebra;
  CHECK_THROWS_WITH_AS(h0_compare(psi1_deform(r, u, Derivation::zero(ru, ru, 1))),
                       doctest::Contains("NotDegreeZero"), Error);
}

TEST_CASE("Hilbert-Schaps check") {
  AlgPtr p = DGAlgebra::Builder().gen("x", 0).gen("y", 0).build();
  std::vector<std::vector<Element>> g = {{p->parse("x^2"), p->parse("y"), p->zero()},
                                         {p->zero(), p->parse("x"), p->parse("y")}};
  std::vector<Element> ideal = {p->parse("x^3"), p->parse("x^2*y"), p->parse("y^2")};
  HilbertSchapsResult res = hilbert_schaps_check(g, ideal, {"x^3", "x^2*y", "y^2 + eps"});
  REQUIRE(res.minors.size() == 3);
  CHECK(res.minors[0] == ideal[0]);
  CHECK(res.minors[1] == ideal[1]);
  CHECK(res.minors[2] == ideal[2]);
  CHECK(res.minors_match);
  CHECK(res.perturbations_in_maximal_ideal);
  CHECK(res.verdict == HilbertSchapsVerdict::not_in_matrix_image);

  // Oracle: expand det(G + eps D) directly over the dual numbers for every
  // elementary D and test membership of eps*xy in the third slot.
  ArtinPtr a = dual_numbers();
  AlgPtr pa = DGAlgebra::Builder(a).gen("x", 0).gen("y", 0).build();
  AlgPtr x = DGAlgebra::Builder(a).gen("x", 0).gen("y", 0).rel("x^3").rel("x^2*y").rel("y^2").build();
  std::vector<std::vector<Element>> cols;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (const auto& m : p->basis(0, 2)) {
        std::vector<std::vector<Element>> h(2, std::vector<Element>(3));
        for (int r = 0; r < 2; ++r) {
          for (int c = 0; c < 3; ++c) h[r][c] = transport(g[r][c], pa);
        }
        h[i][j] += pa->parse("eps") * transport(p->monomial(m), pa);
        std::vector<Element> v;
        for (auto [c1, c2] : std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}}) {
          v.push_back(transport(h[0][c1] * h[1][c2] - h[0][c2] * h[1][c1], x));
        }
        cols.push_back(v);
      }
    }
  }
  // Coordinates over (slot, monomial) pairs; the unperturbed minors vanish in x.
  std::map<std::pair<int, Monomial>, std::size_t> slot;
  auto key = [&](int k, const Monomial& m) { return slot.emplace(std::make_pair(k, m), slot.size()).first->second; };
  std::vector<std::map<std::size_t, Rational>> vecs;
  for (const auto& v : cols) {
    std::map<std::size_t, Rational> e;
    for (int k = 0; k < 3; ++k) {
      for (const auto& [m, c] : v[k].terms()) e[key(k, m)] += c;
    }
    vecs.push_back(e);
  }
  std::map<std::size_t, Rational> want;
  const Element target = x->parse("eps*x*y");
  for (const auto& [m, c] : target.terms()) want[key(2, m)] += c;
  SpanBuilder span(slot.size());
  for (const auto& e : vecs) {
    Vec v(slot.size());
    for (const auto& [k, c] : e) v[k] = c;
    span.add(v);
  }
  Vec w(slot.size());
  for (const auto& [k, c] : want) w[k] = c;
  const bool oracle = span.contains(w);
  HilbertSchapsResult res2 = hilbert_schaps_check(g, ideal, {"x^3", "x^2*y", "y^2 + eps*x*y"});
  CHECK((res2.verdict == HilbertSchapsVerdict::liftable_via_matrix) == oracle);

  CHECK_THROWS_WITH_AS(hilbert_schaps_check(g, {p->parse("x^3"), p->parse("y^2"), p->parse("x*y")},
                                            {"x^3", "y^2", "x*y"}),
                       doctest::Contains("MinorIdealMismatch"), Error);
}

TEST_CASE("derivation files") {
  ArtinPtr a = dual_numbers();
  AlgPtr r = DGAlgebra::Builder().gen("x", 0).gen("y", -1).build();
  AlgPtr ra = change_base(r, a).algebra;
  Derivation xi = parse_derivation("# Example\ndegree 1\nder y = eps*x\n", ra);
  CHECK(xi == der(ra, 1, {{"y", "eps*x"}}));
  CHECK_THROWS_WITH_AS(parse_derivation("der y = eps*x\n", ra), doctest::Contains("missing"), ParseError);
  CHECK_THROWS_WITH_AS(parse_derivation("degree 1\nder z = x\n", ra), doctest::Contains("unknown generator"),
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_derivation("degree 1\nfoo\n", ra), doctest::Contains("line 2"), ParseError);
  CHECK_THROWS_AS(parse_derivation("degree 0\nder y = eps*x\n", ra), Error);
}
