#include <random>

#include "doctest.h"
#include "dgdef/errors.hpp"
#include "dgdef/format.hpp"
#include "dgdef/idempotents.hpp"
#include "support.hpp"

using namespace dgdef;

namespace {

using Names = std::map<std::string, std::string>;

ArtinPtr dual_numbers() {
  static ArtinPtr a = ArtinRing::make(DGAlgebra::Builder().base_gen("eps", 0).rel("eps^2").build());
  return a;
}

bool divisible_by_eps(const Element& x) {
  const AlgPtr& a = x.algebra();
  const int eps = a->index("eps");
  for (const auto& [m, c] : x.terms()) {
    if (m[eps] == 0) return false;
  }
  return true;
}

Morphism graded(const AlgPtr& s, const AlgPtr& t, const Names& names) {
  ImageMap ims;
  for (const auto& [k, v] : names) ims.emplace(k, t->parse(v));
  return make_graded_map(s, t, ims);
}

}  // namespace

TEST_CASE("is_idempotent") {
  AlgPtr z = DGAlgebra::Builder().gen("x", 0).gen("y", 0).build();
  CHECK(is_idempotent(identity(z)));
  CHECK(is_idempotent(make_morphism(z, z, Names{{"x", "x"}, {"y", "-3*x^2"}})));
  CHECK_FALSE(is_idempotent(make_morphism(z, z, Names{{"x", "y"}, {"y", "x"}})));
  AlgPtr w = DGAlgebra::Builder().gen("x", 0).build();
  CHECK_FALSE(is_idempotent(make_morphism(z, w, Names{{"x", "x"}, {"y", "x"}})));

  AlgPtr c = DGAlgebra::Builder().gen("x", 0).gen("u", -1).gen("v", 0).diff("u", "v").build();
  Idempotent kill = make_idempotent(make_morphism(c, c, Names{{"x", "x"}, {"u", "0"}, {"v", "0"}}),
                                    Truncation::window(-2, 0, 4));
  CHECK(kill.trivial);
  Idempotent proj = make_idempotent(make_morphism(c, c, Names{{"x", "0"}, {"u", "u"}, {"v", "v"}}),
                                    Truncation::window(-2, 0, 4));
  CHECK_FALSE(proj.trivial);
  CHECK_THROWS_WITH_AS(make_idempotent(make_morphism(c, c, Names{{"x", "2*x"}, {"u", "u"}, {"v", "v"}}),
                                       Truncation::window(-2, 0, 4)),
                       doctest::Contains("NotIdempotent"), Error);
}

TEST_CASE("fixed locus") {
  AlgPtr z = DGAlgebra::Builder().gen("x", 0).gen("y", 0).gen("u", -1).gen("v", 0).diff("u", "v").build();
  RetractionData id = fixed_locus(identity(z));
  CHECK(id.fixed == z);

  Morphism e = make_morphism(z, z, Names{{"x", "x"}, {"y", "y"}, {"u", "0"}, {"v", "0"}});
  RetractionData r = fixed_locus(e);
  CHECK(r.fixed->nonbase_indices().size() == 2);
  CHECK(same_on_generators(compose(r.project, r.include), identity(r.fixed)));
  CHECK(same_on_generators(compose(r.include, r.project), e));

  // Image generated by x alone; y projects to a polynomial in x.
  Morphism e2 = make_morphism(z, z, Names{{"x", "x"}, {"y", "-2*x^2"}, {"u", "0"}, {"v", "0"}});
  RetractionData r2 = fixed_locus(e2);
  REQUIRE(r2.fixed->nonbase_indices().size() == 1);
  CHECK(r2.project.image("y") == r2.fixed->parse("-2*x^2"));
  CHECK(r2.include.image("x") == z->gen("x"));

  // A retract that keeps the contractible pair.
  Morphism e3 = make_morphism(z, z, Names{{"x", "0"}, {"y", "0"}, {"u", "u"}, {"v", "v"}});
  RetractionData r3 = fixed_locus(e3);
  CHECK(r3.fixed->diff(r3.fixed->index("u")) == r3.fixed->gen("v"));

  CHECK_THROWS_WITH_AS(fixed_locus(e2, {{"y", z->gen("y")}}), doctest::Contains("NotFixed"), Error);
  // x and x^2 are algebraically dependent.
  CHECK_THROWS_WITH_AS(fixed_locus(e2, {{"a", z->gen("x")}, {"b", z->parse("x^2")}}),
                       doctest::Contains("FixedLocusNotFree"), Error);
}

TEST_CASE("extended ideal membership") {
  AlgPtr p = DGAlgebra::Builder(dual_numbers()).gen("x", 0).gen("y", -1).build();
  Element eps = p->parse("eps");
  CHECK(in_extended_ideal(p->parse("eps*x^2 + 3*eps*y"), {eps}));
  CHECK_FALSE(in_extended_ideal(p->parse("eps*x + x"), {eps}));
  CHECK(in_extended_ideal(p->zero(), {}));
  CHECK_FALSE(in_extended_ideal(p->parse("y"), {}));
}

TEST_CASE("graded idempotent correction over the dual numbers") {
  ArtinPtr a = dual_numbers();
  AlgPtr base = DGAlgebra::Builder(a).build();
  AlgPtr p = DGAlgebra::Builder(a).gen("x", 0).gen("y", 0).build();
  Morphism i = make_morphism(base, p, ImageMap{});
  Morphism e = identity(base);
  std::vector<Element> j = {base->parse("eps")};

  // g^2 = g + eps*(...): x -> x + eps*y, y -> 0.
  Morphism g = graded(p, p, Names{{"x", "x + eps*y"}, {"y", "eps*x"}});
  Morphism f = lift_idempotent_graded(g, i, e, j);
  CHECK(is_idempotent(f));
  CHECK(divisible_by_eps(f.image("x") - g.image("x")));

  Morphism bad = graded(p, p, Names{{"x", "2*x"}, {"y", "y"}});
  CHECK_THROWS_WITH_AS(lift_idempotent_graded(bad, i, e, j), doctest::Contains("NotAlmostIdempotent"), Error);

  CHECK_THROWS_WITH_AS(lift_idempotent_graded(g, i, e, {base->parse("1")}),
                       doctest::Contains("IdealNotSquareZero"), Error);
}

TEST_CASE("property: 3g^2 - 2g^3 is an idempotent lift of almost idempotents") {
  std::mt19937_64 rng(20261016);
  ArtinPtr a = dual_numbers();
  AlgPtr base = DGAlgebra::Builder(a).build();
  AlgPtr p = DGAlgebra::Builder(a).gen("x", 0).gen("y", 0).build();
  AlgPtr q = DGAlgebra::Builder().gen("x", 0).gen("y", 0).build();
  Morphism i = make_morphism(base, p, ImageMap{});
  Morphism e = identity(base);
  std::vector<Element> j = {base->parse("eps")};
  const std::vector<Names> idempotents = {{{"x", "x"}, {"y", "y"}},
                                          {{"x", "0"}, {"y", "0"}},
                                          {{"x", "x"}, {"y", "0"}},
                                          {{"x", "0"}, {"y", "y"}}};
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int trial = 0; trial < 500; ++trial) {
    CAPTURE(trial);
    // Conjugate a coordinate idempotent by a triangular automorphism.
    const Names& base_idem = idempotents[pick(rng)];
    Element c = testing::random_homogeneous(q, 0, 2, rng, 2);
    const bool swap = coin(rng) == 1;
    const std::string s = swap ? "y" : "x";
    const std::string o = swap ? "x" : "y";
    Element cs = transport(c, q);
    ImageMap phi{{s, q->gen(s)}};
    ImageMap phi_inv{{s, q->gen(s)}};
    // c must only involve s for the map to be triangular.
    Element poly = q->zero();
    for (const auto& [m, coef] : cs.terms()) {
      if (m[q->index(o)] == 0) poly += coef * q->monomial(m);
    }
    phi.emplace(o, q->gen(o) + poly);
    phi_inv.emplace(o, q->gen(o) - poly);
    Morphism ph = make_graded_map(q, q, phi);
    Morphism ph_inv = make_graded_map(q, q, phi_inv);
    REQUIRE(same_on_generators(compose(ph, ph_inv), identity(q)));
    Morphism e0 = compose(ph, compose(graded(q, q, base_idem), ph_inv));
    REQUIRE(is_idempotent(e0));

    ImageMap gi;
    for (const std::string n : {"x", "y"}) {
      Element h = transport(testing::random_homogeneous(q, 0, 2, rng, 3), p);
      gi.emplace(n, transport(e0.image(n), p) + p->parse("eps") * h);
    }
    Morphism g = make_graded_map(p, p, gi);
    Morphism f = lift_idempotent_graded(g, i, e, j);
    for (const std::string n : {"x", "y"}) {
      CAPTURE(n);
      CAPTURE(g.image(n).str());
      CHECK(compose(f, f).image(n) == f.image(n));
      CHECK(divisible_by_eps(f.image(n) - g.image(n)));
    }
  }
}

TEST_CASE("kernel of a reduction") {
  ArtinPtr a = dual_numbers();
  auto k = kernel_of_reduction(a, nullptr);
  REQUIRE(k.size() == 1);
  CHECK(k[0].str() == "eps");
  ArtinPtr a3 = ArtinRing::make(DGAlgebra::Builder().base_gen("eps", 0).rel("eps^3").build());
  auto k2 = kernel_of_reduction(a3, a);
  REQUIRE(k2.size() == 1);
  CHECK(k2[0].str() == "eps^2");
}

TEST_CASE("lifting a trivial idempotent over the dual numbers") {
  ArtinPtr a = dual_numbers();
  AlgPtr pa = DGAlgebra::Builder(a).gen("x", 0).build();
  AlgPtr ra = DGAlgebra::Builder(a)
                  .gen("x", 0)
                  .gen("y1", -1)
                  .gen("y2", -1)
                  .gen("z2", 0)
                  .diff("y1", "eps*z2")
                  .diff("y2", "z2")
                  .build();
  AlgPtr rb = DGAlgebra::Builder().gen("x", 0).gen("y1", -1).gen("y2", -1).gen("z2", 0).diff("y2", "z2").build();
  Morphism g = make_morphism(pa, ra, Names{{"x", "x"}});
  Morphism fb = make_morphism(rb, rb, Names{{"x", "x"}, {"y1", "y1"}, {"y2", "0"}, {"z2", "0"}});
  IdempotentLift lift = lift_trivial_idempotent_dg(a, nullptr, g, identity(pa), fb);
  CHECK(lift.all_hold());
  REQUIRE(lift.checks.size() == 5);
  for (const auto& c : lift.checks) {
    CAPTURE(c.claim);
    CAPTURE(c.detail);
    CHECK(c.holds);
  }
  CHECK(lift.f.image("y1") == ra->parse("y1 - eps*y2"));
  CHECK(lift.f.image("x") == ra->gen("x"));
  REQUIRE(lift.steps.size() == 1);
  CHECK(lift.steps[0].psi_cocycle);
  CHECK(lift.steps[0].psi_in_subcomplex);
  CHECK(lift.to_json()["all_hold"] == true);

  // The nontrivial idempotent of the killer square has an unsolvable defect.
  AlgPtr base = DGAlgebra::Builder(a).build();
  AlgPtr r2 = DGAlgebra::Builder(a).gen("x", 0).gen("y", -1).diff("y", "eps*x").build();
  AlgPtr r2b = DGAlgebra::Builder().gen("x", 0).gen("y", -1).build();
  Morphism g2 = make_morphism(base, r2, ImageMap{});
  Morphism f2 = make_morphism(r2b, r2b, Names{{"x", "x"}, {"y", "0"}});
  CHECK_THROWS_WITH_AS(lift_trivial_idempotent_dg(a, nullptr, g2, identity(base), f2),
                       doctest::Contains("NotTrivialIdempotent"), Error);
  IdempotentLiftOptions loose;
  loose.check_triviality = false;
  CHECK_THROWS_WITH_AS(lift_trivial_idempotent_dg(a, nullptr, g2, identity(base), f2, loose),
                       doctest::Contains("DefectNotSolvable"), Error);
  try {
    lift_trivial_idempotent_dg(a, nullptr, g2, identity(base), f2, loose);
  } catch (const Error& err) {
    CHECK(std::string(err.what()).find("eps*x") != std::string::npos);
  }

  // Compatibility with g is required.
  Morphism bad = make_morphism(rb, rb, Names{{"x", "0"}, {"y1", "y1"}, {"y2", "0"}, {"z2", "0"}});
  CHECK_THROWS_WITH_AS(lift_trivial_idempotent_dg(a, nullptr, g, identity(pa), bad, loose),
                       doctest::Contains("NotCompatible"), Error);
}

TEST_CASE("lifting over a two-step tower") {
  ArtinPtr a3 = ArtinRing::make(DGAlgebra::Builder().base_gen("eps", 0).rel("eps^3").build());
  AlgPtr pa = DGAlgebra::Builder(a3).gen("x", 0).build();
  AlgPtr ra = DGAlgebra::Builder(a3)
                  .gen("x", 0)
                  .gen("y1", -1)
                  .gen("y2", -1)
                  .gen("z2", 0)
                  .diff("y1", "eps*z2")
                  .diff("y2", "z2")
                  .build();
  AlgPtr rb = DGAlgebra::Builder().gen("x", 0).gen("y1", -1).gen("y2", -1).gen("z2", 0).diff("y2", "z2").build();
  Morphism g = make_morphism(pa, ra, Names{{"x", "x"}});
  Morphism fb = make_morphism(rb, rb, Names{{"x", "x"}, {"y1", "y1"}, {"y2", "0"}, {"z2", "0"}});
  IdempotentLift lift = lift_trivial_idempotent_dg(a3, nullptr, g, identity(pa), fb);
  CHECK(lift.all_hold());
  CHECK(lift.steps.size() == 2);
}

TEST_CASE("reduction cofibration check") {
  ArtinPtr a = dual_numbers();
  AlgPtr p = DGAlgebra::Builder(a).gen("x", 0).build();
  AlgPtr q = DGAlgebra::Builder(a).gen("x", 0).gen("y", -1).diff("y", "x + eps*x").build();
  ReductionCofibration rc = reduction_cofibration_check(make_morphism(p, q, Names{{"x", "x"}}), Truncation::window(-2, 0, 4));
  CHECK(rc.value);
  AlgPtr r = DGAlgebra::Builder(a).gen("x", 0).build();
  ReductionCofibration rc2 =
      reduction_cofibration_check(make_morphism(p, r, Names{{"x", "x^2"}}), Truncation::window(-2, 0, 4));
  CHECK_FALSE(rc2.value);
  AlgPtr nonflat = DGAlgebra::Builder(a).gen("x", 0).rel("eps*x").build();
  CHECK_THROWS_WITH_AS(reduction_cofibration_check(make_morphism(p, nonflat, Names{{"x", "x"}}),
                                                   Truncation::window(-2, 0, 4)),
                       doctest::Contains("NotFlatCertificate"), Error);
}

TEST_CASE("lifting a trivial cofibration from the residue field") {
  ArtinPtr a = dual_numbers();
  AlgPtr p = DGAlgebra::Builder(a).build();
  AlgPtr qbar = DGAlgebra::Builder()
                    .gen("x", -2)
                    .gen("y", -1)
                    .gen("u", -1)
                    .gen("v", 0)
                    .diff("x", "y")
                    .diff("u", "v")
                    .build();
  AlgPtr q0 = DGAlgebra::Builder().build();
  Morphism fbar = make_morphism(q0, qbar, ImageMap{});
  LiftedFactorization lf = lift_trivial_cofibration(p, fbar, Truncation::window(-3, 0, 4));
  for (const auto& c : lf.checks) {
    CAPTURE(c.claim);
    CAPTURE(c.detail);
    CHECK(c.holds);
  }
  CHECK(lf.all_hold());
  CHECK(same_presentation(reduction(lf.middle).algebra, qbar));
  CHECK(lf.middle->base() == a);
}

TEST_CASE("lifting a (C, FW) factorization") {
  ArtinPtr a = dual_numbers();
  AlgPtr p = DGAlgebra::Builder(a).gen("x", 0).build();
  AlgPtr m = DGAlgebra::Builder(a).gen("x", 0).gen("y", -1).diff("y", "x^2 + eps*x").build();
  Morphism f = make_morphism(p, m, Names{{"x", "x"}});
  AlgPtr pbar = reduction(p).algebra;
  AlgPtr mbar = reduction(m).algebra;
  Morphism fbar = change_base(f, pbar, mbar);
  Factorization given = factor_c_fw(fbar, 3);
  LiftedFactorization lf = lift_factorization(f, given, FactorizationKind::C_FW, Truncation::window(-3, 0, 4));
  for (const auto& c : lf.checks) {
    CAPTURE(c.claim);
    CAPTURE(c.detail);
    CHECK(c.holds);
  }
  CHECK(lf.all_hold());
  REQUIRE(lf.right);
  CHECK(same_on_generators(compose(*lf.right, lf.left), f));
}
