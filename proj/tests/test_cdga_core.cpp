#include <random>

#include "doctest.h"
#include "dgdef/artin.hpp"
#include "dgdef/errors.hpp"
#include "dgdef/format.hpp"
#include "dgdef/morphism.hpp"
#include "support.hpp"

using namespace dgdef;

namespace {

AlgPtr example_b() {
  return DGAlgebra::Builder(nullptr, Regime::unbounded)
      .gen("x", 1)
      .gen("y", -1)
      .diff("y", "y*x")
      .build();
}

ArtinPtr dual_numbers() {
  return ArtinRing::make(DGAlgebra::Builder().base_gen("eps", 0).rel("eps^2").build());
}

// Leibniz expansion over a product of generators, computed independently of
// the algebra's own differential cache.
Element leibniz_oracle(const AlgPtr& a, const std::vector<int>& word) {
  Element total = a->zero();
  int prefix_degree = 0;
  for (std::size_t k = 0; k < word.size(); ++k) {
    Element term = a->scalar(prefix_degree % 2 == 0 ? 1 : -1);
    for (std::size_t j = 0; j < word.size(); ++j) {
      term = term * (j == k ? a->diff(word[j]) : a->gen(word[j]));
    }
    total += term;
    prefix_degree += a->generators()[word[k]].degree;
  }
  return total;
}

}  // namespace

TEST_CASE("Koszul signs on odd generators") {
  AlgPtr b = example_b();
  Element x = b->gen("x");
  Element y = b->gen("y");
  CHECK((y * y).is_zero());
  CHECK((x * y) == -(y * x));
  CHECK(d(y) == y * x);
  CHECK(d(d(y)).is_zero());
}

TEST_CASE("trivial algebra and killer algebra") {
  AlgPtr q = DGAlgebra::Builder().build();
  CHECK(q->size() == 0);
  CHECK(d(q->one()).is_zero());
  CHECK(q->basis(0, 8).size() == 1);

  AlgPtr k = DGAlgebra::Builder().gen("u", -1).diff("u", "1").build();
  CHECK(d(k->gen("u")) == k->one());
}

TEST_CASE("d(yt) vanishes in the pushout algebra") {
  AlgPtr p = DGAlgebra::Builder(nullptr, Regime::unbounded)
                 .gen("x", 1)
                 .gen("y", -1)
                 .gen("t", 0)
                 .diff("y", "y*x")
                 .diff("t", "x*t")
                 .build();
  Element yt = p->parse("y*t");
  CHECK(d(yt).is_zero());
  CHECK(d(yt) == leibniz_oracle(p, {p->index("y"), p->index("t")}));
}

TEST_CASE("construction errors") {
  CHECK_THROWS_WITH_AS(DGAlgebra::Builder().gen("x", 1).build(), doctest::Contains("NonpositiveViolation"),
                       Error);
  CHECK_THROWS_WITH_AS(DGAlgebra::Builder().gen("y", -1).diff("y", "y").build(),
                       doctest::Contains("DegreeMismatch"), Error);
  // d(e) = f, d(f) = 0 fine; d(w) = e makes d^2(w) = f nonzero.
  CHECK_THROWS_WITH_AS(DGAlgebra::Builder()
                           .gen("w", -2)
                           .gen("e", -1)
                           .gen("f", 0)
                           .diff("e", "f")
                           .diff("w", "e")
                           .build(),
                       doctest::Contains("DSquareNonzero"), Error);
  CHECK_THROWS_AS(DGAlgebra::Builder().gen("x", 0).gen("x", -1).build(), Error);
}

TEST_CASE("relations: monomial, Groebner and d-closure") {
  AlgPtr r = DGAlgebra::Builder()
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
  CHECK(r->parse("x^3").is_zero());
  CHECK(r->parse("x*e").is_zero());
  CHECK(r->basis(0, 8).size() == 5);  // 1, x, y, x^2, xy
  CHECK(r->basis(-1, 8).size() == 1);

  AlgPtr g = DGAlgebra::Builder().gen("x", 0).gen("y", 0).rel("x^2 - y^2").rel("x*y").build();
  // x^3 = x*y^2 = 0 in this ring.
  CHECK(g->parse("x^3").is_zero());
  CHECK(g->parse("x^2") == g->parse("y^2"));
  CHECK(g->basis(0, 8).size() == 4);  // 1, x, y, x^2

  CHECK_THROWS_WITH_AS(DGAlgebra::Builder().gen("y", -1).gen("z", -1).rel("y + z").build(),
                       doctest::Contains("UnsupportedRelation"), Error);
}

TEST_CASE("differential over an Artin base") {
  ArtinPtr a = ArtinRing::make(
      DGAlgebra::Builder().base_gen("eps", 0).rel("eps^2").build());
  AlgPtr c = DGAlgebra::Builder(a, Regime::unbounded)
                 .gen("u", -1)
                 .gen("v", -2)
                 .diff("u", "eps")
                 .diff("v", "eps*u")
                 .build();
  CHECK(d(c->gen("v")) == c->parse("eps*u"));
  CHECK(d(c->gen("u")) == c->gen("eps"));
  CHECK((c->gen("eps") * c->gen("eps")).is_zero());
}

TEST_CASE("Artin rings") {
  ArtinPtr eps = dual_numbers();
  CHECK(eps->dim() == 2);
  CHECK(eps->square_zero());
  CHECK(eps->nilpotency_index() == 2);

  ArtinPtr q = ArtinRing::make(DGAlgebra::Builder().build());
  CHECK(q->dim() == 1);
  CHECK(q->maximal_ideal().empty());

  ArtinPtr u = ArtinRing::make(DGAlgebra::Builder().base_gen("u", -2).rel("u^2").build());
  CHECK(u->dim() == 2);
  CHECK(u->basis_degree(1 - u->unit_index()) == -2);

  ArtinPtr odd = ArtinRing::make(DGAlgebra::Builder().base_gen("u", -1).build());
  CHECK(odd->dim() == 2);

  CHECK_THROWS_WITH_AS(ArtinRing::make(DGAlgebra::Builder().base_gen("x", 0).build()),
                       doctest::Contains("ResidueNotField"), Error);
  CHECK_THROWS_WITH_AS(ArtinRing::make(DGAlgebra::Builder().base_gen("u", -2).build()),
                       doctest::Contains("NotFiniteDimensional"), Error);
}

TEST_CASE("small extension towers") {
  SUBCASE("truncated polynomial ring") {
    ArtinPtr a = ArtinRing::make(DGAlgebra::Builder().base_gen("t", 0).rel("t^3").build());
    auto tower = small_extension_tower(a, {a->presentation()->gen("t")});
    REQUIRE(tower.size() == 2);
    CHECK(tower[0].t == tower[0].total->presentation()->parse("t^2"));
    CHECK(tower[1].t == tower[1].total->presentation()->parse("t"));
    CHECK(tower[1].quotient->dim() == 1);
  }
  SUBCASE("dual numbers") {
    ArtinPtr a = dual_numbers();
    auto tower = small_extension_tower(a, {a->presentation()->gen("eps")});
    REQUIRE(tower.size() == 1);
    CHECK(tower[0].t == a->presentation()->gen("eps"));
  }
  SUBCASE("socle element replaced by its differential") {
    ArtinPtr a = ArtinRing::make(DGAlgebra::Builder()
                                     .base_gen("u", 0)
                                     .base_gen("e", -1)
                                     .diff("e", "u")
                                     .rel("u^2")
                                     .rel("u*e")
                                     .build());
    CHECK(a->dim() == 3);
    auto tower = small_extension_tower(a, {a->presentation()->gen("u"), a->presentation()->gen("e")});
    REQUIRE(tower.size() == 2);
    CHECK(tower[0].t == a->presentation()->gen("u"));
    // Oracle: every step's kernel is killed by the maximal ideal and is a cocycle.
    for (const auto& s : tower) {
      CHECK(s.total->in_socle(s.t));
      CHECK(d(s.t).is_zero());
    }
  }
}

TEST_CASE("morphisms") {
  AlgPtr b = example_b();
  AlgPtr dd = DGAlgebra::Builder(nullptr, Regime::unbounded)
                  .gen("x", 1)
                  .gen("y", -1)
                  .gen("z", 0)
                  .diff("y", "z")
                  .build();
  Morphism q = make_morphism(dd, b, std::map<std::string, std::string>{{"x", "x"}, {"y", "y"}, {"z", "y*x"}});
  CHECK(q.chain_map());
  CHECK(identity(b).chain_map());
  CHECK_THROWS_AS(make_morphism(b, dd, std::map<std::string, std::string>{{"x", "x"}, {"y", "y"}}),
                  ChainMapFailure);

  // The graded candidate: d f(y) = 0 but f(dy) = eps*x.
  ArtinPtr a = dual_numbers();
  AlgPtr ra = DGAlgebra::Builder(a).gen("x", 0).gen("y", -1).diff("y", "eps*x").build();
  try {
    make_morphism(ra, ra, std::map<std::string, std::string>{{"x", "x"}, {"y", "eps*y"}});
    FAIL("expected ChainMapFailure");
  } catch (const ChainMapFailure& e) {
    CHECK(e.generator() == "y");
    CHECK(e.defect() == "-eps*x");
  }
}

TEST_CASE("pushouts") {
  AlgPtr a = DGAlgebra::Builder(nullptr, Regime::unbounded).gen("x", 1).build();
  AlgPtr x = DGAlgebra::Builder(nullptr, Regime::unbounded)
                 .gen("x", 1)
                 .gen("t", 0)
                 .diff("t", "x*t")
                 .build();
  AlgPtr b = example_b();
  Morphism j = make_morphism(a, x, std::map<std::string, std::string>{{"x", "x"}});
  Morphism i = make_morphism(a, b, std::map<std::string, std::string>{{"x", "x"}});
  Pushout p = pushout(j, i);
  REQUIRE(p.algebra->size() == 3);
  CHECK(p.algebra->find("t"));
  CHECK(d(p.algebra->gen("t")) == p.algebra->parse("x*t"));
  CHECK(d(p.algebra->gen("y")) == p.algebra->parse("y*x"));
  CHECK(p.from_x.chain_map());

  // Unit: X ⊗_A A = X.
  Pushout unit = pushout(j, identity(a));
  CHECK(unit.algebra->size() == 2);

  SUBCASE("associativity on presentations") {
    AlgPtr c = DGAlgebra::Builder(nullptr, Regime::unbounded)
                   .gen("x", 1)
                   .gen("y", -1)
                   .gen("s", -2)
                   .diff("y", "y*x")
                   .diff("s", "s*x")
                   .build();
    Morphism bc = make_morphism(b, c, std::map<std::string, std::string>{{"x", "x"}, {"y", "y"}});
    Pushout two = pushout(p.from_b, bc);               // (X ⊗_A B) ⊗_B C
    Pushout one = pushout(j, compose(bc, i));          // X ⊗_A C
    CHECK(same_presentation(two.algebra, one.algebra));
  }
}

TEST_CASE("base change and reduction") {
  ArtinPtr a = dual_numbers();
  AlgPtr ra = DGAlgebra::Builder(a).gen("x", 0).gen("y", -1).diff("y", "eps*x").rel("x^2 + eps*x").build();
  BaseChange red = reduction(ra);
  CHECK(red.algebra->size() == 2);
  CHECK(d(red.algebra->gen("y")).is_zero());
  CHECK(red.algebra->parse("x^2").is_zero());
  CHECK(red.map.chain_map());
  CHECK(red.map(ra->parse("eps*y + x")) == red.algebra->gen("x"));

  AlgPtr r = DGAlgebra::Builder().gen("x", 0).build();
  BaseChange up = change_base(r, a);
  CHECK(up.algebra->size() == 2);
  CHECK(up.map.chain_map());
}

TEST_CASE("algebra file round trip") {
  const char* text =
      "base Q\n"
      "regime unbounded\n"
      "gen x 1\n"
      "gen y -1  # odd\n"
      "diff y = y*x\n";
  AlgPtr b = parse_algebra(text);
  CHECK(same_presentation(b, example_b()));
  std::string canon = serialize_algebra(b);
  CHECK(serialize_algebra(parse_algebra(canon)) == canon);
  CHECK(parse_algebra("base Q\n")->size() == 0);
  CHECK_THROWS_WITH_AS(parse_algebra("base Q\nregime unbounded\ngen x 1\ngen y -1\ndiff y = x\n"),
                       doctest::Contains("DegreeMismatch"), Error);
  try {
    parse_algebra("base Q\ngen x 0\ndiff x = x +* 2\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_algebra("bogus 1\n"), ParseError);
}

TEST_CASE("property: d^2 = 0, Koszul commutativity and Leibniz on random elements") {
  std::mt19937_64 rng(11);
  ArtinPtr a = dual_numbers();
  std::vector<AlgPtr> algebras = {
      DGAlgebra::Builder()
          .gen("x", 0)
          .gen("y", -1)
          .gen("z", -1)
          .gen("w", -2)
          .diff("y", "x^2")
          .diff("w", "x*y - x*z")
          .diff("z", "x^2")
          .build(),
      DGAlgebra::Builder(a).gen("x", 0).gen("y", -1).gen("s", -2).diff("y", "eps*x").diff("s", "eps*y").build(),
  };
  for (const auto& alg : algebras) {
    for (int trial = 0; trial < 500; ++trial) {
      std::uniform_int_distribution<int> deg(-3, 0);
      int da = deg(rng);
      int db = deg(rng);
      Element p = testing::random_homogeneous(alg, da, 3, rng);
      Element q = testing::random_homogeneous(alg, db, 3, rng);
      CHECK(d(d(p)).is_zero());
      int sign = ((da * db) % 2 == 0) ? 1 : -1;
      CHECK((p * q - Rational(sign) * (q * p)).is_zero());
      Rational s = (da % 2 == 0) ? 1 : -1;
      CHECK(d(p * q) == d(p) * q + s * (p * d(q)));
      if (da % 2 != 0) CHECK((p * p).is_zero());
    }
  }
}
