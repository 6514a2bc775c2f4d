#include "dgdef/verify.hpp"

#include <chrono>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "dgdef/artin.hpp"
#include "dgdef/complex.hpp"
#include "dgdef/deformations.hpp"
#include "dgdef/derivation.hpp"
#include "dgdef/element_system.hpp"
#include "dgdef/errors.hpp"
#include "dgdef/format.hpp"
#include "dgdef/idempotents.hpp"
#include "dgdef/model.hpp"
#include "dgdef/morphism.hpp"

namespace dgdef {

using json = nlohmann::json;

namespace {

using Names = std::map<std::string, std::string>;
using Clock = std::chrono::steady_clock;

// ---------------------------------------------------------------------------
// Report plumbing

void add(VerificationReport& r, std::string claim, bool holds, bool certified, std::string witness = {}) {
  r.evidence.push_back({std::move(claim), holds, certified, std::move(witness)});
}

void finish(VerificationReport& r) {
  bool refuted = false;
  bool open = false;
  for (const auto& e : r.evidence) {
    if (!e.holds && e.certified) refuted = true;
    if (!e.certified) open = true;
  }
  if (r.evidence.empty()) open = true;
  if (refuted) {
    r.status = Status::refuted;
  } else if (open) {
    r.status = Status::inconclusive_truncation;
  } else {
    r.status = Status::verified;
  }
}

bool truncation_error(const Error& e) {
  static const std::set<std::string> kinds = {"TruncationNotClosed", "DefectNotSolvable", "FixedLocusTruncation",
                                              "InconclusiveTruncation", "NoSection"};
  return kinds.count(e.kind()) > 0;
}

Morphism morph(const AlgPtr& s, const AlgPtr& t, const Names& names) { return make_morphism(s, t, names); }

Morphism graded(const AlgPtr& s, const AlgPtr& t, const Names& names) {
  ImageMap ims;
  for (const auto& [k, v] : names) ims.emplace(k, t->parse(v));
  return make_graded_map(s, t, ims);
}

ArtinPtr truncated_poly(const std::string& name, int n) {
  return ArtinRing::make(DGAlgebra::Builder().base_gen(name, 0).rel(name + "^" + std::to_string(n)).build());
}

std::string join(const std::vector<Element>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i].str();
  return s;
}

// Terms of e whose monomials are not in `drop`.
Element without(const Element& e, const std::set<Monomial>& drop) {
  Element out = e.algebra()->zero();
  for (const auto& [m, c] : e.terms()) {
    if (!drop.count(m)) out += c * e.algebra()->monomial(m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Examples

// B = Q[x,y], dy = yx, and the trivial fibration q: D = Q[x,y,z] -> B.
void example_no_section(VerificationReport& r, const ExampleOptions& o) {
  const int L = o.max_wordlen.value_or(6);
  const int L_min = 2;
  r.truncation = "word length<=" + std::to_string(L);
  AlgPtr b = DGAlgebra::Builder(nullptr, Regime::unbounded).gen("x", 1).gen("y", -1).diff("y", "y*x").build();
  AlgPtr dd = DGAlgebra::Builder(nullptr, Regime::unbounded).gen("x", 1).gen("y", -1).gen("z", 0).diff("y", "z").build();
  Morphism q = morph(dd, b, {{"x", "x"}, {"y", "y"}, {"z", "y*x"}});
  add(r, "q: D -> B, z -> yx, is a chain map", true, true, q.str());
  const auto [lo, hi] = o.window.value_or(std::make_pair(-2, 1));
  MorphismClass cq = classify(q, Truncation::window(lo, hi, L));
  add(r, "q is surjective and a quasi-isomorphism in degrees " + std::to_string(lo) + ".." + std::to_string(hi),
      cq.fibration && cq.weak_equivalence, true, cq.truncation);

  // Unknown graded section f(x) = sum a_i cx_i, f(y) = sum b_j cy_j.
  std::vector<Element> cx = candidates(dd, 1, L);
  std::vector<Element> cy = candidates(dd, -1, L);
  const std::size_t nx = cx.size();
  const std::size_t n = nx + cy.size();
  std::set<Monomial> bilinear;
  bool shape = true;
  const int ix = dd->index("x");
  const int iy = dd->index("y");
  for (const auto& u : cy) {
    for (const auto& v : cx) {
      const Element uv = u * v;
      for (const auto& [m, c] : uv.terms()) {
        bilinear.insert(m);
        shape = shape && m[ix] == 1 && m[iy] == 1;
      }
    }
  }
  for (const auto& v : cx) {
    for (const auto& [m, c] : v.terms()) shape = shape && m[ix] == 1 && m[iy] == 0;
  }
  for (const auto& u : cy) {
    for (const auto& [m, c] : u.terms()) shape = shape && m[ix] == 0 && m[iy] == 1;
    const Element du = d(u);
    for (const auto& [m, c] : du.terms()) shape = shape && m[iy] == 0;
  }
  ElementSystem sys(n);
  auto cols = [&](const std::function<Element(std::size_t)>& fx, const std::function<Element(std::size_t)>& fy) {
    std::vector<Element> out;
    for (std::size_t i = 0; i < nx; ++i) out.push_back(fx(i));
    for (std::size_t j = 0; j < cy.size(); ++j) out.push_back(fy(j));
    return out;
  };
  sys.require(cols([&](std::size_t i) { return q.apply(cx[i]); }, [&](std::size_t) { return b->zero(); }), b->gen("x"));
  sys.require(cols([&](std::size_t) { return b->zero(); }, [&](std::size_t j) { return q.apply(cy[j]); }), b->gen("y"));
  sys.require(cols([&](std::size_t i) { return d(cx[i]); }, [&](std::size_t) { return dd->zero(); }), dd->zero());
  ElementSystem control = sys;
  sys.require(cols([&](std::size_t) { return dd->zero(); }, [&](std::size_t j) { return without(d(cy[j]), bilinear); }),
              dd->zero());
  const bool infeasible = !sys.solve();
  const bool control_solves = control.solve().has_value();
  add(r, "control: without the y-equation the section system is solvable", control_solves, true,
      "graded sections with d f(x) = 0 exist, e.g. x -> x, y -> y");
  std::ostringstream w;
  w << cx.size() << " candidates for f(x), " << cy.size() << " for f(y); ";
  w << "f(x) = x*h(z), f(y) = y*k(z); d f(y) = z*k(z) has no y factor while f(dy) = y*x*h(z)*k(z) lies in (y*x); "
       "q f = id forces k(0) = 1, so the y-free part z*k(z) = 0 has no solution";
  add(r, "no DG section f of q with word length <= " + std::to_string(L), infeasible, infeasible && L >= L_min, w.str());
  add(r, "infeasible equation family: d f(y) = z*k versus f(dy) = y*x*h*k", infeasible && shape,
      infeasible && shape && L >= L_min, "shape of every candidate verified monomial by monomial");
  r.notes.push_back("completeness: degree bookkeeping forces f(x) = x*h(z), f(y) = y*k(z) for every bound, and the "
                    "y-free part of the y-equation is linear, so the obstruction does not depend on the bound");
  if (L < L_min) r.notes.push_back("bound below " + std::to_string(L_min) + ": h and k are forced to be constants");
}

// The pushout Q[x,y,t] and the class [yt].
void example_pushout_class(VerificationReport& r, const ExampleOptions& o) {
  const int L = o.max_wordlen.value_or(6);
  const auto [lo, hi] = o.window.value_or(std::make_pair(-1, 0));
  AlgPtr a = DGAlgebra::Builder(nullptr, Regime::unbounded).gen("x", 1).build();
  AlgPtr xt = DGAlgebra::Builder(nullptr, Regime::unbounded).gen("x", 1).gen("t", 0).diff("t", "x*t").build();
  AlgPtr b = DGAlgebra::Builder(nullptr, Regime::unbounded).gen("x", 1).gen("y", -1).diff("y", "y*x").build();
  Morphism j = morph(a, xt, {{"x", "x"}});
  Morphism i = morph(a, b, {{"x", "x"}});
  Pushout po = pushout(j, i);
  AlgPtr p = po.algebra;
  AlgPtr expected = DGAlgebra::Builder(nullptr, Regime::unbounded)
                        .gen("x", 1)
                        .gen("t", 0)
                        .gen("y", -1)
                        .diff("t", "x*t")
                        .diff("y", "y*x")
                        .build();
  add(r, "Q[x,t] (x) B = Q[x,y,t] with dt = xt, dy = yx", same_presentation(p, expected), true, "");
  const Element yt = p->parse("y*t");
  add(r, "d(yt) = 0", d(yt).is_zero(), true, "d(yt) = " + d(yt).str());

  Truncation t = Truncation::window(lo, hi, L);
  t.weights = {{"y", {1, 0}}, {"t", {0, 1}}};
  t.component = std::vector<int>{1, 1};
  r.truncation = t.str();
  FiniteComplex c = extract_complex(p, t, true);
  CohomologyReport h = cohomology(c);
  bool has_yt = false;
  if (h.representatives.count(-1)) {
    for (const auto& e : h.representatives.at(-1)) has_yt = has_yt || e == yt;
  }
  const bool in_basis = c.coords(-1, yt).has_value();
  const std::size_t dim = h.dims.count(-1) ? h.dims.at(-1) : 0;
  add(r, "weight (1,1) component: H^-1 has dimension >= 1 with representative yt", dim >= 1 && has_yt, in_basis,
      "dim H^-1 = " + std::to_string(dim) + " (" + c.mode() + ")");
  AlgPtr bb = DGAlgebra::Builder(nullptr, Regime::unbounded).gen("x", 1).gen("y", -1).diff("y", "y*x").build();
  Morphism kill = morph(p, bb, {{"x", "x"}, {"y", "y"}, {"t", "0"}});
  QuasiIsoResult qi = is_quasi_iso(kill, t);
  add(r, "t -> 0 is not a quasi-isomorphism", !qi.value, qi.conclusive && in_basis,
      qi.witness ? "killed class " + qi.witness->str() : qi.note);
}

// B = A[x0..x3] over A = Q[eps]/(eps^2), dx_i = eps x_{i+1}; C = A[u,v].
void example_no_cocycle_lift(VerificationReport& r, const ExampleOptions& o) {
  const int L = o.max_wordlen.value_or(6);
  const int L_min = 3;
  r.truncation = "word length<=" + std::to_string(L) + ", x0..x3";
  ArtinPtr a = truncated_poly("eps", 2);
  // x4 is present only as the value of dx3; it never enters a candidate.
  DGAlgebra::Builder bld(a, Regime::unbounded);
  bld.gen("u", -1).gen("v", -2).diff("u", "eps").diff("v", "eps*u");
  for (int k = 0; k <= 4; ++k) bld.gen("x" + std::to_string(k), k);
  for (int k = 0; k < 4; ++k) bld.diff("x" + std::to_string(k), "eps*x" + std::to_string(k + 1));
  AlgPtr cb = bld.build();
  add(r, "C (x)_A B: du = eps, dv = eps*u, dx_i = eps*x_(i+1)", d(cb->gen("v")) == cb->parse("eps*u"), true,
      "d(v) = " + d(cb->gen("v")).str());
  AlgPtr red = reduction(cb).algebra;
  add(r, "x0 is a nonzero cocycle of Q (x)_A B", d(red->gen("x0")).is_zero() && !red->gen("x0").is_zero(), true, "");

  const int i4 = cb->index("x4");
  const Element x0 = cb->gen("x0");
  std::vector<Element> cols;
  for (const auto& m : cb->basis(0, L)) {
    if (m[i4] != 0) continue;
    bool in_m = false;
    for (const std::string g : {"eps", "u", "v"}) in_m = in_m || m[cb->index(g)] != 0;
    if (!in_m) continue;
    cols.push_back(d(cb->monomial(m)));
  }
  ElementSystem sys(cols.size());
  sys.require(cols, -d(x0));
  const bool infeasible = !sys.solve();
  const Element chain = cb->parse("x0 - u*x1 - v*x2 + u*v*x3");
  add(r, "x0 has no cocycle lift in C (x)_A B within word length <= " + std::to_string(L), infeasible,
      infeasible && L >= L_min,
      std::to_string(cols.size()) + " correction monomials; the chain " + chain.str() + " leaves d = " + d(chain).str());
  r.notes.push_back("x4 appears only as the value of dx3 and is excluded from the candidates");
  if (L < L_min) r.notes.push_back("bound below " + std::to_string(L_min) + ": the correction chain is cut by the bound");
}

// R_A = A[x,y], dy = eps x, f_B: x -> x, y -> 0.
void example_no_idempotent_lift(VerificationReport& r, const ExampleOptions& o) {
  const int L = o.max_wordlen.value_or(4);
  r.truncation = "word length<=" + std::to_string(L);
  ArtinPtr a = truncated_poly("eps", 2);
  AlgPtr ra = DGAlgebra::Builder(a).gen("x", 0).gen("y", -1).diff("y", "eps*x").build();
  AlgPtr rb = reduction(ra).algebra;
  Morphism fb = morph(rb, rb, {{"x", "x"}, {"y", "0"}});
  add(r, "f_B: x -> x, y -> 0 is an idempotent chain map of R_B", is_idempotent(fb), true, "");

  // Lifts f = f0 + delta, delta in eps R_A.
  Morphism f0 = graded(ra, ra, {{"x", "x"}, {"y", "0"}});
  const Element eps = ra->parse("eps");
  struct Dir {
    int gen;
    Element value;
  };
  std::vector<Dir> dirs;
  for (int g : ra->nonbase_indices()) {
    for (const auto& m : ra->basis(ra->generators()[g].degree, L)) {
      if (!ra->is_base_monomial(m) && m[ra->index("eps")] == 0) {
        Element v = eps * ra->monomial(m);
        if (!v.is_zero()) dirs.push_back({g, v});
      }
    }
  }
  ElementSystem sys(dirs.size());
  Element defect_y = ra->zero();
  for (int g : ra->nonbase_indices()) {
    std::vector<Element> cols;
    for (const auto& dir : dirs) {
      std::vector<Element> vals(ra->size(), ra->zero());
      vals[dir.gen] = dir.value;
      Derivation der(ra, ra, 0, vals, f0);
      Element col = -der.apply(ra->diff(g));
      if (dir.gen == g) col += d(dir.value);
      cols.push_back(col);
    }
    Element rhs = f0.apply(ra->diff(g)) - d(f0.image(g));
    if (ra->generators()[g].name == "y") defect_y = rhs;
    sys.require(cols, rhs);
  }
  const bool none = !sys.solve();
  add(r, "no chain-map lift of f_B in the family f0 + eps*(word length <= " + std::to_string(L) + ")", none, none,
      std::to_string(dirs.size()) + " directions; defect on y: f(dy) - d f(y) = " + defect_y.str());
  add(r, "defect eps*x", defect_y == ra->parse("eps*x"), true, defect_y.str());
  r.notes.push_back("completeness: every lift changes f(y) by eps*R and d(eps*R^-1) lies in eps^2*R = 0, so the "
                    "defect eps*x cannot be cancelled for any bound");

  AlgPtr base = DGAlgebra::Builder(a).build();
  IdempotentLiftOptions loose;
  loose.check_triviality = false;
  loose.trunc = Truncation::window(-3, 0, L);
  try {
    lift_trivial_idempotent_dg(a, nullptr, morph(base, ra, {}), identity(base), fb, loose);
    add(r, "the idempotent-lifting pipeline stops at the defect", false, true, "a lift was produced");
  } catch (const Error& e) {
    const std::string msg = e.what();
    add(r, "the idempotent-lifting pipeline stops at the defect",
        e.kind() == "DefectNotSolvable" && msg.find("eps*x") != std::string::npos, true, msg);
  }
}

void example_minors(VerificationReport& r, const ExampleOptions& o) {
  const int L = o.max_wordlen.value_or(6);
  r.truncation = "perturbation support<=2";
  AlgPtr rr = DGAlgebra::Builder()
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
  CohomologyReport h = cohomology(extract_complex(rr, Truncation::window(-1, 0, std::max(L, 4)), true));
  add(r, "H^0(R) has dimension 4 (Q[x,y]/(x^2,y^2)) and H^-1(R) = 0", h.dims.at(0) == 4 && h.dims.at(-1) == 0, true,
      "dims " + std::to_string(h.dims.at(0)) + ", " + std::to_string(h.dims.at(-1)));

  AlgPtr p = DGAlgebra::Builder().gen("x", 0).gen("y", 0).build();
  std::vector<std::vector<Element>> g = {{p->parse("x^2"), p->parse("y"), p->zero()},
                                         {p->zero(), p->parse("x"), p->parse("y")}};
  std::vector<Element> ideal = {p->parse("x^3"), p->parse("x^2*y"), p->parse("y^2")};
  HilbertSchapsResult hs = hilbert_schaps_check(g, ideal, {"x^3", "x^2*y", "y^2 + eps"});
  add(r, "minors of G are (x^3, x^2*y, y^2)", hs.minors_match, true, join(hs.minors));
  bool entries_in_m = true;
  for (const auto& row : g) {
    for (const auto& e : row) {
      for (const auto& [m, c] : e.terms()) entries_in_m = entries_in_m && p->word_length(m) >= 1;
    }
  }
  add(r, "first-order minor perturbations lie in (x,y)", hs.perturbations_in_maximal_ideal && entries_in_m, entries_in_m,
      "rank " + std::to_string(hs.perturbation_rank) + "; cofactors are entries of G, all in (x,y)");
  add(r, "y^2 + eps is not_in_matrix_image", hs.verdict == HilbertSchapsVerdict::not_in_matrix_image, entries_in_m,
      verdict_name(hs.verdict) + "; first-order term " + join(hs.first_order));

  // The same deformation of H^0 is a strict deformation of the Koszul model.
  ArtinPtr a = truncated_poly("eps", 2);
  AlgPtr k = DGAlgebra::Builder().gen("x", 0).gen("y", 0).gen("a", -1).gen("b", -1).diff("a", "x^2").diff("b", "y^2").build();
  AlgPtr ka = change_base(k, a).algebra;
  Derivation xi = Derivation::from_map(ka, ka, 1, {{"b", ka->parse("eps")}});
  H0Deformation h0 = h0_compare(psi1_deform(k, a, xi));
  AlgPtr classical = DGAlgebra::Builder(a).gen("x", 0).gen("y", 0).rel("x^2").rel("y^2 + eps").build();
  add(r, "A[x,y]/(x^2, y^2 + eps) is H^0 of a flat strict deformation of the cofibrant model",
      same_ideal(h0.h0, classical) && h0.flat, h0.finite, "dim " + std::to_string(h0.dim_total));
}

void example_idempotent_lift(VerificationReport& r, const ExampleOptions& o) {
  const int L = o.max_wordlen.value_or(4);
  ArtinPtr a = truncated_poly("eps", 2);
  AlgPtr pa = DGAlgebra::Builder(a).gen("x", 0).build();
  AlgPtr ra = DGAlgebra::Builder(a)
                  .gen("x", 0)
                  .gen("y1", -1)
                  .gen("y2", -1)
                  .gen("z2", 0)
                  .diff("y1", "eps*z2")
                  .diff("y2", "z2")
                  .build();
  AlgPtr rb = reduction(ra).algebra;
  Morphism g = morph(pa, ra, {{"x", "x"}});
  Morphism fb = morph(rb, rb, {{"x", "x"}, {"y1", "y1"}, {"y2", "0"}, {"z2", "0"}});
  IdempotentLiftOptions opts;
  opts.trunc = Truncation::window(-3, 0, L);
  r.truncation = opts.trunc.str();
  IdempotentLift lift = lift_trivial_idempotent_dg(a, nullptr, g, identity(pa), fb, opts);
  for (const auto& c : lift.checks) add(r, c.claim, c.holds, true, c.detail);
  add(r, "lifted idempotent", true, true, lift.f.str());
}

void example_trivial_cofibration(VerificationReport& r, const ExampleOptions& o) {
  const int L = o.max_wordlen.value_or(4);
  ArtinPtr a = truncated_poly("eps", 2);
  AlgPtr p = DGAlgebra::Builder(a).build();
  AlgPtr qbar = DGAlgebra::Builder().gen("x", -2).gen("y", -1).gen("u", -1).gen("v", 0).diff("x", "y").diff("u", "v").build();
  Morphism fbar = make_morphism(DGAlgebra::Builder().build(), qbar, ImageMap{});
  Truncation t = Truncation::window(-3, 0, L);
  r.truncation = t.str();
  LiftedFactorization lf = lift_trivial_cofibration(p, fbar, t);
  for (const auto& c : lf.checks) add(r, c.claim, c.holds, true, c.detail);
  AlgPtr back = reduction(lf.middle).algebra;
  add(r, "the reduction of the lift equals the input generator by generator", same_presentation(back, qbar), true,
      serialize_algebra(lf.middle));
}

// f: Q[x] -> Q[d^-1], x -> 0.
void example_nonflat(VerificationReport& r, const ExampleOptions& o) {
  const int L = o.max_wordlen.value_or(6);
  r.truncation = "degree-0 part of Q[x] up to x^" + std::to_string(L);
  AlgPtr qx = DGAlgebra::Builder().gen("x", 0).build();
  AlgPtr k = DGAlgebra::Builder().gen("u", -1).diff("u", "1").build();
  Morphism f = morph(qx, k, {{"x", "0"}});
  add(r, "f: Q[x] -> Q[d^-1], x -> 0 is a chain map", true, true, f.str());

  // Contracting homotopy h(m) = u*m on the basis {1, u}.
  bool contractible = true;
  for (const Element& m : {k->one(), k->gen("u")}) {
    contractible = contractible && d(k->gen("u") * m) + k->gen("u") * d(m) == m;
  }
  add(r, "Q[d^-1] (x)_Q[x] M is a cone for every M, so f is a W-cofibration", contractible, true,
      "d h + h d = id for h = multiplication by d^-1");

  // (x) is free on the generator x; x * p(x) = 0 only for p = 0.
  std::vector<Vec> cols;
  std::vector<Element> basis;
  for (int e = 0; e < L; ++e) basis.push_back(qx->gen("x").pow(e));
  MonomialIndex idx;
  for (const auto& b : basis) idx.add(qx->gen("x") * b);
  for (const auto& b : basis) cols.push_back(idx.coords(qx->gen("x") * b));
  const bool injective = rank(Matrix::from_columns(cols, idx.size())) == basis.size();
  add(r, "(x) -> Q[x] is injective", injective, true, "rank " + std::to_string(basis.size()) + " on x^0..x^" +
                                                        std::to_string(L - 1));

  // After tensoring, (x) (x) Q[d^-1] is free of rank one on x (x) 1 and
  // x (x) 1 -> x * 1 = f(x) = 0.
  const Element image = f.apply(qx->gen("x"));
  add(r, "(x) (x) Q[d^-1] -> Q[d^-1] is not injective", image.is_zero() && !k->one().is_zero(), true,
      "x (x) 1 -> f(x) = " + image.str() + ", while x (x) 1 generates a free Q[d^-1]-module");
  add(r, "f is not flat", image.is_zero() && injective, true, "tensoring does not preserve the injection (x) -> Q[x]");
}

using ExampleFn = void (*)(VerificationReport&, const ExampleOptions&);

const std::map<std::string, ExampleFn>& examples() {
  static const std::map<std::string, ExampleFn> m = {
      {"ex2.6a", example_no_section},       {"ex2.6b", example_pushout_class},           {"ex2.7", example_no_cocycle_lift},
      {"ex5.2", example_no_idempotent_lift},         {"ex6.6", example_minors},             {"thm5.9-demo", example_idempotent_lift},
      {"cor5.13-demo", example_trivial_cofibration}, {"nonflat-wcof", example_nonflat},
  };
  return m;
}

// ---------------------------------------------------------------------------
// Suites

Rational small_q(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

Rational nonzero_q(std::mt19937_64& rng) {
  Rational q = small_q(rng);
  return sgn(q) == 0 ? Rational(1) : q;
}

Element random_element(const AlgPtr& a, int degree, int wordlen, std::mt19937_64& rng, int max_terms = 3) {
  auto basis = a->basis(degree, wordlen);
  Element e = a->zero();
  if (basis.empty()) return e;
  std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
  std::uniform_int_distribution<int> count(1, max_terms);
  const int n = count(rng);
  for (int i = 0; i < n; ++i) e += small_q(rng) * a->monomial(basis[pick(rng)]);
  return e;
}

enum class Outcome { pass, fail, invalid };

struct CheckOut {
  Outcome outcome = Outcome::pass;
  std::string message;
  std::string tag;
};

CheckOut pass(std::string tag = {}) { return {Outcome::pass, {}, std::move(tag)}; }
CheckOut fail(std::string msg) { return {Outcome::fail, std::move(msg), {}}; }

using Check = std::function<CheckOut(const std::vector<Element>&)>;

struct Trial {
  std::vector<Element> inputs;
  Check check;
  std::string label;
};

using TrialGen = std::function<Trial(std::mt19937_64&, int)>;

CheckOut guarded(const Check& c, const std::vector<Element>& in) {
  try {
    return c(in);
  } catch (const Error& e) {
    return {Outcome::invalid, e.what(), {}};
  }
}

// Greedy term deletion while the failure persists.
std::vector<Element> shrink(std::vector<Element> in, const Check& check) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t i = 0; i < in.size() && !progress; ++i) {
      for (const auto& [m, c] : in[i].terms()) {
        std::vector<Element> cand = in;
        cand[i] = in[i] - c * in[i].algebra()->monomial(m);
        if (guarded(check, cand).outcome == Outcome::fail) {
          in = std::move(cand);
          progress = true;
          break;
        }
      }
    }
  }
  return in;
}

void run_trials(VerificationReport& r, int trials, std::uint64_t seed, const TrialGen& gen,
                std::map<std::string, int>* tags = nullptr) {
  for (int k = 0; k < trials; ++k) {
    std::mt19937_64 rng(trial_seed(seed, static_cast<std::uint64_t>(k)));
    Trial t = gen(rng, k);
    CheckOut out = guarded(t.check, t.inputs);
    if (out.outcome == Outcome::pass) {
      ++r.passed;
      if (tags && !out.tag.empty()) ++(*tags)[out.tag];
      continue;
    }
    if (!r.counterexample) {
      std::vector<Element> small = out.outcome == Outcome::fail ? shrink(t.inputs, t.check) : t.inputs;
      r.counterexample = "trial " + std::to_string(k) + " (" + t.label + "): [" + join(small) + "]: " +
                         (out.outcome == Outcome::fail ? guarded(t.check, small).message : out.message);
    }
  }
  r.trials = trials;
}

int sign_of(int parity) { return parity % 2 == 0 ? 1 : -1; }

int deg_of(const Element& e) { return e.degree().value_or(0); }

void suite_koszul(VerificationReport& r, int trials, std::uint64_t seed) {
  AlgPtr neg = DGAlgebra::Builder().gen("x", 0).gen("y", -1).gen("z", -1).gen("w", -2).build();
  AlgPtr unb = DGAlgebra::Builder(nullptr, Regime::unbounded).gen("p", 1).gen("q", -1).gen("r", 2).gen("s", 0).build();
  Check check = [](const std::vector<Element>& in) {
    const Element &a = in[0], &b = in[1], &c = in[2];
    const int s = sign_of(deg_of(a) * deg_of(b));
    if (a * b != Rational(s) * (b * a)) return fail("ab != (-1)^{|a||b|} ba");
    if ((a * b) * c != a * (b * c)) return fail("(ab)c != a(bc)");
    if (deg_of(a) % 2 != 0 && !(a * a).is_zero()) return fail("odd square nonzero");
    return pass();
  };
  run_trials(r, trials, seed, [&](std::mt19937_64& rng, int k) {
    const AlgPtr& a = k % 2 == 0 ? neg : unb;
    std::uniform_int_distribution<int> deg = k % 2 == 0 ? std::uniform_int_distribution<int>(-3, 0)
                                                        : std::uniform_int_distribution<int>(-2, 2);
    std::vector<Element> in;
    for (int i = 0; i < 3; ++i) in.push_back(random_element(a, deg(rng), 3, rng));
    return Trial{in, check, a == neg ? "Q[x,y,z,w]" : "Q[p,q,r,s]"};
  });
  add(r, "graded commutativity, associativity and odd squares", r.passed == r.trials, true,
      std::to_string(r.passed) + "/" + std::to_string(r.trials));
}

void suite_leibniz(VerificationReport& r, int trials, std::uint64_t seed) {
  ArtinPtr a = truncated_poly("eps", 2);
  std::vector<AlgPtr> algs = {
      DGAlgebra::Builder()
          .gen("x", 0)
          .gen("y", 0)
          .gen("a", -1)
          .gen("b", -1)
          .gen("w", -2)
          .diff("a", "x^2")
          .diff("b", "y^2")
          .diff("w", "y^2*a - x^2*b")
          .build(),
      DGAlgebra::Builder(nullptr, Regime::unbounded).gen("x", 1).gen("y", -1).gen("t", 0).diff("y", "y*x").diff("t", "x*t").build(),
      DGAlgebra::Builder(a).gen("x", 0).gen("y", -1).gen("z", -2).diff("y", "eps*x").diff("z", "eps*y").build()};
  Check check = [](const std::vector<Element>& in) {
    const Element &u = in[0], &v = in[1];
    if (d(u * v) != d(u) * v + Rational(sign_of(deg_of(u))) * (u * d(v))) return fail("d(ab) != da b + (-1)^|a| a db");
    if (!d(d(u)).is_zero()) return fail("d^2 != 0");
    return pass();
  };
  run_trials(r, trials, seed, [&](std::mt19937_64& rng, int k) {
    const AlgPtr& alg = algs[k % algs.size()];
    std::uniform_int_distribution<int> deg(-2, alg->regime() == Regime::unbounded ? 1 : 0);
    return Trial{{random_element(alg, deg(rng), 3, rng), random_element(alg, deg(rng), 3, rng)}, check,
                 "algebra " + std::to_string(k % algs.size())};
  });
  add(r, "Leibniz rule and d^2 = 0", r.passed == r.trials, true, std::to_string(r.passed) + "/" + std::to_string(r.trials));
}

void suite_idempotent(VerificationReport& r, int trials, std::uint64_t seed) {
  ArtinPtr a = truncated_poly("eps", 2);
  AlgPtr base = DGAlgebra::Builder(a).build();
  AlgPtr p = DGAlgebra::Builder(a).gen("x", 0).gen("y", 0).build();
  AlgPtr q = DGAlgebra::Builder().gen("x", 0).gen("y", 0).build();
  Morphism i = make_morphism(base, p, ImageMap{});
  Morphism e = identity(base);
  const std::vector<Element> j = {base->parse("eps")};
  const Element eps = p->parse("eps");
  // inputs: e0(x), e0(y) over Q, then the eps-parts h_x, h_y over Q.
  Check check = [=](const std::vector<Element>& in) {
    Morphism e0 = make_graded_map(q, q, ImageMap{{"x", in[0]}, {"y", in[1]}});
    if (!is_idempotent(e0)) return CheckOut{Outcome::invalid, "reduction not idempotent", {}};
    Morphism g = make_graded_map(p, p, ImageMap{{"x", transport(in[0], p) + eps * transport(in[2], p)},
                                                {"y", transport(in[1], p) + eps * transport(in[3], p)}});
    Morphism f = lift_idempotent_graded(g, i, e, j);
    if (!is_idempotent(f)) return fail("f = 3g^2 - 2g^3 is not idempotent: " + f.str());
    for (const std::string n : {"x", "y"}) {
      const Element diff = f.image(n) - g.image(n);
      for (const auto& [m, c] : diff.terms()) {
        if (m[p->index("eps")] == 0) return fail("f differs from g outside eps*P on " + n);
      }
    }
    if (!same_on_generators(compose(f, i), compose(i, e))) return fail("f i != i e");
    return pass();
  };
  const std::vector<Names> coordinate = {{{"x", "x"}, {"y", "y"}}, {{"x", "0"}, {"y", "0"}},
                                         {{"x", "x"}, {"y", "0"}}, {{"x", "0"}, {"y", "y"}}};
  run_trials(r, trials, seed, [&](std::mt19937_64& rng, int) {
    // Conjugate a coordinate idempotent by a triangular automorphism.
    std::uniform_int_distribution<int> pick(0, 3);
    std::uniform_int_distribution<int> coin(0, 1);
    const Names& idem = coordinate[pick(rng)];
    const bool swap = coin(rng) == 1;
    const std::string s = swap ? "y" : "x";
    const std::string o = swap ? "x" : "y";
    Element poly = q->zero();
    const Element c = random_element(q, 0, 2, rng, 2);
    for (const auto& [m, coef] : c.terms()) {
      if (m[q->index(o)] == 0) poly += coef * q->monomial(m);
    }
    Morphism ph = make_graded_map(q, q, ImageMap{{s, q->gen(s)}, {o, q->gen(o) + poly}});
    Morphism ph_inv = make_graded_map(q, q, ImageMap{{s, q->gen(s)}, {o, q->gen(o) - poly}});
    Morphism e0 = compose(ph, compose(graded(q, q, idem), ph_inv));
    return Trial{{e0.image("x"), e0.image("y"), random_element(q, 0, 2, rng), random_element(q, 0, 2, rng)}, check,
                 "conjugated coordinate idempotent"};
  });
  add(r, "3g^2 - 2g^3 is idempotent, congruent to g modulo eps*P and compatible with i e", r.passed == r.trials, true,
      std::to_string(r.passed) + "/" + std::to_string(r.trials));
}

void suite_nakayama(VerificationReport& r, int trials, std::uint64_t seed) {
  struct Ring {
    ArtinPtr a;
    AlgPtr ra;
    std::string t;
  };
  std::vector<Ring> rings;
  for (auto [name, n] : std::vector<std::pair<std::string, int>>{{"eps", 2}, {"t", 3}}) {
    ArtinPtr a = truncated_poly(name, n);
    rings.push_back({a,
                     DGAlgebra::Builder(a).gen("x", 0).gen("y", -1).gen("z", -1).diff("y", name + "*x").build(),
                     name});
  }
  AlgPtr qx = DGAlgebra::Builder().gen("x", 0).build();
  const Truncation trunc = Truncation::window(-2, 0, 4);
  std::map<std::string, int> tags;
  auto make_check = [&](const Ring& ring) -> Check {
    return [=](const std::vector<Element>& in) {
      const AlgPtr& ra = ring.ra;
      const Element a = ra->gen(ring.t);
      const Element a2 = a * a;
      auto lift = [&](const Element& e) { return transport(e, ra); };
      auto scalar = [](const Element& e) {
        auto it = e.terms().find(Monomial(e.algebra()->size(), 0));
        return it == e.terms().end() ? Rational(0) : it->second;
      };
      const Rational c1 = scalar(in[0]);
      const Rational c2 = scalar(in[1]);
      const Element x = ra->gen("x"), y = ra->gen("y"), z = ra->gen("z");
      ImageMap ims{{"x", c1 * x + a * x * lift(in[2]) + a2 * lift(in[3])},
                   {"y", c1 * y + a * y * lift(in[2]) + a2 * (y * lift(in[4]) + z * lift(in[5])) + a * z * lift(in[6])},
                   {"z", c2 * z + a * z * lift(in[7]) + a2 * y * lift(in[8])}};
      Morphism f = make_morphism(ra, ra, ims);
      const bool reduced_iso = sgn(c1) != 0 && sgn(c2) != 0;
      if (reduced_iso) {
        // Right inverse by the nilpotent series psi <- psi - psi0 (f psi - id).
        Morphism psi0 = make_graded_map(ra, ra, ImageMap{{"x", Rational(1 / c1) * x}, {"y", Rational(1 / c1) * y}, {"z", Rational(1 / c2) * z}});
        Morphism psi = psi0;
        for (int k = 0; k <= ring.a->nilpotency_index() + 1; ++k) {
          ImageMap next;
          bool done = true;
          for (const std::string g : {"x", "y", "z"}) {
            Element err = f.apply(psi.image(g)) - ra->gen(g);
            done = done && err.is_zero();
            next.emplace(g, psi.image(g) - psi0.apply(err));
          }
          if (done) break;
          psi = make_graded_map(ra, ra, next);
        }
        if (!same_on_generators(compose(f, psi), identity(ra))) return fail("series inverse: f psi != id");
        if (!same_on_generators(compose(psi, f), identity(ra))) return fail("series inverse: psi f != id");
        if (chain_defect(psi)) return fail("series inverse is not a chain map");
      }
      NakayamaResult res = nakayama_check(f, trunc);
      if ((res.verdict == NakayamaVerdict::iso) != reduced_iso) {
        return fail("verdict " + verdict_name(res.verdict) + " but reduction iso = " + (reduced_iso ? "yes" : "no"));
      }
      if (res.reduced_iso != reduced_iso) return fail("reduced_iso disagrees with the linear parts");
      return pass(ring.t + (reduced_iso ? " iso" : " non-iso"));
    };
  };
  std::vector<Check> checks = {make_check(rings[0]), make_check(rings[1])};
  run_trials(
      r, trials, seed,
      [&](std::mt19937_64& rng, int k) {
        const Ring& ring = rings[k % 2];
        std::uniform_int_distribution<int> coin(0, 3);
        std::vector<Element> in;
        in.push_back(ring.ra->scalar(coin(rng) == 0 ? Rational(0) : nonzero_q(rng)));
        in.push_back(ring.ra->scalar(coin(rng) == 0 ? Rational(0) : nonzero_q(rng)));
        for (int i = 0; i < 7; ++i) in.push_back(random_element(qx, 0, 2, rng, 2));
        return Trial{in, checks[k % 2], "over " + ring.a->presentation()->relations().front().str() + " = 0"};
      },
      &tags);
  add(r, "iso <=> reduction iso, cross-checked by explicit series inverses", r.passed == r.trials, true,
      std::to_string(r.passed) + "/" + std::to_string(r.trials));
  std::string counts;
  for (const auto& [t, n] : tags) counts += (counts.empty() ? "" : ", ") + t + ": " + std::to_string(n);
  r.notes.push_back(counts);
}

void suite_killer(VerificationReport& r, int trials, std::uint64_t seed) {
  AlgPtr qxw = DGAlgebra::Builder().gen("x", 0).gen("w", 0).build();
  std::map<std::string, int> tags;
  run_trials(
      r, trials, seed,
      [&](std::mt19937_64& rng, int) {
        std::uniform_int_distribution<int> ea(1, 4);
        std::uniform_int_distribution<int> eb(1, 3);
        const int pa = ea(rng);
        const int pb = eb(rng);
        Check check = [=](const std::vector<Element>& in) {
          AlgPtr m = DGAlgebra::Builder()
                         .gen("x", 0)
                         .gen("w", 0)
                         .gen("y", -1)
                         .diff("y", transport(in[0], qxw))
                         .rel("x^" + std::to_string(pa))
                         .rel("w^" + std::to_string(pb))
                         .build();
          Extension k = adjoin(m, {NewGenerator{"u", -1, std::nullopt, "1"}});
          Truncation t = Truncation::window(-2, 0, 16);
          t.infer_weight = false;
          CohomologyReport h = cohomology(extract_complex(k.algebra, t, true));
          for (const auto& [n, dim] : h.dims) {
            if (dim != 0) return fail("H^" + std::to_string(n) + " = " + std::to_string(dim));
          }
          CohomologyReport hm = cohomology(extract_complex(m, t, true));
          std::size_t total = 0;
          for (const auto& [n, dim] : hm.dims) total += dim;
          return pass(total == 0 ? "M acyclic" : "M not acyclic");
        };
        return Trial{{random_element(qxw, 0, 3, rng, 3)}, check,
                     "M = Q[x,w,y]/(x^" + std::to_string(pa) + ", w^" + std::to_string(pb) + ")"};
      },
      &tags);
  add(r, "H(Q[d^-1] (x) M) = 0", r.passed == r.trials, true, std::to_string(r.passed) + "/" + std::to_string(r.trials));
  for (const auto& [t, n] : tags) r.notes.push_back(t + ": " + std::to_string(n));
}

void suite_mcgauge(VerificationReport& r, int trials, std::uint64_t seed) {
  AlgPtr s = DGAlgebra::Builder().gen("x", 0).gen("y", -1).gen("w", -2).diff("w", "x*y").build();
  struct Ring {
    ArtinPtr a;
    AlgPtr sa;
    std::string t;
  };
  std::vector<Ring> rings;
  for (auto [name, n] : std::vector<std::pair<std::string, int>>{{"eps", 2}, {"t", 3}}) {
    ArtinPtr a = truncated_poly(name, n);
    rings.push_back({a, change_base(s, a).algebra, name});
  }
  std::map<std::string, int> tags;
  auto derivation = [](const AlgPtr& sa, int degree, const std::vector<Element>& in, std::size_t off) {
    std::map<std::string, Element> v;
    const std::vector<std::string> gens = {"x", "y", "w"};
    for (std::size_t i = 0; i < 3; ++i) v.emplace(gens[i], in[off + i]);
    return Derivation::from_map(sa, sa, degree, v);
  };
  auto make_check = [&](const Ring& ring) -> Check {
    return [=](const std::vector<Element>& in) {
      const AlgPtr& sa = ring.sa;
      Derivation zero = Derivation::zero(sa, sa, 1);
      Derivation xi = gauge_transform(derivation(sa, 0, in, 0), zero, ring.a).xi;
      if (!mc_check(xi, ring.a).value) return fail("gauge orbit of 0 left the MC locus");
      Derivation theta = derivation(sa, 0, in, 3);
      GaugeResult g = gauge_transform(theta, xi, ring.a);
      if (!g.mc) return fail("gauge transform is not MC");
      if (!g.automorphism) return fail("exp(theta) exp(-theta) != id");
      if (!same_on_generators(compose(g.exp_theta, g.exp_minus_theta), identity(sa))) return fail("e^t e^-t != id");
      if (!ring.a->square_zero()) return pass(ring.t + " gauge");
      if (g.xi != xi - delta(theta)) return fail("first order gauge action != xi - delta theta");
      // MC <=> delta xi = 0 on a closed and on a random element.
      Derivation closed = delta(derivation(sa, 0, in, 6));
      Derivation any = derivation(sa, 1, in, 9);
      for (const Derivation& c : {closed, any}) {
        const bool mc = mc_check(c, ring.a).value;
        if (mc != delta(c).is_zero()) return fail("MC != (delta xi = 0) on " + c.str());
        if (mc != mc_check_bracket(c, ring.a).value) return fail("the two MC checks disagree");
      }
      if (!mc_check(closed, ring.a).value) return fail("delta theta is not MC");
      return pass(mc_check(any, ring.a).value ? "random xi MC" : "random xi not MC");
    };
  };
  std::vector<Check> checks = {make_check(rings[0]), make_check(rings[1])};
  run_trials(
      r, trials, seed,
      [&](std::mt19937_64& rng, int k) {
        const Ring& ring = rings[k % 2];
        const AlgPtr& sa = ring.sa;
        const Element a = sa->gen(ring.t);
        auto values = [&](int degree, std::vector<Element>& out) {
          for (const std::string g : {"x", "y", "w"}) {
            out.push_back(a * random_element(sa, sa->generators()[sa->index(g)].degree + degree, 2, rng, 2));
          }
        };
        std::vector<Element> in;
        values(0, in);
        values(0, in);
        if (ring.a->square_zero()) {
          values(0, in);
          values(1, in);
        }
        return Trial{in, checks[k % 2], "over " + ring.t};
      },
      &tags);
  add(r, "gauge transforms preserve MC; exp(theta) is an automorphism with inverse exp(-theta)", r.passed == r.trials, true,
      std::to_string(r.passed) + "/" + std::to_string(r.trials));
  const int closed = tags["random xi MC"] + tags["random xi not MC"];
  add(r, "over m^2 = 0: MC <=> delta xi = 0, both directions exercised",
      r.passed == r.trials && closed > 0 && tags["random xi not MC"] > 0, true,
      std::to_string(closed) + " square-zero trials; random xi: " + std::to_string(tags["random xi MC"]) +
          " MC with delta xi = 0, " + std::to_string(tags["random xi not MC"]) + " non-MC with delta xi != 0");
}

void suite_tower(VerificationReport& r, int trials, std::uint64_t seed) {
  Check check = [](const std::vector<Element>& in) {
    ArtinPtr a = ArtinRing::make(in[0].algebra());
    std::vector<Element> kernel;
    for (int i : a->presentation()->base_indices()) kernel.push_back(a->presentation()->gen(i));
    auto steps = small_extension_tower(a, kernel);
    if (steps.size() + 1 != a->dim()) return fail("tower length " + std::to_string(steps.size()));
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const auto& s = steps[k];
      if (s.total->dim() != s.quotient->dim() + 1) return fail("kernel not one-dimensional at step " + std::to_string(k));
      if (!s.total->in_socle(s.t)) return fail("kernel generator not annihilated by m");
      if (!d(s.t).is_zero()) return fail("kernel generator not a cocycle");
      if (k + 1 < steps.size() && steps[k + 1].total->dim() != s.quotient->dim()) return fail("steps do not chain");
    }
    if (!steps.empty() && steps.back().quotient->dim() != 1) return fail("tower does not end at Q");
    return pass();
  };
  run_trials(r, trials, seed, [&](std::mt19937_64& rng, int k) {
    std::uniform_int_distribution<int> e(2, 4);
    DGAlgebra::Builder b;
    std::string label;
    switch (k % 3) {
      case 0: {
        const int n = e(rng) + 1;
        b.base_gen("t", 0).rel("t^" + std::to_string(n));
        label = "Q[t]/(t^" + std::to_string(n) + ")";
        break;
      }
      case 1: {
        const int p = e(rng), q = e(rng);
        b.base_gen("s", 0).base_gen("t", 0).rel("s^" + std::to_string(p)).rel("t^" + std::to_string(q)).rel("s*t^2");
        label = "Q[s,t]/(s^" + std::to_string(p) + ", t^" + std::to_string(q) + ", s*t^2)";
        break;
      }
      default: {
        const int n = e(rng);
        std::uniform_int_distribution<int> kk(1, n - 1);
        const int j = kk(rng);
        b.base_gen("e", 0).base_gen("u", -1).rel("e^" + std::to_string(n)).diff("u", "e^" + std::to_string(j));
        label = "Q[e,u]/(e^" + std::to_string(n) + "), du = e^" + std::to_string(j);
      }
    }
    AlgPtr pres = b.build();
    return Trial{{pres->one()}, check, label};
  });
  add(r, "small extension towers: one-dimensional socle kernels, cocycles, ending at Q", r.passed == r.trials, true,
      std::to_string(r.passed) + "/" + std::to_string(r.trials));
}

using SuiteFn = void (*)(VerificationReport&, int, std::uint64_t);

const std::map<std::string, SuiteFn>& suites() {
  static const std::map<std::string, SuiteFn> m = {
      {"koszul", suite_koszul},   {"leibniz", suite_leibniz}, {"idempotent", suite_idempotent},
      {"nakayama", suite_nakayama}, {"killer", suite_killer}, {"mcgauge", suite_mcgauge},
      {"tower", suite_tower},
  };
  return m;
}

}  // namespace

std::string status_name(Status s) {
  switch (s) {
    case Status::verified:
      return "verified";
    case Status::refuted:
      return "refuted";
    default:
      return "inconclusive-truncation";
  }
}

int exit_code(Status s) {
  switch (s) {
    case Status::verified:
      return 0;
    case Status::refuted:
      return 2;
    default:
      return 3;
  }
}

json Evidence::to_json() const {
  return {{"claim", claim}, {"holds", holds}, {"certified", certified}, {"witness", witness}};
}

Evidence* VerificationReport::find(const std::string& claim) {
  for (auto& e : evidence) {
    if (e.claim.find(claim) != std::string::npos) return &e;
  }
  return nullptr;
}

json VerificationReport::to_json() const {
  json ev = json::array();
  for (const auto& e : evidence) ev.push_back(e.to_json());
  json out = {{"id", id},           {"kind", kind},     {"status", status_name(status)}, {"evidence", ev},
              {"truncation", truncation}, {"notes", notes}, {"wall_ms", wall_ms}};
  out["seed"] = seed ? json(*seed) : json(nullptr);
  if (kind == "suite") {
    out["trials"] = trials;
    out["passed"] = passed;
    out["counterexample"] = counterexample ? json(*counterexample) : json(nullptr);
  }
  return out;
}

const std::vector<std::string>& example_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [k, f] : examples()) v.push_back(k);
    return v;
  }();
  return ids;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [k, f] : suites()) v.push_back(k);
    return v;
  }();
  return ids;
}

VerificationReport run_example(const std::string& id, const ExampleOptions& opts) {
  auto it = examples().find(id);
  if (it == examples().end()) throw Error("UnknownExample", id);
  if (opts.max_wordlen && *opts.max_wordlen < 1) throw Error("InvalidTruncation", "max word length must be >= 1");
  VerificationReport r;
  r.id = id;
  r.kind = "example";
  const auto start = Clock::now();
  try {
    it->second(r, opts);
  } catch (const Error& e) {
    add(r, "pipeline completes", false, !truncation_error(e), e.what());
  }
  r.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  if (r.truncation.empty()) r.truncation = "default";
  finish(r);
  return r;
}

VerificationReport run_suite(const std::string& name, int trials, std::uint64_t seed) {
  auto it = suites().find(name);
  if (it == suites().end()) throw Error("UnknownSuite", name);
  if (trials < 1) throw Error("InvalidTrials", "trials must be >= 1");
  VerificationReport r;
  r.id = name;
  r.kind = "suite";
  r.seed = seed;
  r.truncation = "per-suite generators";
  const auto start = Clock::now();
  it->second(r, trials, seed);
  r.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  finish(r);
  if (r.passed != r.trials) r.status = Status::refuted;
  return r;
}

AlgPtr parse_algebra_file(const std::filesystem::path& path) { return load_algebra(path); }

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace dgdef
