#include "dgdef/idempotents.hpp"

#include <set>

#include "dgdef/derivation.hpp"
#include "dgdef/element_system.hpp"
#include "dgdef/errors.hpp"
#include "dgdef/format.hpp"

namespace dgdef {

using nlohmann::json;

namespace {

// Re-expresses f between algebras with the same generator names.
Morphism rebase(const Morphism& f, const AlgPtr& src, const AlgPtr& tgt, bool chain) {
  ImageMap ims;
  for (const auto& g : src->generators()) {
    if (g.base) continue;
    auto k = f.source()->find(g.name);
    if (!k) throw Error("ReductionMismatch", "no generator " + g.name + " in " + f.str());
    ims.emplace(g.name, transport(f.image(*k), tgt, true));
  }
  return chain ? make_morphism(src, tgt, ims) : make_graded_map(src, tgt, ims);
}

std::vector<Element> homogeneous_parts(const Element& x) {
  std::map<int, Terms> parts;
  const AlgPtr& a = x.algebra();
  for (const auto& [m, c] : x.terms()) parts[a->degree(m)].emplace(m, c);
  std::vector<Element> out;
  for (auto& [deg, t] : parts) out.push_back(Element::from_normal(a, std::move(t)));
  return out;
}

std::string fresh_name(const std::set<std::string>& taken, std::string name) {
  while (taken.count(name)) name += "'";
  return name;
}

bool has_base_part(const AlgPtr& a, const Monomial& m) {
  for (int i : a->base_indices()) {
    if (m[i] > 0) return true;
  }
  return false;
}

}  // namespace

bool is_idempotent(const Morphism& e) {
  if (e.source() != e.target()) return false;
  for (int i = 0; i < e.source()->size(); ++i) {
    if (e.apply(e.image(i)) != e.image(i)) return false;
  }
  return true;
}

Idempotent make_idempotent(const Morphism& e, const Truncation& t) {
  if (!is_idempotent(e)) throw Error("NotIdempotent", e.str());
  Idempotent out;
  out.map = e;
  auto q = is_quasi_iso(e, t);
  out.trivial = q.value && q.conclusive;
  out.truncation = t.str();
  return out;
}

json RetractionData::to_json() const {
  json gens = json::array();
  for (int i = 0; i < fixed->size(); ++i) {
    const auto& g = fixed->generators()[i];
    if (g.base) continue;
    json e = {{"name", g.name}, {"degree", g.degree}, {"include", include.image(i).str()}};
    if (!fixed->diff(i).is_zero()) e["d"] = fixed->diff(i).str();
    gens.push_back(e);
  }
  json proj = json::object();
  for (int i = 0; i < project.source()->size(); ++i) {
    const auto& g = project.source()->generators()[i];
    if (!g.base) proj[g.name] = project.image(i).str();
  }
  return {{"fixed", gens}, {"project", proj}};
}

RetractionData fixed_locus(const Morphism& e, const std::vector<FixedGenerator>& generators, int max_wordlen) {
  if (!is_idempotent(e)) throw Error("NotIdempotent", e.str());
  const AlgPtr& z = e.source();
  const int L = max_wordlen;
  DGAlgebra::Builder fb(z->base(), z->regime());
  ImageMap inc;
  for (const auto& g : generators) {
    Element x = transport(g.element, z);
    if (x.is_zero() || !x.is_homogeneous()) throw Error("NotFixed", g.name + " needs a nonzero homogeneous element");
    if (e.apply(x) != x) throw Error("NotFixed", x.str() + " is not fixed by the idempotent");
    fb.gen(g.name, *x.degree());
    inc.emplace(g.name, x);
  }
  AlgPtr f0 = fb.build();
  Morphism iota0 = make_graded_map(f0, z, inc);
  // Preimage under iota within word length L; iota must be injective there.
  std::map<int, std::vector<Element>> cand_cache;
  auto cands_of = [&](int deg) -> const std::vector<Element>& {
    auto it = cand_cache.find(deg);
    if (it != cand_cache.end()) return it->second;
    auto cs = candidates(f0, deg, L);
    ElementSystem inj(cs.size());
    inj.require(apply_all(iota0, cs), z->zero());
    if (!inj.kernel().empty()) {
      throw Error("FixedLocusNotFree", "the chosen generators satisfy a relation in degree " + std::to_string(deg));
    }
    return cand_cache.emplace(deg, std::move(cs)).first->second;
  };
  auto preimage = [&](const Element& x, int deg) -> Element {
    if (x.is_zero()) return f0->zero();
    const auto& cs = cands_of(deg);
    ElementSystem sys(cs.size());
    sys.require(apply_all(iota0, cs), x);
    auto sol = sys.solve();
    if (!sol) {
      throw Error("FixedLocusTruncation",
                  x.str() + " is not generated by the fixed generators within word length " + std::to_string(L));
    }
    return combine(f0, cs, *sol);
  };
  DGAlgebra::Builder fd(z->base(), z->regime());
  fd.label(z->label().empty() ? "" : z->label() + "^e");
  for (const auto& g : generators) fd.gen(g.name, f0->generators()[f0->index(g.name)].degree);
  for (const auto& g : generators) {
    const int deg = f0->generators()[f0->index(g.name)].degree;
    Element dx = d(inc.at(g.name));
    Element pre = preimage(dx, deg + 1);
    if (!pre.is_zero()) fd.diff(g.name, pre);
  }
  AlgPtr f = fd.build();
  ImageMap inc_f;
  for (const auto& [name, x] : inc) inc_f.emplace(name, x);
  Morphism iota = make_morphism(f, z, inc_f);
  ImageMap proj;
  for (int i = 0; i < z->size(); ++i) {
    const auto& g = z->generators()[i];
    if (g.base) continue;
    proj.emplace(g.name, transport(preimage(e.image(i), g.degree), f));
  }
  Morphism pi = make_morphism(z, f, proj);
  auto fail = [](const std::string& what) { throw Error("RetractionIdentityFailure", what); };
  if (!same_on_generators(compose(pi, iota), identity(f))) fail("p iota = id");
  if (!same_on_generators(compose(iota, pi), e)) fail("iota p = e");
  if (!same_on_generators(compose(pi, e), pi)) fail("p e = p");
  if (!same_on_generators(compose(e, iota), iota)) fail("e iota = iota");
  return {f, iota, pi};
}

RetractionData fixed_locus(const Morphism& e, int max_wordlen) {
  if (!is_idempotent(e)) throw Error("NotIdempotent", e.str());
  const AlgPtr& z = e.source();
  if (same_on_generators(e, identity(z))) return {z, identity(z), identity(z)};
  std::vector<FixedGenerator> kept;
  for (int i = 0; i < z->size(); ++i) {
    const auto& g = z->generators()[i];
    if (g.base) continue;
    const Element& x = e.image(i);
    if (x.is_zero()) continue;
    if (!kept.empty()) {
      DGAlgebra::Builder fb(z->base(), z->regime());
      ImageMap inc;
      for (const auto& k : kept) {
        fb.gen(k.name, *k.element.degree());
        inc.emplace(k.name, k.element);
      }
      AlgPtr f0 = fb.build();
      Morphism iota0 = make_graded_map(f0, z, inc);
      auto cs = candidates(f0, g.degree, max_wordlen);
      ElementSystem sys(cs.size());
      sys.require(apply_all(iota0, cs), x);
      if (sys.solve()) continue;
    }
    kept.push_back({g.name, x});
  }
  return fixed_locus(e, kept, max_wordlen);
}

bool in_extended_ideal(const Element& x, const std::vector<Element>& ideal) {
  if (x.is_zero()) return true;
  const AlgPtr& p = x.algebra();
  const int L = x.word_length();
  for (const auto& part : homogeneous_parts(x)) {
    const int deg = *part.degree();
    std::vector<Element> cols;
    for (const auto& j0 : ideal) {
      Element j = transport(j0, p);
      for (const auto& jp : homogeneous_parts(j)) {
        for (const auto& m : candidates(p, deg - *jp.degree(), L)) cols.push_back(jp * m);
      }
    }
    ElementSystem sys(cols.size());
    sys.require(cols, part);
    if (!sys.solve()) return false;
  }
  return true;
}

Morphism lift_idempotent_graded(const Morphism& g, const Morphism& i, const Morphism& e,
                                const std::vector<Element>& ideal) {
  const AlgPtr& p = g.source();
  const AlgPtr& a = i.source();
  if (g.target() != p || i.target() != p || e.source() != a || e.target() != a) {
    throw Error("MixedAlgebras", "expected g: P -> P, i: A -> P, e: A -> A");
  }
  if (!is_idempotent(e)) throw Error("NotIdempotent", "e is not idempotent: " + e.str());
  std::vector<Element> j;
  for (const auto& x : ideal) j.push_back(transport(x, a));
  for (std::size_t k = 0; k < j.size(); ++k) {
    for (std::size_t l = k; l < j.size(); ++l) {
      if (!(j[k] * j[l]).is_zero()) {
        throw Error("IdealNotSquareZero", "(" + j[k].str() + ")(" + j[l].str() + ") is nonzero");
      }
    }
  }
  for (const auto& x : j) {
    if (!in_extended_ideal(e.apply(x), j)) throw Error("IdealNotPreserved", "e(" + x.str() + ") leaves J");
  }
  for (int k = 0; k < a->size(); ++k) {
    if (g.apply(i.image(k)) != i.apply(e.image(k))) {
      throw Error("NotCompatible", "g i and i e differ on " + a->generators()[k].name);
    }
  }
  std::vector<Element> ij;
  for (const auto& x : j) ij.push_back(i.apply(x));
  ImageMap ims;
  for (int k = 0; k < p->size(); ++k) {
    const auto& gen = p->generators()[k];
    if (gen.base) continue;
    Element g1 = g.image(k);
    Element g2 = g.apply(g1);
    if (!in_extended_ideal(g2 - g1, ij)) {
      throw Error("NotAlmostIdempotent", "g^2 - g on " + gen.name + " is " + (g2 - g1).str());
    }
    Element g3 = g.apply(g2);
    ims.emplace(gen.name, Rational(3) * g2 - Rational(2) * g3);
  }
  Morphism f = make_graded_map(p, p, ims);
  if (g.chain_map() && !chain_defect(f)) f = Morphism(p, p, f.images(), true);
  if (!is_idempotent(f)) throw Error("InternalError", "3g^2 - 2g^3 is not idempotent");
  for (int k = 0; k < p->size(); ++k) {
    if (!in_extended_ideal(f.image(k) - g.image(k), ij)) throw Error("InternalError", "f differs from g modulo J");
  }
  for (int k = 0; k < a->size(); ++k) {
    if (f.apply(i.image(k)) != i.apply(e.image(k))) throw Error("InternalError", "f i differs from i e");
  }
  return f;
}

json CheckResult::to_json() const { return {{"claim", claim}, {"holds", holds}, {"detail", detail}}; }

json IdempotentLiftStep::to_json() const {
  return {{"t", t},
          {"t_degree", t_degree},
          {"graded_lift", graded_lift},
          {"idempotent_correction", corrected},
          {"psi", psi},
          {"psi_in_subcomplex", psi_in_subcomplex},
          {"psi_cocycle", psi_cocycle},
          {"h", h},
          {"word_length", word_length}};
}

bool IdempotentLift::all_hold() const {
  for (const auto& c : checks) {
    if (!c.holds) return false;
  }
  return !checks.empty();
}

json IdempotentLift::to_json() const {
  json st = json::array();
  for (const auto& s : steps) st.push_back(s.to_json());
  json ch = json::array();
  for (const auto& c : checks) ch.push_back(c.to_json());
  json ims = json::object();
  for (int i = 0; i < f.source()->size(); ++i) {
    const auto& g = f.source()->generators()[i];
    if (!g.base) ims[g.name] = f.image(i).str();
  }
  return {{"f", ims}, {"steps", st}, {"checks", ch}, {"all_hold", all_hold()}};
}

std::vector<Element> kernel_of_reduction(const ArtinPtr& a, const ArtinPtr& b) {
  const AlgPtr& pa = a->presentation();
  std::vector<Element> out;
  if (!b) {
    for (int i : pa->base_indices()) out.push_back(pa->gen(i));
    return out;
  }
  const AlgPtr& pb = b->presentation();
  Matrix m(b->dim(), a->dim());
  for (std::size_t k = 0; k < a->dim(); ++k) {
    Vec v = b->coords(transport(a->basis_element(k), pb, true));
    for (std::size_t r = 0; r < b->dim(); ++r) m.at(r, k) = v[r];
  }
  for (const auto& v : nullspace(m)) out.push_back(a->element(v));
  return out;
}

namespace {

ArtinPtr as_base(const ArtinPtr& r) { return (r && r->dim() > 1) ? r : nullptr; }

struct Level {
  ArtinPtr ring;
  AlgPtr p;
  AlgPtr r;
  Morphism g;
  Morphism e;
};

CheckResult check(const std::string& claim, bool holds, std::string detail = "") {
  return {claim, holds, std::move(detail)};
}

// Solves d Phi - Phi d = delta and r Phi + Phi r = Phi for a degree-0
// r-derivation Phi with values in t * R, vanishing on the generators from P.
std::optional<Derivation> solve_defect(const AlgPtr& rt, const AlgPtr& r0, const Morphism& r, const Element& t,
                                       const Derivation& delta, const std::set<std::string>& from_p, int L) {
  const int k = *t.degree();
  std::vector<std::pair<int, Element>> dirs;  // (generator, t * m)
  for (int x = 0; x < rt->size(); ++x) {
    const auto& g = rt->generators()[x];
    if (g.base || from_p.count(g.name)) continue;
    for (const auto& m : candidates(r0, g.degree - k, L)) {
      Element v = t * transport(m, rt);
      if (!v.is_zero()) dirs.emplace_back(x, v);
    }
  }
  std::vector<Derivation> phis;
  phis.reserve(dirs.size());
  for (const auto& [x, v] : dirs) {
    std::vector<Element> vals(rt->size(), rt->zero());
    vals[x] = v;
    phis.emplace_back(rt, rt, 0, std::move(vals), r);
  }
  ElementSystem sys(dirs.size());
  for (int x = 0; x < rt->size(); ++x) {
    if (rt->generators()[x].base) continue;
    const Element gx = rt->gen(x);
    const Element dx = d(gx);
    const Element rx = r.image(x);
    std::vector<Element> chain_cols;
    std::vector<Element> idem_cols;
    for (const auto& phi : phis) {
      const Element& px = phi.value(x);
      chain_cols.push_back(d(px) - phi.apply(dx));
      idem_cols.push_back(r.apply(px) + phi.apply(rx) - px);
    }
    sys.require(chain_cols, delta.value(x));
    sys.require(idem_cols, rt->zero());
  }
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  Derivation phi = Derivation::zero(rt, rt, 0, r);
  for (std::size_t u = 0; u < phis.size(); ++u) {
    if (sgn((*sol)[u]) != 0) phi = phi + phis[u].scaled((*sol)[u]);
  }
  return phi;
}

// delta / t as an element of the reduction r0.
Element divide_by(const Element& x, const Element& t, const AlgPtr& r0) {
  if (x.is_zero()) return r0->zero();
  const AlgPtr& rt = x.algebra();
  std::set<Monomial> parts;
  for (const auto& [m, c] : x.terms()) {
    Monomial stripped = m;
    for (int i : rt->base_indices()) stripped[i] = 0;
    parts.insert(stripped);
  }
  std::vector<Element> ms;
  std::vector<Element> cols;
  for (const auto& m : parts) {
    Element e = transport(rt->monomial(m), r0, true);
    ms.push_back(e);
    cols.push_back(t * rt->monomial(m));
  }
  ElementSystem sys(cols.size());
  sys.require(cols, x);
  auto sol = sys.solve();
  if (!sol) throw Error("InternalError", x.str() + " is not a multiple of " + t.str());
  return combine(r0, ms, *sol);
}

std::string images_str(const Morphism& f) {
  std::string out;
  for (int i = 0; i < f.source()->size(); ++i) {
    const auto& g = f.source()->generators()[i];
    if (g.base) continue;
    if (!out.empty()) out += ", ";
    out += g.name + " -> " + f.image(i).str();
  }
  return out;
}

}  // namespace

IdempotentLift lift_trivial_idempotent_dg(const ArtinPtr& a, const ArtinPtr& b, const Morphism& g_a,
                                          const Morphism& e_a, const Morphism& f_b,
                                          const IdempotentLiftOptions& opts) {
  const AlgPtr& pa = g_a.source();
  const AlgPtr& ra = g_a.target();
  const Truncation& tr = opts.trunc;
  if (pa->base() != a || ra->base() != a) throw Error("BaseMismatch", "g_A must live over A");
  if (!pa->graded_free_over_base() || !ra->graded_free_over_base()) {
    throw Error("NotFlatCertificate", "P_A and R_A must be graded-free over A");
  }
  if (!semifree_order(g_a)) throw Error("NotSemifree", "g_A carries no semifree certificate");
  if (e_a.source() != pa || e_a.target() != pa) throw Error("MixedAlgebras", "e_A must be an endomorphism of P_A");
  if (auto dfx = chain_defect(e_a)) throw ChainMapFailure(dfx->first, dfx->second.str());
  if (!is_idempotent(e_a)) throw Error("NotIdempotent", "e_A: " + e_a.str());
  {
    auto q = is_quasi_iso(e_a, tr);
    if (!(q.value && q.conclusive)) throw Error("NotTrivialIdempotent", "e_A is not a weak equivalence: " + q.note);
  }
  AlgPtr rb = change_base(ra, as_base(b)).algebra;
  AlgPtr pb = change_base(pa, as_base(b)).algebra;
  Morphism fb = rebase(f_b, rb, rb, true);
  if (!is_idempotent(fb)) throw Error("NotIdempotent", "f_B: " + fb.str());
  if (opts.check_triviality) {
    auto q = is_quasi_iso(fb, tr);
    if (!(q.value && q.conclusive)) throw Error("NotTrivialIdempotent", "f_B is not a weak equivalence: " + q.note);
  }
  {
    Morphism gb = change_base(g_a, pb, rb);
    Morphism eb = change_base(e_a, pb, pb);
    for (int i = 0; i < pb->size(); ++i) {
      if (pb->generators()[i].base) continue;
      if (fb.apply(gb.image(i)) != gb.apply(eb.image(i))) {
        throw Error("NotCompatible", "f_B g_B and g_B e_B differ on " + pb->generators()[i].name);
      }
    }
  }
  std::set<std::string> from_p;
  for (const auto& g : pa->generators()) {
    if (!g.base) from_p.insert(g.name);
  }

  auto tower = small_extension_tower(a, kernel_of_reduction(a, b));
  std::vector<Level> levels;
  levels.push_back({a, pa, ra, g_a, e_a});
  for (const auto& step : tower) {
    Level lv;
    lv.ring = as_base(step.quotient);
    lv.p = change_base(pa, lv.ring).algebra;
    lv.r = change_base(ra, lv.ring).algebra;
    lv.g = change_base(g_a, lv.p, lv.r);
    lv.e = change_base(e_a, lv.p, lv.p);
    levels.push_back(lv);
  }
  AlgPtr r0 = reduction(ra).algebra;

  IdempotentLift out;
  Morphism cur = rebase(fb, levels.back().r, levels.back().r, true);
  for (int k = static_cast<int>(tower.size()) - 1; k >= 0; --k) {
    const Level& top = levels[k];
    const Level& bot = levels[k + 1];
    const Element t = transport(tower[k].t, top.r);
    IdempotentLiftStep step;
    step.t = t.str();
    step.t_degree = tower[k].degree;
    Morphism proj = change_base(identity(top.r), top.r, bot.r);
    LiftingProblem pr =
        LiftingProblem::make(top.g, proj, compose(top.g, top.e), compose(cur, proj));
    Morphism r = graded_lift(pr, tr.word_length_max);
    step.graded_lift = images_str(r);
    r = lift_idempotent_graded(r, top.g, top.e, {transport(tower[k].t, top.p)});
    step.corrected = images_str(r);

    std::vector<Element> dv(top.r->size(), top.r->zero());
    std::string psi;
    for (int x = 0; x < top.r->size(); ++x) {
      if (top.r->generators()[x].base) continue;
      dv[x] = d(r.image(x)) - r.apply(d(top.r->gen(x)));
      Element q = divide_by(dv[x], t, r0);
      if (!q.is_zero()) {
        if (!psi.empty()) psi += ", ";
        psi += top.r->generators()[x].name + " -> " + q.str();
      }
    }
    step.psi = psi.empty() ? "0" : psi;
    Derivation delta(top.r, top.r, 1, dv, r);
    step.psi_cocycle = true;
    step.psi_in_subcomplex = true;
    for (int x = 0; x < top.r->size(); ++x) {
      if (top.r->generators()[x].base) continue;
      if (!(d(delta.value(x)) + delta.apply(d(top.r->gen(x)))).is_zero()) step.psi_cocycle = false;
      if (r.apply(delta.value(x)) + delta.apply(r.image(x)) != delta.value(x)) step.psi_in_subcomplex = false;
    }
    int L = tr.word_length_max;
    auto phi = solve_defect(top.r, r0, r, t, delta, from_p, L);
    if (!phi && opts.retry_doubled) {
      L *= 2;
      phi = solve_defect(top.r, r0, r, t, delta, from_p, L);
    }
    if (!phi) {
      std::string defect;
      for (int x = 0; x < top.r->size(); ++x) {
        if (dv[x].is_zero()) continue;
        if (!defect.empty()) defect += ", ";
        defect += "on " + top.r->generators()[x].name + ": r d - d r = " + (-dv[x]).str();
      }
      throw Error("DefectNotSolvable", "no h with dh - hd = psi and fh + hf = h within word length " +
                                           std::to_string(L) + " (" + defect + ")");
    }
    step.word_length = L;
    step.h = phi->str();
    ImageMap ims;
    for (int x = 0; x < top.r->size(); ++x) {
      const auto& g = top.r->generators()[x];
      if (!g.base) ims.emplace(g.name, r.image(x) - phi->value(x));
    }
    cur = make_morphism(top.r, top.r, ims);
    out.steps.push_back(step);
  }
  if (tower.empty()) cur = rebase(fb, ra, ra, true);
  out.f = cur;

  const Morphism& f = out.f;
  auto dfx = chain_defect(f);
  out.checks.push_back(check("chain map", !dfx, dfx ? dfx->first + ": " + dfx->second.str() : "d f = f d on generators"));
  out.checks.push_back(check("idempotent", is_idempotent(f), "f f = f on generators"));
  bool red = same_on_generators(change_base(f, rb, rb), fb);
  out.checks.push_back(check("reduction", red, "f ⊗ B = f_B on generators"));
  bool compat = true;
  for (int i = 0; i < pa->size(); ++i) {
    if (pa->generators()[i].base) continue;
    if (f.apply(g_a.image(i)) != g_a.apply(e_a.image(i))) compat = false;
  }
  out.checks.push_back(check("compatibility", compat, "f g_A = g_A e_A on generators"));
  NakayamaResult nk = nakayama_check(f, tr);
  bool weq = nk.verdict != NakayamaVerdict::neither;
  out.checks.push_back(check("Nakayama weak equivalence", weq, verdict_name(nk.verdict) + "; " + nk.note));
  return out;
}

// ---------------------------------------------------------------------------
// Factorization lifting.

json LiftedFactorization::to_json() const {
  json gens = json::array();
  for (int i = 0; i < middle->size(); ++i) {
    const auto& g = middle->generators()[i];
    if (g.base) continue;
    json e = {{"name", g.name}, {"degree", g.degree}};
    if (!middle->diff(i).is_zero()) e["d"] = middle->diff(i).str();
    if (right) e["right"] = right->image(i).str();
    gens.push_back(e);
  }
  json ch = json::array();
  for (const auto& c : checks) ch.push_back(c.to_json());
  return {{"middle", gens},
          {"ambient_generators", ambient->size()},
          {"retraction", retraction.to_json()},
          {"idempotent", idempotent.to_json()},
          {"checks", ch},
          {"all_hold", all_hold()}};
}

bool LiftedFactorization::all_hold() const {
  for (const auto& c : checks) {
    if (!c.holds) return false;
  }
  return !checks.empty() && idempotent.all_hold();
}

namespace {

// D over A with maps to Qbar (over Q) and to M (over A) agreeing in Mbar.
struct Ambient {
  AlgPtr p;
  AlgPtr qbar;
  std::optional<AlgPtr> m;
  std::optional<Morphism> rbar;  // Qbar -> Mbar
  AlgPtr mbar;
  std::vector<NewGenerator> added;
  std::map<std::string, Element> to_q;
  std::map<std::string, Element> to_m;
  AlgPtr d;
  Morphism inc;
  Morphism phi_q;
  std::optional<Morphism> phi_m;

  void rebuild() {
    Extension ext = adjoin(p, added);
    d = ext.algebra;
    inc = ext.inclusion;
    ImageMap iq;
    ImageMap im;
    for (const auto& g : d->generators()) {
      if (g.base) continue;
      iq.emplace(g.name, to_q.at(g.name));
      if (m) im.emplace(g.name, to_m.at(g.name));
    }
    phi_q = make_morphism(d, qbar, iq);
    if (m) phi_m = make_morphism(d, *m, im);
  }
};

LiftedFactorization lift_impl(const AlgPtr& p, const std::optional<Morphism>& f, const Morphism& left_in,
                              const std::optional<Morphism>& right_in, FactorizationKind kind, const Truncation& t) {
  const ArtinPtr& a = p->base();
  if (!a) throw Error("BaseMismatch", "P must live over a DG-Artin ring");
  if (!p->graded_free_over_base()) throw Error("NotFlatCertificate", "P is not graded-free over A");
  if (f && (f->source() != p || f->target()->base() != a || !f->target()->graded_free_over_base())) {
    throw Error("NotFlatCertificate", "f must map P to a graded-free algebra over A");
  }
  const AlgPtr& qbar = left_in.target();
  if (qbar->base()) throw Error("BaseMismatch", "the given factorization must live over the residue field");
  const int L = t.word_length_max;
  AlgPtr pbar = reduction(p).algebra;
  Morphism left = rebase(left_in, pbar, qbar, true);
  auto order = semifree_order(left);
  if (!order) throw Error("NotSemifree", "the given left leg carries no semifree certificate");

  Ambient amb;
  amb.p = p;
  amb.qbar = qbar;
  if (f) {
    amb.m = f->target();
    amb.mbar = reduction(f->target()).algebra;
    amb.rbar = rebase(*right_in, qbar, amb.mbar, true);
    Morphism fbar = change_base(*f, pbar, amb.mbar);
    if (!same_on_generators(compose(*amb.rbar, left), fbar)) {
      throw Error("FactorizationMismatch", "the given legs do not compose to f ⊗ Q");
    }
    MorphismClass cr = classify(*amb.rbar, t);
    if (kind == FactorizationKind::C_FW && !cr.trivial_fibration()) {
      throw Error("KindMismatch", "the given right leg is not a trivial fibration");
    }
    if (kind == FactorizationKind::CW_F && !cr.fibration) throw Error("KindMismatch", "the given right leg is not a fibration");
  }
  if (kind == FactorizationKind::CW_F) {
    MorphismClass cl = classify(left, t);
    if (!cl.trivial_cofibration()) throw Error("KindMismatch", "the given left leg is not a trivial cofibration");
  }
  for (const auto& g : p->generators()) {
    if (g.base) continue;
    amb.to_q.emplace(g.name, left.image(g.name));
    if (f) amb.to_m.emplace(g.name, f->image(g.name));
  }
  std::set<std::string> taken;
  for (const auto& g : p->generators()) taken.insert(g.name);
  for (const auto& g : qbar->generators()) taken.insert(g.name);
  if (f) {
    for (const auto& g : f->target()->generators()) taken.insert(g.name);
  }
  amb.rebuild();

  if (kind == FactorizationKind::C_FW) {
    // Copies of the semifree generators of Qbar, with differentials lifted to
    // cycles of D over the pullback.
    for (int j : *order) {
      const auto& y = qbar->generators()[j];
      const int n = y.degree;
      Element dy = qbar->diff(j);
      Element z0 = transport(dy, amb.d);
      auto ws = candidates(amb.d, n + 1, L);
      std::vector<Element> dms;
      Element m0;
      if (f) {
        m0 = transport(amb.rbar->image(j), *amb.m);
        for (const auto& mono : (*amb.m)->basis(n, L)) {
          if (has_base_part(*amb.m, mono)) dms.push_back((*amb.m)->monomial(mono));
        }
      }
      const std::size_t nw = ws.size();
      ElementSystem sys(nw + dms.size());
      std::vector<Element> cd;
      std::vector<Element> cq;
      std::vector<Element> cm;
      for (const auto& w : ws) {
        cd.push_back(d(w));
        cq.push_back(amb.phi_q.apply(w));
        if (f) cm.push_back(amb.phi_m->apply(w));
      }
      for (const auto& x : dms) {
        cd.push_back(amb.d->zero());
        cq.push_back(qbar->zero());
        cm.push_back(-d(x));
      }
      sys.require(cd, -d(z0));
      sys.require(cq, dy - amb.phi_q.apply(z0));
      if (f) sys.require(cm, d(m0) - amb.phi_m->apply(z0));
      auto sol = sys.solve();
      if (!sol) {
        throw Error("ObstructionNotExact", "no cycle of D lifts d" + y.name + " = " + dy.str() +
                                               " within word length " + std::to_string(L));
      }
      Vec wv(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(nw));
      Vec mv(sol->begin() + static_cast<std::ptrdiff_t>(nw), sol->end());
      Element z = z0 + combine(amb.d, ws, wv);
      amb.added.push_back(NewGenerator{y.name, n, z, ""});
      amb.to_q.emplace(y.name, qbar->gen(j));
      if (f) amb.to_m.emplace(y.name, m0 + combine(*amb.m, dms, mv));
      amb.rebuild();
    }
  } else {
    // Contractible pairs until D maps onto the pullback in negative degrees.
    int counter = 0;
    for (int n = -1; n >= t.lo; --n) {
      auto qs = candidates(qbar, n, L);
      std::vector<Element> ms;
      std::vector<Element> cols;
      for (const auto& q : qs) cols.push_back(f ? amb.rbar->apply(q) : Element());
      if (f) {
        ms = candidates(*amb.m, n, L);
        for (const auto& x : ms) cols.push_back(-transport(x, amb.mbar, true));
      }
      std::vector<std::pair<Element, Element>> fiber;
      if (f) {
        ElementSystem fp(cols.size());
        fp.require(cols, amb.mbar->zero());
        for (const auto& v : fp.kernel()) {
          Vec vq(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(qs.size()));
          Vec vm(v.begin() + static_cast<std::ptrdiff_t>(qs.size()), v.end());
          fiber.emplace_back(combine(qbar, qs, vq), combine(*amb.m, ms, vm));
        }
      } else {
        for (const auto& q : qs) fiber.emplace_back(q, Element());
      }
      // Membership in the image of D_n, recomputed after every new pair.
      auto in_image = [&](const Element& x, const Element& y) {
        MonomialIndex qi;
        MonomialIndex mi;
        std::vector<std::pair<Element, Element>> images;
        for (const auto& c : candidates(amb.d, n, L)) {
          images.emplace_back(amb.phi_q.apply(c), f ? amb.phi_m->apply(c) : Element());
        }
        images.emplace_back(x, y);
        for (const auto& [ix, iy] : images) {
          qi.add(ix);
          if (f) mi.add(iy);
        }
        std::vector<Vec> cols;
        for (const auto& [ix, iy] : images) {
          Vec v = qi.coords(ix);
          if (f) {
            Vec w = mi.coords(iy);
            v.insert(v.end(), w.begin(), w.end());
          }
          cols.push_back(std::move(v));
        }
        SpanBuilder span(cols.back().size());
        for (std::size_t k = 0; k + 1 < cols.size(); ++k) span.add(cols[k]);
        return span.contains(cols.back());
      };
      for (const auto& [x, y] : fiber) {
        if (in_image(x, y)) continue;
        ++counter;
        std::string u = fresh_name(taken, "u" + std::to_string(counter));
        taken.insert(u);
        std::string v = fresh_name(taken, "v" + std::to_string(counter));
        taken.insert(v);
        amb.added.push_back(NewGenerator{v, n + 1, std::nullopt, ""});
        amb.added.push_back(NewGenerator{u, n, std::nullopt, v});
        amb.to_q.emplace(u, x);
        amb.to_q.emplace(v, d(x));
        if (f) {
          amb.to_m.emplace(u, y);
          amb.to_m.emplace(v, d(y));
        }
        amb.rebuild();
      }
    }
  }

  // Section of the trivial fibration Dbar -> Qbar under Pbar.
  AlgPtr dbar = reduction(amb.d).algebra;
  Morphism pbar_map = rebase(amb.phi_q, dbar, qbar, true);
  MorphismClass cp = classify(pbar_map, t);
  if (!cp.trivial_fibration()) {
    throw Error("NotTrivialFibration", "D ⊗ Q -> Qbar is not certified a trivial fibration within " + t.str());
  }
  Morphism top = rebase(identity(pbar), pbar, dbar, true);
  LiftingProblem pr = LiftingProblem::make(left, pbar_map, top, identity(qbar));
  auto s = dg_lift(pr, t);
  if (!s) throw Error("ObstructionNotExact", "no section of D ⊗ Q -> Qbar within " + t.str());
  Morphism ebar = compose(*s, pbar_map);

  IdempotentLiftOptions io;
  io.trunc = t;
  LiftedFactorization out;
  out.ambient = amb.d;
  out.idempotent = lift_trivial_idempotent_dg(a, nullptr, amb.inc, identity(p), ebar, io);
  const Morphism& e = out.idempotent.f;

  std::vector<FixedGenerator> gens;
  for (const auto& g : p->generators()) {
    if (!g.base) gens.push_back({g.name, amb.d->gen(g.name)});
  }
  for (int j : *order) {
    const auto& y = qbar->generators()[j];
    gens.push_back({y.name, e.apply(transport(s->image(y.name), amb.d))});
  }
  out.retraction = fixed_locus(e, gens, L);
  out.middle = out.retraction.fixed;
  ImageMap li;
  for (const auto& g : p->generators()) {
    if (!g.base) li.emplace(g.name, out.middle->gen(g.name));
  }
  out.left = make_morphism(p, out.middle, li);
  if (f) out.right = compose(*amb.phi_m, out.retraction.include);

  AlgPtr qred = reduction(out.middle).algebra;
  out.checks.push_back(check("reduction of the middle", same_presentation(qred, qbar),
                             "middle ⊗ Q equals the given middle generator by generator"));
  Morphism left_red = change_base(out.left, pbar, qred);
  bool lr = true;
  for (int i = 0; i < pbar->size(); ++i) {
    if (pbar->generators()[i].base) continue;
    if (transport(left_red.image(i), qbar, true) != left.image(i)) lr = false;
  }
  out.checks.push_back(check("reduction of the left leg", lr, "left ⊗ Q equals the given left leg"));
  ReductionCofibration rc = reduction_cofibration_check(out.left, t);
  out.checks.push_back(check("left leg is a cofibration", rc.value, rc.certificate));
  if (kind == FactorizationKind::CW_F) {
    auto q = is_quasi_iso(out.left, t);
    out.checks.push_back(check("left leg is a weak equivalence", q.value && q.conclusive, q.note));
  }
  if (f) {
    bool rr = true;
    Morphism right_red = change_base(*out.right, qred, amb.mbar);
    for (int i = 0; i < qred->size(); ++i) {
      const auto& g = qred->generators()[i];
      if (!g.base && right_red.image(i) != transport(amb.rbar->image(g.name), amb.mbar)) rr = false;
    }
    out.checks.push_back(check("reduction of the right leg", rr, "right ⊗ Q equals the given right leg"));
    out.checks.push_back(check("factorization", same_on_generators(compose(*out.right, out.left), *f),
                               "right left = f on generators"));
    MorphismClass cr = classify(*out.right, t);
    out.checks.push_back(check("right leg is a fibration", cr.fibration, cr.truncation));
    if (kind == FactorizationKind::C_FW) {
      out.checks.push_back(check("right leg is a weak equivalence", cr.weak_equivalence, cr.truncation));
    }
  }
  return out;
}

}  // namespace

LiftedFactorization lift_factorization(const Morphism& f, const Factorization& given, FactorizationKind kind,
                                       const Truncation& t) {
  if (given.kind != kind) throw Error("KindMismatch", "the given factorization is of kind " + kind_name(given.kind));
  return lift_impl(f.source(), f, given.left, given.right, kind, t);
}

LiftedFactorization lift_trivial_cofibration(const AlgPtr& p, const Morphism& fbar, const Truncation& t) {
  return lift_impl(p, std::nullopt, fbar, std::nullopt, FactorizationKind::CW_F, t);
}

json ReductionCofibration::to_json() const {
  return {{"value", value}, {"reduced", reduced.to_json()}, {"certificate", certificate}};
}

ReductionCofibration reduction_cofibration_check(const Morphism& f, const Truncation& t) {
  const AlgPtr& s = f.source();
  const AlgPtr& q = f.target();
  if (s->base() != q->base()) throw Error("BaseMismatch", "source and target live over different rings");
  if (!s->graded_free_over_base() || !q->graded_free_over_base()) {
    throw Error("NotFlatCertificate", "source and target must be graded-free over the base");
  }
  AlgPtr sr = reduction(s).algebra;
  AlgPtr qr = reduction(q).algebra;
  Morphism fr = change_base(f, sr, qr);
  ReductionCofibration out;
  out.reduced = classify(fr, t);
  out.value = out.reduced.cofibration_certificate;
  out.certificate = out.value ? "reduction is a semifree extension"
                              : "reduction carries no semifree certificate";
  return out;
}

}  // namespace dgdef
