#include "dgdef/model.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "dgdef/artin.hpp"
#include "dgdef/element_system.hpp"
#include "dgdef/errors.hpp"

namespace dgdef {

using nlohmann::json;

json MorphismClass::to_json() const {
  return {{"fibration", fibration},
          {"surjective_all_degrees", surjective_all_degrees},
          {"weak_equivalence", weak_equivalence},
          {"semifree_extension", semifree_extension},
          {"cofibration_certificate", cofibration_certificate},
          {"truncation", truncation},
          {"notes", notes}};
}

std::string kind_name(FactorizationKind k) { return k == FactorizationKind::C_FW ? "C_FW" : "CW_F"; }

json Factorization::to_json() const {
  json gens = json::array();
  for (int i = 0; i < middle->size(); ++i) {
    const auto& g = middle->generators()[i];
    if (g.base) continue;
    json e = {{"name", g.name}, {"degree", g.degree}};
    if (!middle->diff(i).is_zero()) e["d"] = middle->diff(i).str();
    e["right"] = right.image(i).str();
    gens.push_back(e);
  }
  return {{"kind", kind_name(kind)}, {"middle", gens}, {"window", {window_lo, window_hi}}, {"notes", notes}};
}

namespace {

bool uses_only(const Element& e, const std::vector<bool>& allowed) {
  for (const auto& [m, c] : e.terms()) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] != 0 && !allowed[i]) return false;
    }
  }
  return true;
}

std::optional<Monomial> missed_monomial(const Morphism& f, int degree, int max_wordlen) {
  const AlgPtr& tgt = f.target();
  auto tb = tgt->basis(degree, max_wordlen);
  if (tb.empty()) return std::nullopt;
  auto images = apply_all(f, candidates(f.source(), degree, max_wordlen));
  MonomialIndex idx;
  for (const auto& m : tb) idx.slot(m);
  for (const auto& im : images) idx.add(im);
  SpanBuilder span(idx.size());
  for (const auto& im : images) span.add(idx.coords(im));
  for (const auto& m : tb) {
    if (!span.contains(idx.coords(tgt->monomial(m)))) return m;
  }
  return std::nullopt;
}

std::string fresh_name(const std::set<std::string>& taken, std::string name) {
  while (taken.count(name)) name += "'";
  return name;
}

std::set<std::string> names_of(const AlgPtr& a) {
  std::set<std::string> out;
  for (const auto& g : a->generators()) out.insert(g.name);
  return out;
}

}  // namespace

std::optional<std::vector<int>> semifree_order(const Morphism& f) {
  const AlgPtr& s = f.source();
  const AlgPtr& q = f.target();
  if (s->base() != q->base()) return std::nullopt;
  std::vector<bool> known(q->size(), false);
  for (int i = 0; i < s->size(); ++i) {
    const auto& g = s->generators()[i];
    auto j = q->find(g.name);
    if (!j || q->generators()[*j].degree != g.degree || q->generators()[*j].base != g.base) return std::nullopt;
    if (f.image(i) != q->gen(*j)) return std::nullopt;
    if (transport(s->diff(i), q) != q->diff(*j)) return std::nullopt;
    known[*j] = true;
  }
  for (int j : q->base_indices()) {
    if (!known[j]) return std::nullopt;
  }
  for (const auto& r : q->relations()) {
    if (!uses_only(r, known)) return std::nullopt;
    if (!transport(r, s).is_zero()) return std::nullopt;
  }
  std::vector<int> pending;
  for (int j = 0; j < q->size(); ++j) {
    if (!known[j]) pending.push_back(j);
  }
  std::vector<int> order;
  while (!pending.empty()) {
    std::vector<int> rest;
    for (int j : pending) {
      if (uses_only(q->diff(j), known)) {
        order.push_back(j);
        known[j] = true;
      } else {
        rest.push_back(j);
      }
    }
    if (rest.size() == pending.size()) return std::nullopt;
    pending = std::move(rest);
  }
  return order;
}

bool surjective_in_degree(const Morphism& f, int degree, int max_wordlen) {
  return !missed_monomial(f, degree, max_wordlen);
}

MorphismClass classify(const Morphism& f, const Truncation& t) {
  if (auto defect = chain_defect(f)) throw ChainMapFailure(defect->first, defect->second.str());
  MorphismClass c;
  c.truncation = t.str();
  const bool nonpositive =
      f.source()->regime() == Regime::nonpositive && f.target()->regime() == Regime::nonpositive;
  const int fib_hi = nonpositive ? std::min(t.hi, -1) : t.hi;
  c.fibration = true;
  c.surjective_all_degrees = true;
  for (int k = t.lo; k <= t.hi; ++k) {
    auto miss = missed_monomial(f, k, t.word_length_max);
    if (!miss) continue;
    c.surjective_all_degrees = false;
    if (k <= fib_hi) {
      c.fibration = false;
      c.notes.push_back("degree " + std::to_string(k) + ": " + f.target()->monomial_str(*miss) + " is not hit");
    }
  }
  c.semifree_extension = semifree_order(f).has_value();
  c.cofibration_certificate = c.semifree_extension;
  QuasiIsoResult q = is_quasi_iso(f, t);
  c.weak_equivalence = q.value && q.conclusive;
  c.notes.push_back(q.note);
  return c;
}

// ---------------------------------------------------------------------------
// (C, FW): depth-limited Tate construction.

namespace {

std::optional<int> weight_of(const Element& e, const std::map<std::string, int>& w) {
  std::optional<int> out;
  const AlgPtr& a = e.algebra();
  for (const auto& [m, c] : e.terms()) {
    int s = 0;
    for (int i = 0; i < a->size(); ++i) {
      if (m[i] == 0) continue;
      auto it = w.find(a->generators()[i].name);
      if (it == w.end()) return std::nullopt;
      s += m[i] * it->second;
    }
    if (out && *out != s) return std::nullopt;
    out = s;
  }
  return out;
}

class TateBuilder {
 public:
  TateBuilder(const Morphism& f, int weight_max) : f_(f), x_(f.target()), wmax_(weight_max) {
    auto wx = infer_weights(x_);
    if (!wx) {
      throw Error("SyzygyUnavailable",
                  "the target admits no weight grading making its differential and relations homogeneous");
    }
    for (int i = 0; i < x_->size(); ++i) xw_[x_->generators()[i].name] = (*wx)[i];
    const AlgPtr& a = f.source();
    for (int i = 0; i < a->size(); ++i) {
      const auto& g = a->generators()[i];
      if (g.base) {
        w_[g.name] = 0;
        continue;
      }
      std::optional<int> w;
      if (!f.image(i).is_zero()) {
        w = weight_of(f.image(i), xw_);
      } else if (!a->diff(i).is_zero()) {
        w = weight_of(a->diff(i), w_);
      } else {
        w = 1;
      }
      if (!w) throw Error("SyzygyUnavailable", "the image of " + g.name + " is not weight-homogeneous");
      w_[g.name] = *w;
    }
    for (const auto& r : a->relations()) {
      if (!r.is_zero() && !weight_of(r, w_)) {
        throw Error("SyzygyUnavailable", "source relation " + r.str() + " is not weight-homogeneous");
      }
    }
    rebuild();
  }

  void run(int depth) {
    for (int stage = 0; stage <= depth; ++stage) {
      copy_generators(-stage);
      if (stage >= 1) kill_cohomology(1 - stage, stage);
    }
  }

  const AlgPtr& middle() const { return m_; }
  const Morphism& left() const { return left_; }
  const Morphism& right() const { return p_; }
  const std::vector<std::string>& notes() const { return notes_; }
  bool trivial() const { return added_.empty(); }

 private:
  void rebuild() {
    Extension ext = adjoin(f_.source(), added_);
    m_ = ext.algebra;
    left_ = ext.inclusion;
    ImageMap ims;
    for (int i = 0; i < m_->size(); ++i) {
      const auto& g = m_->generators()[i];
      if (g.base) continue;
      auto it = target_of_.find(g.name);
      ims.emplace(g.name, it != target_of_.end() ? it->second : f_.image(g.name));
    }
    p_ = make_morphism(m_, x_, ims);
    taken_ = names_of(m_);
  }

  std::vector<Element> component(int degree, int weight) const {
    std::vector<Element> out;
    for (const auto& mono : m_->basis(degree, weight + 2)) {
      Element e = m_->monomial(mono);
      auto w = weight_of(e, w_);
      if (w && *w == weight) out.push_back(e);
    }
    return out;
  }

  void copy_generators(int degree) {
    for (int i = 0; i < x_->size(); ++i) {
      const auto& g = x_->generators()[i];
      if (g.base || g.degree != degree) continue;
      const int w = xw_.at(g.name);
      auto cands = component(degree, w);
      ElementSystem hit(cands.size());
      hit.require(apply_all(p_, cands), x_->gen(i));
      if (hit.solve()) continue;
      NewGenerator ng{fresh_name(taken_, g.name), degree, std::nullopt, ""};
      if (degree < 0 && !x_->diff(i).is_zero()) {
        auto below = component(degree + 1, w);
        ElementSystem sys(below.size());
        sys.require(apply_all(p_, below), x_->diff(i));
        sys.require(diff_all(below), m_->zero());
        auto sol = sys.solve();
        if (!sol) {
          throw Error("SyzygyUnavailable", "no cycle lifts d(" + g.name + ") = " + x_->diff(i).str());
        }
        ng.diff = combine(m_, below, *sol);
      }
      target_of_[ng.name] = x_->gen(i);
      w_[ng.name] = w;
      added_.push_back(ng);
      rebuild();
    }
  }

  // Kernel cohomology of the right map in degree j, weight by weight.
  void kill_cohomology(int j, int stage) {
    int count = 0;
    for (int w = 0; w <= wmax_; ++w) {
      auto cur = component(j, w);
      if (cur.empty()) continue;
      ElementSystem cyc(cur.size());
      cyc.require(apply_all(p_, cur), x_->zero());
      cyc.require(diff_all(cur), m_->zero());
      auto z = cyc.kernel();
      if (z.empty()) continue;
      auto below = component(j - 1, w);
      ElementSystem kp(below.size());
      kp.require(apply_all(p_, below), x_->zero());
      MonomialIndex idx;
      for (const auto& e : cur) idx.add(e);
      std::vector<Element> bounds;
      for (const auto& v : kp.kernel()) {
        bounds.push_back(d(combine(m_, below, v)));
        idx.add(bounds.back());
      }
      SpanBuilder span(idx.size());
      for (const auto& b : bounds) span.add(idx.coords(b));
      std::vector<Element> killed;
      for (const auto& v : z) {
        Element c = combine(m_, cur, v);
        if (span.add(idx.coords(c))) killed.push_back(c);
      }
      for (const auto& c : killed) {
        std::string name = fresh_name(taken_, "e" + std::to_string(++count) + "_" + std::to_string(stage));
        taken_.insert(name);
        added_.push_back(NewGenerator{name, j - 1, c, ""});
        target_of_[name] = x_->zero();
        w_[name] = w;
        notes_.push_back("d(" + name + ") = " + c.str());
      }
      if (!killed.empty()) rebuild();
    }
  }

  Morphism f_;
  AlgPtr x_;
  int wmax_;
  std::map<std::string, int> xw_;
  std::map<std::string, int> w_;
  std::vector<NewGenerator> added_;
  std::map<std::string, Element> target_of_;
  std::set<std::string> taken_;
  AlgPtr m_;
  Morphism left_;
  Morphism p_;
  std::vector<std::string> notes_;
};

}  // namespace

Factorization factor_c_fw(const Morphism& f, int depth, int weight_max) {
  if (f.source()->regime() != Regime::nonpositive || f.target()->regime() != Regime::nonpositive) {
    throw Error("RegimeMismatch", "the Tate construction needs non-positively graded algebras");
  }
  if (depth < 1) throw Error("InvalidArgument", "depth must be at least 1");
  if (auto defect = chain_defect(f)) throw ChainMapFailure(defect->first, defect->second.str());
  Factorization out;
  out.kind = FactorizationKind::C_FW;
  out.window_lo = 1 - depth;
  out.window_hi = 0;
  TateBuilder tb(f, weight_max);
  tb.run(depth);
  if (tb.trivial()) {
    out.middle = f.source();
    out.left = identity(f.source());
    out.right = f;
  } else {
    out.middle = tb.middle();
    out.left = tb.left();
    out.right = tb.right();
  }
  out.notes = tb.notes();
  out.notes.push_back("right is a quasi-isomorphism in degrees [" + std::to_string(out.window_lo) +
                      ", 0] for weights <= " + std::to_string(weight_max));
  return out;
}

// ---------------------------------------------------------------------------
// (CW, F): contractible pairs.

Factorization factor_cw_f(const Morphism& f, const Truncation& t) {
  if (f.source()->regime() != Regime::nonpositive || f.target()->regime() != Regime::nonpositive) {
    throw Error("RegimeMismatch", "pairs are adjoined in non-positive degrees only");
  }
  if (auto defect = chain_defect(f)) throw ChainMapFailure(defect->first, defect->second.str());
  const AlgPtr& x = f.target();
  const int L = t.word_length_max;
  std::vector<NewGenerator> added;
  std::map<std::string, Element> target_of;
  std::set<std::string> taken = names_of(f.source());
  AlgPtr m = f.source();
  Morphism left = identity(m);
  Morphism p = f;
  int counter = 0;
  auto rebuild = [&] {
    Extension ext = adjoin(f.source(), added);
    m = ext.algebra;
    left = ext.inclusion;
    ImageMap ims;
    for (const auto& g : m->generators()) {
      if (g.base) continue;
      auto it = target_of.find(g.name);
      ims.emplace(g.name, it != target_of.end() ? it->second : f.image(g.name));
    }
    p = make_morphism(m, x, ims);
  };
  auto add_pair = [&](const std::string& stem_u, const std::string& stem_v, const Element& target, int degree) {
    std::string u = fresh_name(taken, stem_u);
    taken.insert(u);
    std::string v = fresh_name(taken, stem_v);
    taken.insert(v);
    added.push_back(NewGenerator{v, degree + 1, std::nullopt, ""});
    added.push_back(NewGenerator{u, degree, std::nullopt, v});
    target_of[u] = target;
    target_of[v] = d(target);
  };
  std::vector<std::string> notes;
  for (int deg = -1; deg >= t.lo; --deg) {
    for (int i = 0; i < x->size(); ++i) {
      const auto& g = x->generators()[i];
      if (g.base || g.degree != deg) continue;
      auto cands = candidates(m, deg, L);
      ElementSystem hit(cands.size());
      hit.require(apply_all(p, cands), x->gen(i));
      if (hit.solve()) continue;
      add_pair("u_" + g.name, "v_" + g.name, x->gen(i), deg);
      notes.push_back("pair for generator " + g.name);
      rebuild();
    }
    auto tb = x->basis(deg, L);
    auto images = apply_all(p, candidates(m, deg, L));
    MonomialIndex idx;
    for (const auto& mono : tb) idx.slot(mono);
    for (const auto& im : images) idx.add(im);
    SpanBuilder span(idx.size());
    for (const auto& im : images) span.add(idx.coords(im));
    bool more = false;
    for (const auto& mono : tb) {
      Element e = x->monomial(mono);
      if (!span.add(idx.coords(e))) continue;
      ++counter;
      add_pair("u" + std::to_string(counter), "v" + std::to_string(counter), e, deg);
      notes.push_back("pair for monomial " + e.str());
      more = true;
    }
    if (more) rebuild();
  }
  Factorization out;
  out.kind = FactorizationKind::CW_F;
  out.window_lo = t.lo;
  out.window_hi = 0;
  out.middle = m;
  out.left = left;
  out.right = p;
  out.notes = std::move(notes);
  out.notes.push_back("right is onto in degrees [" + std::to_string(t.lo) + ", -1] for word length <= " +
                      std::to_string(L));
  return out;
}

// ---------------------------------------------------------------------------
// Lifting.

LiftingProblem LiftingProblem::make(Morphism i, Morphism p, Morphism top, Morphism bottom) {
  if (i.source() != top.source() || i.target() != bottom.source() || top.target() != p.source() ||
      p.target() != bottom.target()) {
    throw Error("SquareNotCommutative", "the four maps do not form a square");
  }
  const AlgPtr& pp = i.source();
  for (int g = 0; g < pp->size(); ++g) {
    Element a = p.apply(top.image(g));
    Element b = bottom.apply(i.image(g));
    if (a != b) {
      throw Error("SquareNotCommutative",
                  "on " + pp->generators()[g].name + ": " + a.str() + " vs " + b.str());
    }
  }
  return {std::move(i), std::move(p), std::move(top), std::move(bottom)};
}

namespace {

using Extra = std::function<void(ElementSystem&, const std::vector<Element>&, int)>;

struct LiftFailure {
  std::string generator;
  std::string detail;
};

// Generator-by-generator solve along the semifree order of pr.i.
std::optional<std::vector<Element>> lift_core(const LiftingProblem& pr, int max_wordlen, bool chain,
                                              const Extra& extra, LiftFailure* failure) {
  auto order = semifree_order(pr.i);
  if (!order) throw Error("NotSemifree", "the left map carries no semifree certificate");
  const AlgPtr& pp = pr.i.source();
  const AlgPtr& q = pr.i.target();
  const AlgPtr& s = pr.p.source();
  std::vector<Element> images(q->size(), s->zero());
  for (int g = 0; g < pp->size(); ++g) images[q->index(pp->generators()[g].name)] = pr.top.image(g);
  for (int j : *order) {
    const int deg = q->generators()[j].degree;
    auto cands = candidates(s, deg, max_wordlen);
    ElementSystem sys(cands.size());
    sys.require(apply_all(pr.p, cands), pr.bottom.image(j));
    Element target_d;
    if (chain) {
      Morphism partial(q, s, images, false);
      target_d = partial.apply(q->diff(j));
      sys.require(diff_all(cands), target_d);
    }
    if (extra) extra(sys, cands, j);
    auto sol = sys.solve();
    if (!sol) {
      if (failure) {
        failure->generator = q->generators()[j].name;
        ElementSystem graded(cands.size());
        graded.require(apply_all(pr.p, cands), pr.bottom.image(j));
        auto pre = graded.solve();
        if (!pre) {
          failure->detail = "no preimage of " + pr.bottom.image(j).str() + " within word length " +
                            std::to_string(max_wordlen);
        } else if (chain) {
          Element s0 = combine(s, cands, *pre);
          failure->detail = "obstruction " + (target_d - d(s0)).str() + " is not exact in the kernel";
        } else {
          failure->detail = "extra conditions are infeasible";
        }
      }
      return std::nullopt;
    }
    images[j] = combine(s, cands, *sol);
  }
  return images;
}

ImageMap to_image_map(const AlgPtr& q, const std::vector<Element>& images) {
  ImageMap ims;
  for (int j = 0; j < q->size(); ++j) {
    if (!q->generators()[j].base) ims.emplace(q->generators()[j].name, images[j]);
  }
  return ims;
}

void check_triangles(const LiftingProblem& pr, const Morphism& h) {
  for (int g = 0; g < pr.i.source()->size(); ++g) {
    if (h.apply(pr.i.image(g)) != pr.top.image(g)) {
      throw Error("InternalError", "upper triangle fails on " + pr.i.source()->generators()[g].name);
    }
  }
  for (int j = 0; j < pr.i.target()->size(); ++j) {
    if (pr.p.apply(h.image(j)) != pr.bottom.image(j)) {
      throw Error("InternalError", "lower triangle fails on " + pr.i.target()->generators()[j].name);
    }
  }
}

Morphism with_kappa(const Morphism& f, const AlgPtr& src, const AlgPtr& tgt, const std::string& kappa) {
  ImageMap ims;
  for (int i = 0; i < f.source()->size(); ++i) {
    const auto& g = f.source()->generators()[i];
    if (!g.base) ims.emplace(g.name, transport(f.image(i), tgt));
  }
  ims.emplace(kappa, tgt->gen(kappa));
  return make_morphism(src, tgt, ims);
}

}  // namespace

Morphism graded_lift(const LiftingProblem& pr, int max_wordlen) {
  auto order = semifree_order(pr.i);
  if (!order) throw Error("NotSemifree", "the left map carries no semifree certificate");
  const AlgPtr& s = pr.p.source();
  for (int j : *order) {
    const int deg = pr.i.target()->generators()[j].degree;
    auto cands = candidates(s, deg, max_wordlen);
    ElementSystem sys(cands.size());
    sys.require(apply_all(pr.p, cands), pr.bottom.image(j));
    if (!sys.solve()) {
      throw Error("NotSurjective", pr.bottom.image(j).str() + " has no preimage within word length " +
                                       std::to_string(max_wordlen));
    }
  }
  // Tensor the square with the killer algebra, lift there, then kill kappa.
  std::set<std::string> taken;
  for (const AlgPtr& a : {pr.i.source(), pr.i.target(), s, pr.p.target()}) {
    for (const auto& g : a->generators()) taken.insert(g.name);
  }
  const std::string kappa = fresh_name(taken, "kappa");
  std::vector<NewGenerator> k{NewGenerator{kappa, -1, std::nullopt, "1"}};
  AlgPtr pk = adjoin(pr.i.source(), k, Regime::unbounded).algebra;
  AlgPtr qk = adjoin(pr.i.target(), k, Regime::unbounded).algebra;
  AlgPtr sk = adjoin(s, k, Regime::unbounded).algebra;
  AlgPtr rk = adjoin(pr.p.target(), k, Regime::unbounded).algebra;
  LiftingProblem prk = LiftingProblem::make(with_kappa(pr.i, pk, qk, kappa), with_kappa(pr.p, sk, rk, kappa),
                                            with_kappa(pr.top, pk, sk, kappa),
                                            with_kappa(pr.bottom, qk, rk, kappa));
  LiftFailure fail;
  auto images = lift_core(prk, max_wordlen + 2, true, nullptr, &fail);
  if (!images) {
    throw Error("TruncationNotClosed",
                "killer-algebra lift of " + fail.generator + " failed: " + fail.detail);
  }
  ImageMap ims;
  for (int j = 0; j < qk->size(); ++j) {
    const auto& g = qk->generators()[j];
    if (g.base || g.name == kappa) continue;
    ims.emplace(g.name, transport((*images)[j], s, true));
  }
  Morphism gamma = make_graded_map(pr.i.target(), s, ims);
  check_triangles(pr, gamma);
  return gamma;
}

std::optional<Morphism> dg_lift(const LiftingProblem& pr, const Truncation& t) {
  bool certified = false;
  try {
    MorphismClass ci = classify(pr.i, t);
    MorphismClass cp = classify(pr.p, t);
    certified = ci.semifree_extension &&
                ((ci.weak_equivalence && cp.fibration) || cp.trivial_fibration());
  } catch (const Error&) {
    certified = false;
  }
  LiftFailure fail;
  auto images = lift_core(pr, t.word_length_max, true, nullptr, &fail);
  if (!images) {
    if (certified) throw Error("ObstructionNotExact", "at " + fail.generator + ": " + fail.detail);
    return std::nullopt;
  }
  Morphism h = make_morphism(pr.i.target(), pr.p.source(), to_image_map(pr.i.target(), *images));
  check_triangles(pr, h);
  return h;
}

Morphism lift_lifting_over_artin(const ArtinPtr& a, const ArtinPtr& b, const LiftingProblem& pr,
                                 const Morphism& h_b, const Truncation& t) {
  if (b) {
    for (const auto& g : b->presentation()->generators()) {
      if (!a->presentation()->find(g.name)) {
        throw Error("NotSurjectiveBase", g.name + " is not a generator of the larger ring");
      }
    }
  }
  for (const AlgPtr& x : {pr.i.source(), pr.i.target(), pr.p.source(), pr.p.target()}) {
    if (x->base() != a) throw Error("BaseMismatch", "the square does not live over the given ring");
  }
  AlgPtr sb = change_base(pr.p.source(), b).algebra;
  AlgPtr rb = change_base(pr.p.target(), b).algebra;
  Morphism pb = change_base(pr.p, sb, rb);
  const AlgPtr& pp = pr.i.source();
  const AlgPtr& q = pr.i.target();
  std::map<std::string, Element> hb;
  for (int j = 0; j < q->size(); ++j) {
    const auto& g = q->generators()[j];
    if (g.base) continue;
    auto k = h_b.source()->find(g.name);
    if (!k) throw Error("ReductionMismatch", "the reduced lift has no generator " + g.name);
    hb.emplace(g.name, transport(h_b.image(*k), sb, true));
  }
  for (int g = 0; g < pp->size(); ++g) {
    const auto& gen = pp->generators()[g];
    if (gen.base) continue;
    if (hb.at(gen.name) != transport(pr.top.image(g), sb, true)) {
      throw Error("ReductionMismatch", "the reduced lift disagrees with the top map on " + gen.name);
    }
  }
  for (int j = 0; j < q->size(); ++j) {
    const auto& g = q->generators()[j];
    if (g.base) continue;
    if (pb.apply(hb.at(g.name)) != transport(pr.bottom.image(j), rb, true)) {
      throw Error("ReductionMismatch", "the reduced lift does not cover the bottom map on " + g.name);
    }
  }
  Extra reduce_to = [&](ElementSystem& sys, const std::vector<Element>& cands, int j) {
    std::vector<Element> red;
    for (const auto& c : cands) red.push_back(transport(c, sb, true));
    sys.require(red, hb.at(q->generators()[j].name));
  };
  LiftFailure fail;
  auto images = lift_core(pr, t.word_length_max, true, reduce_to, &fail);
  if (!images) throw Error("ObstructionNotExact", "at " + fail.generator + ": " + fail.detail);
  Morphism h = make_morphism(q, pr.p.source(), to_image_map(q, *images));
  check_triangles(pr, h);
  return h;
}

bool pullback_comparison_surjective(const Morphism& p, const ArtinPtr& b, int degree, int max_wordlen) {
  const AlgPtr& s = p.source();
  const AlgPtr& r = p.target();
  AlgPtr sb = change_base(s, b).algebra;
  AlgPtr rb = change_base(r, b).algebra;
  Morphism pb = change_base(p, sb, rb);
  // Fiber product: pairs (x, y) in R x S_B with x reduced = p_B(y).
  auto rc = candidates(r, degree, max_wordlen);
  auto sbc = candidates(sb, degree, max_wordlen);
  std::vector<Element> cols;
  for (const auto& x : rc) cols.push_back(transport(x, rb, true));
  for (const auto& y : sbc) cols.push_back(-pb.apply(y));
  ElementSystem fp(cols.size());
  fp.require(cols, rb->zero());
  // Coordinates on R and S_B side by side.
  MonomialIndex ri;
  MonomialIndex si;
  auto sc = candidates(s, degree, max_wordlen);
  std::vector<std::pair<Element, Element>> images;
  for (const auto& x : sc) images.emplace_back(p.apply(x), transport(x, sb, true));
  for (const auto& x : rc) ri.add(x);
  for (const auto& y : sbc) si.add(y);
  for (const auto& [x, y] : images) {
    ri.add(x);
    si.add(y);
  }
  auto joint = [&](const Element& x, const Element& y) {
    Vec v = ri.coords(x);
    Vec w = si.coords(y);
    v.insert(v.end(), w.begin(), w.end());
    return v;
  };
  SpanBuilder span(ri.size() + si.size());
  for (const auto& [x, y] : images) span.add(joint(x, y));
  for (const auto& v : fp.kernel()) {
    Element x = r->zero();
    Element y = sb->zero();
    for (std::size_t k = 0; k < rc.size(); ++k) {
      if (sgn(v[k]) != 0) x += v[k] * rc[k];
    }
    for (std::size_t k = 0; k < sbc.size(); ++k) {
      if (sgn(v[rc.size() + k]) != 0) y += v[rc.size() + k] * sbc[k];
    }
    if (!span.contains(joint(x, y))) return false;
  }
  return true;
}

}  // namespace dgdef
