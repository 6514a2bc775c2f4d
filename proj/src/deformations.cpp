#include "dgdef/deformations.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "dgdef/element_system.hpp"
#include "dgdef/errors.hpp"
#include "dgdef/format.hpp"
#include "dgdef/model.hpp"

namespace dgdef {

using nlohmann::json;

namespace {

int koszul(int a, int b) { return ((a * b) % 2 == 0) ? 1 : -1; }

bool has_base_part(const AlgPtr& a, const Monomial& m) {
  for (int i : a->base_indices()) {
    if (m[i] > 0) return true;
  }
  return false;
}

int base_order(const AlgPtr& a, const Monomial& m) {
  int n = 0;
  for (int i : a->base_indices()) n += m[i];
  return n;
}

Element part_of_order(const Element& x, int k) {
  Terms t;
  for (const auto& [m, c] : x.terms()) {
    if (base_order(x.algebra(), m) == k) t.emplace(m, c);
  }
  return Element::from_normal(x.algebra(), std::move(t));
}

int lowest_order(const Element& x) {
  int lo = -1;
  for (const auto& [m, c] : x.terms()) {
    int o = base_order(x.algebra(), m);
    if (lo < 0 || o < lo) lo = o;
  }
  return lo;
}

json values_json(const Derivation& eta) {
  json j = json::object();
  const AlgPtr& s = eta.source();
  for (int i = 0; i < s->size(); ++i) {
    if (!s->generators()[i].base && !eta.value(i).is_zero()) j[s->generators()[i].name] = eta.value(i).str();
  }
  return j;
}

// d + ξ on elements.
Element total_d(const Derivation& xi, const Element& x) { return d(x) + xi.apply(x); }

void require_endomorphism(const Derivation& eta, const char* what) {
  if (eta.source() != eta.target()) throw Error("MixedAlgebras", std::string(what) + " must be an endomorphic derivation");
}

}  // namespace

Derivation delta(const Derivation& eta) {
  const AlgPtr& s = eta.source();
  const int sign = eta.degree() % 2 == 0 ? 1 : -1;
  std::vector<Element> vals(s->size(), eta.target()->zero());
  for (int i : s->nonbase_indices()) {
    Element v = d(eta.value(i));
    Element w = eta.apply(s->diff(i));
    vals[i] = sign > 0 ? v - w : v + w;
  }
  return Derivation(s, eta.target(), eta.degree() + 1, std::move(vals), eta.along());
}

Derivation bracket(const Derivation& eta, const Derivation& theta) {
  require_endomorphism(eta, "bracket argument");
  require_endomorphism(theta, "bracket argument");
  if (eta.source() != theta.source()) throw Error("MixedAlgebras", "bracket of derivations of different algebras");
  const AlgPtr& s = eta.source();
  const int sign = koszul(eta.degree(), theta.degree());
  std::vector<Element> vals(s->size(), s->zero());
  for (int i : s->nonbase_indices()) {
    Element a = eta.apply(theta.value(i));
    Element b = theta.apply(eta.value(i));
    vals[i] = sign > 0 ? a - b : a + b;
  }
  return Derivation(s, s, eta.degree() + theta.degree(), std::move(vals));
}

// ---------------------------------------------------------------------------

const std::vector<Derivation>& DerivationComplex::basis(int degree) const {
  static const std::vector<Derivation> empty;
  auto it = basis_.find(degree);
  return it == basis_.end() ? empty : it->second;
}

const Matrix& DerivationComplex::boundary(int degree) const {
  static const Matrix empty;
  auto it = boundary_.find(degree);
  return it == boundary_.end() ? empty : it->second;
}

std::optional<Vec> DerivationComplex::coords(const Derivation& eta) const {
  auto it = index_.find(eta.degree());
  const std::size_t n = basis(eta.degree()).size();
  Vec v(n);
  for (int i : src_->nonbase_indices()) {
    for (const auto& [m, c] : eta.value(i).terms()) {
      if (it == index_.end()) return std::nullopt;
      auto jt = it->second.find({i, m});
      if (jt == it->second.end()) return std::nullopt;
      v[jt->second] = c;
    }
  }
  return v;
}

Derivation DerivationComplex::element(int degree, const Vec& v) const {
  Derivation out = Derivation::zero(src_, tgt_, degree, along_);
  const auto& b = basis(degree);
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (sgn(v[k]) != 0) out = out + b[k].scaled(v[k]);
  }
  return out;
}

std::map<int, std::size_t> DerivationComplex::cohomology_dims() const {
  std::map<int, std::size_t> out;
  for (int n = trunc_.lo; n <= trunc_.hi; ++n) {
    const std::size_t dim = basis(n).size();
    const Matrix& out_b = boundary(n);
    const Matrix& in_b = boundary(n - 1);
    std::size_t ker = dim - (out_b.cols() == 0 ? 0 : rank(out_b));
    std::size_t im = in_b.cols() == 0 ? 0 : rank(in_b);
    out[n] = ker - im;
  }
  return out;
}

json DerivationComplex::to_json() const {
  json degs = json::array();
  auto h = cohomology_dims();
  for (int n = trunc_.lo; n <= trunc_.hi; ++n) {
    degs.push_back({{"degree", n}, {"dimension", basis(n).size()}, {"cohomology", h[n]}});
  }
  return {{"truncation", trunc_.str()}, {"mode", mode_}, {"degrees", degs}};
}

DerivationComplex derivation_complex(const AlgPtr& b, const AlgPtr& m, const std::optional<Morphism>& along,
                                     const Truncation& t) {
  if (t.lo > t.hi) throw Error("InvalidTruncation", "lo > hi");
  DerivationComplex c;
  c.src_ = b;
  c.tgt_ = m;
  c.along_ = along;
  c.trunc_ = t;
  const int S = t.word_length_max;
  auto phi = [&](int i) { return along ? along->image(i) : transport(b->gen(i), m, true); };

  std::optional<std::vector<int>> wb = t.infer_weight ? infer_weights(b) : std::nullopt;
  std::optional<std::vector<int>> wm = t.infer_weight ? infer_weights(m) : std::nullopt;
  auto weight = [&](const Monomial& mono) {
    int w = 0;
    for (std::size_t i = 0; i < mono.size(); ++i) w += mono[i] * (*wm)[i];
    return w;
  };
  bool weighted = wb && wm;
  if (weighted) {
    for (int i : m->nonbase_indices()) {
      if ((*wm)[i] <= 0) weighted = false;
    }
    for (int i : b->nonbase_indices()) {
      if ((*wb)[i] < 0) weighted = false;
      const Element pi = phi(i);
      for (const auto& [mono, coef] : pi.terms()) {
        if (weighted && weight(mono) != (*wb)[i]) weighted = false;
      }
    }
  }
  int max_wb = 0;
  if (weighted) {
    for (int i : b->nonbase_indices()) max_wb = std::max(max_wb, (*wb)[i]);
  }
  const int enum_len = weighted ? S + max_wb : S;
  c.mode_ = weighted ? "weight shift<=" + std::to_string(S) : "word length<=" + std::to_string(S);

  for (int n = t.lo - 1; n <= t.hi + 1; ++n) {
    auto& basis = c.basis_[n];
    auto& idx = c.index_[n];
    for (int i : b->nonbase_indices()) {
      const int deg = b->generators()[i].degree + n;
      for (const auto& mono : m->basis(deg, enum_len)) {
        if (weighted && weight(mono) - (*wb)[i] > S) continue;
        std::vector<Element> vals(b->size(), m->zero());
        vals[i] = m->monomial(mono);
        idx.emplace(std::make_pair(i, mono), basis.size());
        basis.emplace_back(b, m, n, std::move(vals), along);
      }
    }
  }
  for (int n = t.lo - 1; n <= t.hi; ++n) {
    const auto& src = c.basis_[n];
    std::vector<Vec> cols;
    for (const auto& eta : src) {
      Derivation de = delta(eta);
      auto v = c.coords(de);
      if (!v) throw Error("TruncationNotClosed", "δ(" + eta.str() + ") leaves " + c.mode_);
      cols.push_back(std::move(*v));
    }
    c.boundary_[n] = Matrix::from_columns(cols, c.basis_[n + 1].size());
  }
  return c;
}

DerivationComplex derivation_lie(const AlgPtr& r, const Truncation& t) {
  return derivation_complex(r, r, std::nullopt, t);
}

// ---------------------------------------------------------------------------

json MCResult::to_json() const {
  json df = json::object();
  for (const auto& [g, e] : defect) df[g] = e.str();
  return {{"maurer_cartan", value}, {"method", method}, {"defect", df}};
}

void require_nilpotent(const Derivation& xi, const ArtinPtr& a) {
  const AlgPtr& s = xi.source();
  if (s->base() != a) throw Error("BaseMismatch", "the derivation must act on an algebra over the given Artin ring");
  for (int i : s->nonbase_indices()) {
    for (const auto& [m, c] : xi.value(i).terms()) {
      if (!has_base_part(s, m)) {
        throw Error("CoefficientNotNilpotent", "value on " + s->generators()[i].name + " has a term " +
                                                   s->monomial_str(m) + " outside R ⊗ m_A");
      }
    }
  }
}

MCResult mc_check(const Derivation& xi, const ArtinPtr& a) {
  require_endomorphism(xi, "ξ");
  if (xi.degree() != 1) throw Error("DegreeMismatch", "ξ must have degree 1");
  require_nilpotent(xi, a);
  MCResult r;
  r.method = "(d + xi)^2 on generators";
  const AlgPtr& s = xi.source();
  for (int i : s->nonbase_indices()) {
    Element sq = total_d(xi, total_d(xi, s->gen(i)));
    if (!sq.is_zero()) r.defect.emplace(s->generators()[i].name, sq);
  }
  r.value = r.defect.empty();
  return r;
}

MCResult mc_check_bracket(const Derivation& xi, const ArtinPtr& a) {
  require_endomorphism(xi, "ξ");
  if (xi.degree() != 1) throw Error("DegreeMismatch", "ξ must have degree 1");
  require_nilpotent(xi, a);
  MCResult r;
  r.method = "delta xi + 1/2 [xi, xi] on generators";
  const AlgPtr& s = xi.source();
  Derivation lhs = delta(xi) + bracket(xi, xi).scaled(Rational(1, 2));
  for (int i : s->nonbase_indices()) {
    if (!lhs.value(i).is_zero()) r.defect.emplace(s->generators()[i].name, lhs.value(i));
  }
  r.value = r.defect.empty();
  return r;
}

json StrictDeformation::to_json() const {
  json gens = json::array();
  for (int i : total->nonbase_indices()) {
    const auto& g = total->generators()[i];
    json e = {{"name", g.name}, {"degree", g.degree}};
    if (!total->diff(i).is_zero()) e["d"] = total->diff(i).str();
    gens.push_back(e);
  }
  return {{"generators", gens}, {"reduction_iso", reduction_iso}, {"cofibration", cofibration.to_json()}};
}

StrictDeformation psi1_deform(const AlgPtr& r, const ArtinPtr& a, const Derivation& xi, const Truncation& t) {
  if (r->base()) throw Error("BaseMismatch", "R must be an algebra over Q");
  MCResult mc = mc_check(xi, a);
  if (!mc.value) {
    std::string first = mc.defect.begin()->first + ": " + mc.defect.begin()->second.str();
    throw Error("NotMC", "(d + xi)^2 is nonzero on " + first);
  }
  const AlgPtr& ra = xi.source();
  DGAlgebra::Builder bld(a, r->regime());
  bld.label(r->label());
  for (int i : r->nonbase_indices()) bld.gen(r->generators()[i].name, r->generators()[i].degree);
  for (int i : r->nonbase_indices()) {
    const std::string& name = r->generators()[i].name;
    Element v = ra->diff(ra->index(name)) + xi.value(name);
    if (!v.is_zero()) bld.diff(name, v);
  }
  for (const auto& rel : r->relations()) bld.rel(rel);
  StrictDeformation out;
  out.total = bld.build();
  AlgPtr red = reduction(out.total).algebra;
  ImageMap ims;
  for (int i : r->nonbase_indices()) ims.emplace(r->generators()[i].name, r->gen(i));
  out.comparison = make_morphism(red, r, ims);
  out.reduction_iso = same_presentation(red, r) && is_isomorphism_over_q(out.comparison, t);
  AlgPtr base_only = DGAlgebra::Builder(a, r->regime()).build();
  out.cofibration = reduction_cofibration_check(make_morphism(base_only, out.total, ImageMap{}), t);
  return out;
}

// ---------------------------------------------------------------------------

Element exp_apply(const Derivation& theta, const Element& x, int sign) {
  Element sum = x;
  Element term = x;
  for (int k = 1; k <= 256; ++k) {
    term = Rational(sign, k) * theta.apply(term);
    if (term.is_zero()) return sum;
    sum += term;
  }
  throw Error("NotNilpotent", "exp series of " + theta.str() + " does not terminate");
}

json GaugeResult::to_json() const {
  return {{"xi", values_json(xi)}, {"automorphism", automorphism}, {"maurer_cartan", mc}};
}

GaugeResult gauge_transform(const Derivation& theta, const Derivation& xi, const ArtinPtr& a) {
  require_endomorphism(theta, "θ");
  require_endomorphism(xi, "ξ");
  if (theta.source() != xi.source()) throw Error("MixedAlgebras", "θ and ξ act on different algebras");
  if (theta.degree() != 0) throw Error("DegreeMismatch", "θ must have degree 0");
  try {
    require_nilpotent(theta, a);
  } catch (const Error& e) {
    if (e.kind() != "CoefficientNotNilpotent") throw;
    throw Error("NotNilpotent", e.what());
  }
  const AlgPtr& s = xi.source();
  ImageMap plus;
  ImageMap minus;
  for (int i : s->nonbase_indices()) {
    plus.emplace(s->generators()[i].name, exp_apply(theta, s->gen(i), 1));
    minus.emplace(s->generators()[i].name, exp_apply(theta, s->gen(i), -1));
  }
  GaugeResult out;
  out.exp_theta = make_graded_map(s, s, plus);
  out.exp_minus_theta = make_graded_map(s, s, minus);
  out.automorphism = same_on_generators(compose(out.exp_theta, out.exp_minus_theta), identity(s)) &&
                     same_on_generators(compose(out.exp_minus_theta, out.exp_theta), identity(s));
  if (!out.automorphism) throw Error("InternalError", "exp(θ) exp(-θ) is not the identity");
  std::vector<Element> vals(s->size(), s->zero());
  for (int i : s->nonbase_indices()) {
    vals[i] = out.exp_theta.apply(total_d(xi, out.exp_minus_theta.image(i))) - d(s->gen(i));
  }
  out.xi = Derivation(s, s, 1, std::move(vals));
  out.mc = mc_check(out.xi, a).value;
  return out;
}

json GaugeEquivalence::to_json() const {
  json j = {{"equivalent", value}, {"conclusive", conclusive}, {"note", note}};
  if (theta) j["theta"] = values_json(*theta);
  return j;
}

namespace {

// Products and d of the base never lower the word length in base generators,
// so that length is an m_A-adic filtration.
bool length_filtered(const ArtinPtr& a) {
  const AlgPtr& p = a->presentation();
  const auto& b = a->basis();
  for (std::size_t k = 0; k < b.size(); ++k) {
    const int ok = base_order(p, b[k]);
    Element x = p->monomial(b[k]);
    const Element dx = d(x);
    for (const auto& [m, c] : dx.terms()) {
      if (base_order(p, m) < ok) return false;
    }
    for (std::size_t l = 0; l < b.size(); ++l) {
      const Element xy = x * p->monomial(b[l]);
      for (const auto& [m, c] : xy.terms()) {
        if (base_order(p, m) < ok + base_order(p, b[l])) return false;
      }
    }
  }
  return true;
}

bool same_values(const Derivation& a, const Derivation& b) {
  for (int i : a.source()->nonbase_indices()) {
    if (a.value(i) != b.value(i)) return false;
  }
  return true;
}

}  // namespace

GaugeEquivalence are_gauge_equivalent(const Derivation& xi1, const Derivation& xi2, const ArtinPtr& a,
                                      int max_wordlen) {
  require_endomorphism(xi1, "ξ1");
  require_endomorphism(xi2, "ξ2");
  const AlgPtr& s = xi1.source();
  if (xi2.source() != s) throw Error("MixedAlgebras", "ξ1 and ξ2 act on different algebras");
  for (const auto* xi : {&xi1, &xi2}) {
    if (!mc_check(*xi, a).value) throw Error("NotMC", xi->str());
  }
  if (!length_filtered(a)) {
    throw Error("UnsupportedBase", "word length in the base generators is not a filtration of the Artin ring");
  }
  GaugeEquivalence out;
  Derivation cur = xi1;
  Morphism phi = identity(s);
  const int top = a->nilpotency_index();
  for (int k = 1; k < top; ++k) {
    std::vector<Element> diff(s->size(), s->zero());
    bool done = true;
    for (int i : s->nonbase_indices()) {
      diff[i] = xi2.value(i) - cur.value(i);
      if (diff[i].is_zero()) continue;
      done = false;
      const int lo = lowest_order(diff[i]);
      if (lo < k) {
        out.note = "difference of order " + std::to_string(lo) + " survives at order " + std::to_string(k);
        return out;
      }
    }
    if (done) break;
    std::vector<Derivation> dirs;
    for (int i : s->nonbase_indices()) {
      for (const auto& m : s->basis(s->generators()[i].degree, max_wordlen)) {
        if (base_order(s, m) != k) continue;
        std::vector<Element> vals(s->size(), s->zero());
        vals[i] = s->monomial(m);
        dirs.emplace_back(s, s, 0, std::move(vals));
      }
    }
    ElementSystem sys(dirs.size());
    for (int i : s->nonbase_indices()) {
      const Element g = s->gen(i);
      const Element dg = total_d(cur, g);
      std::vector<Element> cols;
      for (const auto& th : dirs) {
        cols.push_back(part_of_order(th.apply(dg) - total_d(cur, th.value(i)), k));
      }
      sys.require(cols, part_of_order(diff[i], k));
    }
    auto sol = sys.solve();
    if (!sol) {
      out.conclusive = k == 1;
      out.note = "no gauge correction at order " + std::to_string(k) + " within word length " +
                 std::to_string(max_wordlen) +
                 (k == 1 ? "; the first-order classes differ" : "; earlier choices may matter");
      return out;
    }
    Derivation th = Derivation::zero(s, s, 0);
    for (std::size_t u = 0; u < dirs.size(); ++u) {
      if (sgn((*sol)[u]) != 0) th = th + dirs[u].scaled((*sol)[u]);
    }
    GaugeResult g = gauge_transform(th, cur, a);
    cur = g.xi;
    phi = compose(g.exp_theta, phi);
  }
  if (!same_values(cur, xi2)) {
    out.note = "order-by-order solution does not reach ξ2";
    return out;
  }
  // θ = log(phi) on generators; term runs through (phi - id)^j(g).
  std::vector<Element> vals(s->size(), s->zero());
  for (int i : s->nonbase_indices()) {
    Element term = s->gen(i);
    Element sum = s->zero();
    for (int j = 1; j <= 256; ++j) {
      term = phi.apply(term) - term;
      if (term.is_zero()) break;
      sum += Rational(j % 2 == 1 ? 1 : -1, j) * term;
      if (j == 256) throw Error("NotNilpotent", "log series does not terminate");
    }
    vals[i] = sum;
  }
  Derivation theta(s, s, 0, std::move(vals));
  GaugeResult check = gauge_transform(theta, xi1, a);
  if (!same_values(check.xi, xi2)) {
    out.note = "logarithm of the composed automorphism fails to reproduce ξ2";
    return out;
  }
  out.value = true;
  out.conclusive = true;
  out.theta = theta;
  out.note = "exp(θ) (d + ξ1) exp(-θ) = d + ξ2 verified on generators";
  return out;
}

// ---------------------------------------------------------------------------

json TangentReport::to_json() const {
  json d = json::array();
  for (const auto& [n, k] : dims) d.push_back({{"degree", n}, {"dimension", k}});
  json gens = json::array();
  for (int i : resolution->nonbase_indices()) {
    const auto& g = resolution->generators()[i];
    json e = {{"name", g.name}, {"degree", g.degree}};
    if (!resolution->diff(i).is_zero()) e["d"] = resolution->diff(i).str();
    gens.push_back(e);
  }
  return {{"cohomology", d}, {"resolution", gens}, {"truncation", truncation}};
}

TangentReport tangent_obstruction_dims(const AlgPtr& x, int depth, const std::vector<int>& degrees,
                                       int max_wordlen) {
  if (degrees.empty()) throw Error("InvalidTruncation", "no degrees requested");
  AlgPtr q0 = DGAlgebra::Builder().build();
  Factorization fac = factor_c_fw(make_morphism(q0, x, ImageMap{}), depth);
  const int lo = *std::min_element(degrees.begin(), degrees.end());
  const int hi = *std::max_element(degrees.begin(), degrees.end());
  Truncation t = Truncation::window(lo, hi, max_wordlen);
  DerivationComplex dc = derivation_complex(fac.middle, x, fac.right, t);
  auto h = dc.cohomology_dims();
  TangentReport out;
  out.resolution = fac.middle;
  out.truncation = t.str() + " (" + dc.mode() + "), Tate depth " + std::to_string(depth);
  for (int n : degrees) out.dims[n] = h[n];
  return out;
}

// ---------------------------------------------------------------------------

json H0Deformation::to_json() const {
  json rels = json::array();
  for (const auto& r : h0->relations()) rels.push_back(r.str());
  return {{"relations", rels},     {"dim_total", dim_total}, {"dim_reduced", dim_reduced},
          {"dim_base", dim_base},  {"finite", finite},       {"flat", flat}};
}

bool same_ideal(const AlgPtr& a, const AlgPtr& b) {
  for (const auto& r : a->relations()) {
    if (!transport(r, b).is_zero()) return false;
  }
  for (const auto& r : b->relations()) {
    if (!transport(r, a).is_zero()) return false;
  }
  return true;
}

H0Deformation h0_compare(const StrictDeformation& def, int max_wordlen) {
  const AlgPtr& tot = def.total;
  const ArtinPtr& a = tot->base();
  if (!a) throw Error("BaseMismatch", "the deformation must live over an Artin ring");
  for (std::size_t k = 0; k < a->dim(); ++k) {
    if (a->basis_degree(k) != 0) throw Error("NotDegreeZero", "the Artin ring is not concentrated in degree 0");
  }
  DGAlgebra::Builder bld(a);
  std::set<std::string> zero_gens;
  for (int i : tot->nonbase_indices()) {
    if (tot->generators()[i].degree == 0) {
      bld.gen(tot->generators()[i].name, 0);
      zero_gens.insert(tot->generators()[i].name);
    }
  }
  for (int i : tot->nonbase_indices()) {
    if (tot->generators()[i].degree == -1 && !tot->diff(i).is_zero()) bld.rel(tot->diff(i));
  }
  for (const auto& r : tot->relations()) {
    bool degree_zero = true;
    for (const auto& [m, c] : r.terms()) {
      for (int i : tot->nonbase_indices()) {
        if (m[i] > 0 && tot->generators()[i].degree != 0) degree_zero = false;
      }
    }
    if (degree_zero) bld.rel(r);
  }
  H0Deformation out;
  out.h0 = bld.build();
  AlgPtr red = reduction(out.h0).algebra;
  out.dim_base = a->dim();
  out.dim_total = out.h0->basis(0, max_wordlen).size();
  out.dim_reduced = red->basis(0, max_wordlen).size();
  out.finite = out.dim_total == out.h0->basis(0, max_wordlen + 1).size() &&
               out.dim_reduced == red->basis(0, max_wordlen + 1).size();
  out.flat = out.finite && out.dim_total == out.dim_base * out.dim_reduced;
  return out;
}

// ---------------------------------------------------------------------------

std::string verdict_name(HilbertSchapsVerdict v) {
  return v == HilbertSchapsVerdict::liftable_via_matrix ? "liftable_via_matrix" : "not_in_matrix_image";
}

json HilbertSchapsResult::to_json() const {
  json mins = json::array();
  for (const auto& m : minors) mins.push_back(m.str());
  json fo = json::array();
  for (const auto& f : first_order) fo.push_back(f.str());
  return {{"minors", mins},
          {"minors_match", minors_match},
          {"perturbation_rank", perturbation_rank},
          {"perturbations_in_maximal_ideal", perturbations_in_maximal_ideal},
          {"first_order", fo},
          {"verdict", verdict_name(verdict)}};
}

HilbertSchapsResult hilbert_schaps_check(const std::vector<std::vector<Element>>& g,
                                         const std::vector<Element>& ideal,
                                         const std::vector<std::string>& candidate, int support) {
  if (g.size() != 2 || g[0].size() != 3 || g[1].size() != 3) throw Error("InvalidMatrix", "G must be 2 x 3");
  const AlgPtr& p = g[0][0].algebra();
  if (p->base()) throw Error("BaseMismatch", "G must have entries in a polynomial ring over Q");
  for (int i : p->nonbase_indices()) {
    if (p->generators()[i].degree != 0) throw Error("InvalidMatrix", "entries must lie in degree-0 generators");
  }
  if (candidate.size() != ideal.size()) throw Error("InvalidCandidate", "one deformed generator per ideal generator");
  const std::vector<std::pair<int, int>> cols = {{0, 1}, {0, 2}, {1, 2}};
  HilbertSchapsResult out;
  for (const auto& [a, b] : cols) out.minors.push_back(g[0][a] * g[1][b] - g[0][b] * g[1][a]);

  auto quotient = [&](const std::vector<Element>& rels) {
    DGAlgebra::Builder bld;
    for (int i : p->nonbase_indices()) bld.gen(p->generators()[i].name, 0);
    for (const auto& r : rels) bld.rel(r);
    return bld.build();
  };
  AlgPtr x = quotient(ideal);
  AlgPtr xm = quotient(out.minors);
  out.minors_match = true;
  for (const auto& m : out.minors) {
    if (!transport(m, x).is_zero()) out.minors_match = false;
  }
  for (const auto& r : ideal) {
    if (!transport(r, xm).is_zero()) out.minors_match = false;
  }
  if (!out.minors_match) throw Error("MinorIdealMismatch", "the 2 x 2 minors of G do not generate the ideal");

  ArtinPtr dual = ArtinRing::make(DGAlgebra::Builder().base_gen("eps", 0).rel("eps^2").build());
  DGAlgebra::Builder pb(dual);
  for (int i : p->nonbase_indices()) pb.gen(p->generators()[i].name, 0);
  AlgPtr pa = pb.build();
  const int eps = pa->index("eps");
  for (std::size_t k = 0; k < candidate.size(); ++k) {
    Element h = pa->parse(candidate[k]) - transport(ideal[k], pa);
    Element f = p->zero();
    for (const auto& [m, c] : h.terms()) {
      if (m[eps] != 1) throw Error("InvalidCandidate", candidate[k] + " does not reduce to " + ideal[k].str());
      Monomial stripped = m;
      stripped[eps] = 0;
      f += c * transport(pa->monomial(stripped), p);
    }
    out.first_order.push_back(f);
  }

  // First-order change of each minor under G + eps * (mono at entry (i, j)).
  std::vector<std::vector<Element>> vectors;
  const auto monos = p->basis(0, support);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (const auto& mono : monos) {
        const Element delta = p->monomial(mono);
        std::vector<Element> v;
        for (const auto& [a, b] : cols) {
          Element change = p->zero();
          if (j == a) change += (i == 0 ? Rational(1) : Rational(-1)) * (delta * g[1 - i][b]);
          if (j == b) change += (i == 0 ? Rational(-1) : Rational(1)) * (delta * g[1 - i][a]);
          // d/dG_{0a} = G_{1b}, d/dG_{1b} = G_{0a}, d/dG_{0b} = -G_{1a}, d/dG_{1a} = -G_{0b}
          v.push_back(transport(change, x));
        }
        vectors.push_back(std::move(v));
      }
    }
  }
  std::vector<Element> target;
  for (const auto& f : out.first_order) target.push_back(transport(f, x));
  std::vector<MonomialIndex> index(3);
  for (const auto& v : vectors) {
    for (int k = 0; k < 3; ++k) index[k].add(v[k]);
  }
  for (int k = 0; k < 3; ++k) index[k].add(target[k]);
  auto flat = [&](const std::vector<Element>& v) {
    Vec out_v;
    for (int k = 0; k < 3; ++k) {
      Vec c = index[k].coords(v[k]);
      out_v.insert(out_v.end(), c.begin(), c.end());
    }
    return out_v;
  };
  const std::size_t dim = index[0].size() + index[1].size() + index[2].size();
  SpanBuilder span(dim);
  out.perturbations_in_maximal_ideal = true;
  for (const auto& v : vectors) {
    span.add(flat(v));
    for (const auto& e : v) {
      if (sgn(e.coefficient(x->unit_monomial())) != 0) out.perturbations_in_maximal_ideal = false;
    }
  }
  out.perturbation_rank = span.size();
  out.verdict = span.contains(flat(target)) ? HilbertSchapsVerdict::liftable_via_matrix
                                            : HilbertSchapsVerdict::not_in_matrix_image;
  return out;
}

// ---------------------------------------------------------------------------

Derivation parse_derivation(const std::string& text, const AlgPtr& r) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::optional<int> degree;
  std::map<std::string, Element> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word == "degree") {
      int n = 0;
      if (!(ls >> n)) throw ParseError("expected an integer degree", lineno, 8);
      degree = n;
      continue;
    }
    if (word != "der") throw ParseError("unknown directive '" + word + "'", lineno, 1);
    std::string name;
    std::string eq;
    if (!(ls >> name >> eq) || eq != "=") throw ParseError("expected 'der <gen> = <expr>'", lineno, 5);
    auto idx = r->find(name);
    if (!idx || r->generators()[*idx].base) throw ParseError("unknown generator '" + name + "'", lineno, 5);
    std::string expr;
    std::getline(ls, expr);
    try {
      values[name] = r->parse(expr);
    } catch (const ParseError& e) {
      const auto col = static_cast<int>(line.find(expr));
      throw ParseError(e.detail(), lineno, col + e.column());
    }
  }
  if (!degree) throw ParseError("missing 'degree <n>' line", lineno, 1);
  return Derivation::from_map(r, r, *degree, values);
}

Derivation load_derivation(const std::string& path, const AlgPtr& r) {
  std::ifstream f(path);
  if (!f) throw Error("IOError", "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_derivation(ss.str(), r);
}

}  // namespace dgdef
