#include "dgdef/complex.hpp"

#include <algorithm>
#include <sstream>

#include "dgdef/errors.hpp"

namespace dgdef {

using nlohmann::json;

std::string Truncation::str() const {
  std::ostringstream os;
  os << "window [" << lo << ", " << hi << "], word length <= " << word_length_max;
  if (component) {
    os << ", weight component (";
    for (std::size_t i = 0; i < component->size(); ++i) os << (i ? "," : "") << (*component)[i];
    os << ")";
  }
  return os.str();
}

json Truncation::to_json() const {
  json j = {{"lo", lo}, {"hi", hi}, {"word_length_max", word_length_max}};
  if (!weights.empty()) j["weights"] = weights;
  if (component) j["component"] = *component;
  return j;
}

namespace {

std::vector<int> weight_of(const std::vector<std::vector<int>>& w, const Monomial& m, std::size_t dims) {
  std::vector<int> out(dims, 0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    for (std::size_t k = 0; k < dims; ++k) out[k] += m[i] * w[i][k];
  }
  return out;
}

}  // namespace

std::optional<std::vector<int>> infer_weights(const AlgPtr& a) {
  const int n = a->size();
  std::vector<int> w(n, 0);
  std::vector<bool> known(n, false);
  for (int i = 0; i < n; ++i) {
    if (a->generators()[i].base) known[i] = true;
  }
  for (int i = 0; i < n; ++i) {
    if (a->generators()[i].base) continue;
    const Element dg = a->diff(i);
    if (dg.is_zero()) {
      w[i] = 1;
      known[i] = true;
      continue;
    }
    std::optional<int> weight;
    for (const auto& [m, c] : dg.terms()) {
      int s = 0;
      for (int k = 0; k < n; ++k) {
        if (m[k] == 0) continue;
        if (!known[k]) return std::nullopt;
        s += m[k] * w[k];
      }
      if (weight && *weight != s) return std::nullopt;
      weight = s;
    }
    w[i] = *weight;
    known[i] = true;
  }
  // Base generators may differentiate into each other; they weigh 0.
  auto homogeneous = [&](const Element& e) {
    std::optional<int> weight;
    for (const auto& [m, c] : e.terms()) {
      int s = 0;
      for (int k = 0; k < n; ++k) s += m[k] * w[k];
      if (weight && *weight != s) return false;
      weight = s;
    }
    return true;
  };
  for (const auto& r : a->relations()) {
    if (!homogeneous(r)) return std::nullopt;
  }
  for (int i = 0; i < n; ++i) {
    if (!homogeneous(a->diff(i))) return std::nullopt;
  }
  return w;
}

const std::vector<Monomial>& FiniteComplex::basis(int degree) const {
  static const std::vector<Monomial> empty;
  auto it = basis_.find(degree);
  return it == basis_.end() ? empty : it->second;
}

const Matrix& FiniteComplex::boundary(int degree) const {
  static const Matrix empty;
  auto it = boundary_.find(degree);
  return it == boundary_.end() ? empty : it->second;
}

bool FiniteComplex::in_truncation(const Monomial& m) const {
  int deg = alg_->degree(m);
  auto it = index_.find(deg);
  return it != index_.end() && it->second.count(m) > 0;
}

std::optional<Vec> FiniteComplex::coords(int degree, const Element& a) const {
  auto it = index_.find(degree);
  if (it == index_.end()) return a.is_zero() ? std::optional<Vec>(Vec{}) : std::nullopt;
  Vec v(it->second.size());
  Element x = a.algebra() == alg_ || !a.algebra() ? a : transport(a, alg_);
  for (const auto& [m, c] : x.terms()) {
    auto jt = it->second.find(m);
    if (jt == it->second.end()) return std::nullopt;
    v[jt->second] = c;
  }
  return v;
}

Element FiniteComplex::element(int degree, const Vec& v) const {
  Terms t;
  const auto& b = basis(degree);
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (sgn(v[k]) != 0) t.emplace(b[k], v[k]);
  }
  return Element::from_normal(alg_, std::move(t));
}

FiniteComplex extract_complex(const AlgPtr& a, const Truncation& t, bool require_closed) {
  if (t.lo > t.hi) throw Error("InvalidTruncation", "lo > hi");
  FiniteComplex c;
  c.alg_ = a;
  c.trunc_ = t;
  const int n = a->size();
  std::size_t dims = 0;
  if (!t.weights.empty()) {
    for (const auto& [name, w] : t.weights) dims = std::max(dims, w.size());
    c.gen_weights_.assign(n, std::vector<int>(dims, 0));
    for (const auto& [name, w] : t.weights) {
      if (auto i = a->find(name)) {
        for (std::size_t k = 0; k < w.size(); ++k) c.gen_weights_[*i][k] = w[k];
      }
    }
    // The differential and relations must respect the multigrading.
    auto check = [&](const Element& e, const std::optional<std::vector<int>>& expected) {
      std::optional<std::vector<int>> weight = expected;
      for (const auto& [m, coef] : e.terms()) {
        auto w = weight_of(c.gen_weights_, m, dims);
        if (weight && *weight != w) {
          throw Error("MultigradingNotHomogeneous", e.str() + " is not homogeneous");
        }
        weight = w;
      }
    };
    for (int i = 0; i < n; ++i) check(a->diff(i), c.gen_weights_[i]);
    for (const auto& r : a->relations()) check(r, std::nullopt);
    std::ostringstream os;
    os << "multigrading";
    if (t.component) {
      os << " component (";
      for (std::size_t k = 0; k < t.component->size(); ++k) os << (k ? "," : "") << (*t.component)[k];
      os << ")";
    }
    os << ", word length<=" << t.word_length_max;
    c.mode_ = os.str();
  } else if (auto w = t.infer_weight ? infer_weights(a) : std::nullopt) {
    dims = 1;
    c.gen_weights_.assign(n, std::vector<int>(1, 0));
    for (int i = 0; i < n; ++i) c.gen_weights_[i][0] = (*w)[i];
    c.weight_bound_ = t.word_length_max;
    c.mode_ = "weight<=" + std::to_string(t.word_length_max);
  } else {
    c.mode_ = "word length<=" + std::to_string(t.word_length_max);
  }

  auto keep = [&](const Monomial& m) {
    if (c.gen_weights_.empty()) return true;
    auto w = weight_of(c.gen_weights_, m, dims);
    if (c.weight_bound_ >= 0) return w[0] <= c.weight_bound_;
    if (t.component) {
      std::vector<int> comp = *t.component;
      comp.resize(dims, 0);
      return w == comp;
    }
    return true;
  };
  for (int deg = t.lo - 1; deg <= t.hi + 1; ++deg) {
    std::vector<Monomial> b;
    for (auto& m : a->basis(deg, t.word_length_max)) {
      if (keep(m)) b.push_back(std::move(m));
    }
    auto& idx = c.index_[deg];
    for (std::size_t k = 0; k < b.size(); ++k) idx.emplace(b[k], k);
    c.basis_[deg] = std::move(b);
  }
  for (int deg = t.lo - 1; deg <= t.hi; ++deg) {
    const auto& src = c.basis_[deg];
    const auto& tgt_index = c.index_[deg + 1];
    Matrix m(c.basis_[deg + 1].size(), src.size());
    for (std::size_t k = 0; k < src.size(); ++k) {
      Element db = d(a->monomial(src[k]));
      for (const auto& [mono, coef] : db.terms()) {
        auto it = tgt_index.find(mono);
        if (it == tgt_index.end()) {
          if (c.closed_) c.escaping_ = src[k];
          c.closed_ = false;
          continue;
        }
        m.at(it->second, k) = coef;
      }
    }
    c.boundary_[deg] = std::move(m);
  }
  if (require_closed && !c.closed_) {
    throw Error("TruncationNotClosed", "d(" + a->monomial_str(*c.escaping_) + ") leaves " + c.mode_);
  }
  return c;
}

json CohomologyReport::to_json() const {
  json j;
  j["truncation"] = truncation;
  json degs = json::array();
  for (const auto& [deg, dim] : dims) {
    json reps = json::array();
    auto it = representatives.find(deg);
    if (it != representatives.end()) {
      for (const auto& r : it->second) reps.push_back(r.str());
    }
    degs.push_back({{"degree", deg}, {"dimension", dim}, {"representatives", reps}});
  }
  j["degrees"] = degs;
  return j;
}

std::string CohomologyReport::str() const {
  std::ostringstream os;
  for (const auto& [deg, dim] : dims) {
    os << "H^" << deg << " = " << dim;
    auto it = representatives.find(deg);
    if (it != representatives.end() && !it->second.empty()) {
      os << " :";
      for (const auto& r : it->second) os << " [" << r.str() << "]";
    }
    os << "\n";
  }
  return os.str();
}

CohomologyReport cohomology(const FiniteComplex& c) {
  if (!c.closed()) {
    throw Error("NotClosed", "d(" + c.algebra()->monomial_str(*c.escaping()) + ") leaves the truncation");
  }
  CohomologyReport rep;
  rep.truncation = c.truncation().str() + " (" + c.mode() + ")";
  const Truncation& t = c.truncation();
  for (int deg = t.lo; deg <= t.hi; ++deg) {
    const std::size_t dim = c.basis(deg).size();
    SpanBuilder span(dim);
    const Matrix& in = c.boundary(deg - 1);
    for (std::size_t k = 0; k < in.cols(); ++k) span.add(in.column(k));
    std::vector<Element> reps;
    for (const auto& z : nullspace(c.boundary(deg))) {
      if (span.add(z)) reps.push_back(c.element(deg, z));
    }
    rep.dims[deg] = reps.size();
    rep.representatives[deg] = std::move(reps);
  }
  return rep;
}

std::optional<Element> solve_coboundary(const FiniteComplex& c, const Element& z) {
  if (z.is_zero()) return c.algebra()->zero();
  if (!d(z).is_zero()) throw Error("NotACocycle", z.str());
  auto deg = z.degree();
  if (!deg) throw Error("NotACocycle", "inhomogeneous element " + z.str());
  auto v = c.coords(*deg, z);
  if (!v) throw Error("TruncationNotClosed", z.str() + " lies outside the truncation");
  auto h = solve(c.boundary(*deg - 1), *v);
  if (!h) return std::nullopt;
  return c.element(*deg - 1, *h);
}

json QuasiIsoResult::to_json() const {
  json degs = json::array();
  for (const auto& [deg, e] : degrees) {
    degs.push_back({{"degree", deg}, {"source_dim", e.source_dim}, {"target_dim", e.target_dim}, {"rank", e.rank}});
  }
  json j = {{"quasi_isomorphism", value}, {"conclusive", conclusive}, {"degrees", degs}, {"note", note}};
  if (witness) j["witness"] = witness->str();
  return j;
}

namespace {

Morphism reduce_morphism(const Morphism& f) {
  BaseChange s = reduction(f.source());
  BaseChange t = reduction(f.target());
  return change_base(f, s.algebra, t.algebra);
}

}  // namespace

QuasiIsoResult is_quasi_iso(const Morphism& f0, const Truncation& t) {
  const AlgPtr& s0 = f0.source();
  const AlgPtr& t0 = f0.target();
  const bool reduce = s0->base() && s0->base() == t0->base() && s0->graded_free_over_base() &&
                      t0->graded_free_over_base();
  Morphism f = reduce ? reduce_morphism(f0) : f0;
  QuasiIsoResult res;
  FiniteComplex cs = extract_complex(f.source(), t, true);
  FiniteComplex ct = extract_complex(f.target(), t, true);
  CohomologyReport hs = cohomology(cs);
  CohomologyReport ht = cohomology(ct);
  res.value = true;
  for (int deg = t.lo; deg <= t.hi; ++deg) {
    DegreeEvidence ev;
    ev.source_dim = hs.dims[deg];
    ev.target_dim = ht.dims[deg];
    const std::size_t dim = ct.basis(deg).size();
    std::vector<Vec> images;
    bool escaped = false;
    for (const auto& z : hs.representatives[deg]) {
      auto v = ct.coords(deg, f.apply(z));
      if (!v) {
        escaped = true;
        break;
      }
      v->resize(dim);
      images.push_back(*v);
    }
    if (escaped) {
      res.conclusive = false;
      res.value = false;
      res.note = "images leave the target truncation in degree " + std::to_string(deg);
      res.degrees[deg] = ev;
      continue;
    }
    std::vector<Vec> bcols;
    const Matrix& in = ct.boundary(deg - 1);
    for (std::size_t k = 0; k < in.cols(); ++k) bcols.push_back(in.column(k));
    std::vector<Vec> all = images;
    all.insert(all.end(), bcols.begin(), bcols.end());
    std::size_t rb = rank(Matrix::from_columns(bcols, dim));
    ev.rank = rank(Matrix::from_columns(all, dim)) - rb;
    res.degrees[deg] = ev;
    if (ev.rank == ev.source_dim && ev.rank == ev.target_dim) continue;
    res.value = false;
    if (res.witness) continue;
    if (ev.rank < ev.source_dim) {
      // A combination of source classes mapping to a coboundary.
      for (const auto& v : nullspace(Matrix::from_columns(all, dim))) {
        Element w = cs.algebra()->zero();
        for (std::size_t k = 0; k < images.size(); ++k) {
          w += v[k] * hs.representatives[deg][k];
        }
        if (!w.is_zero()) {
          res.witness = w;
          res.note = "class [" + w.str() + "] in degree " + std::to_string(deg) + " maps to zero";
          break;
        }
      }
    } else {
      SpanBuilder span(dim);
      for (const auto& v : all) span.add(v);
      for (const auto& z : ht.representatives[deg]) {
        if (!span.contains(*ct.coords(deg, z))) {
          res.witness = z;
          res.note = "class [" + z.str() + "] in degree " + std::to_string(deg) + " is not hit";
          break;
        }
      }
    }
  }
  if (res.value) res.note = "cohomology isomorphic in " + t.str();
  return res;
}

bool is_isomorphism_over_q(const Morphism& f, const Truncation& t, std::string* note) {
  const AlgPtr& s = f.source();
  const AlgPtr& g = f.target();
  auto say = [&](const std::string& msg) {
    if (note) *note = msg;
  };
  bool linear = s->relations().empty() && g->relations().empty();
  for (int i = 0; i < s->size() && linear; ++i) {
    for (const auto& [m, c] : f.image(i).terms()) {
      if (g->word_length(m) != 1 || g->degree(m) != s->generators()[i].degree) linear = false;
    }
  }
  if (linear) {
    // Linear substitution of free generators: bijective iff each degree's
    // matrix is square and invertible.
    std::map<int, std::vector<int>> src_by_deg;
    std::map<int, std::vector<int>> tgt_by_deg;
    for (int i : s->nonbase_indices()) src_by_deg[s->generators()[i].degree].push_back(i);
    for (int i : g->nonbase_indices()) tgt_by_deg[g->generators()[i].degree].push_back(i);
    if (src_by_deg.size() != tgt_by_deg.size()) {
      say("generator degrees differ");
      return false;
    }
    for (const auto& [deg, gens] : src_by_deg) {
      const auto& tg = tgt_by_deg[deg];
      if (tg.size() != gens.size()) {
        say("different number of generators in degree " + std::to_string(deg));
        return false;
      }
      Matrix m(tg.size(), gens.size());
      for (std::size_t c = 0; c < gens.size(); ++c) {
        for (std::size_t r = 0; r < tg.size(); ++r) {
          Monomial mono = g->unit_monomial();
          mono[tg[r]] = 1;
          m.at(r, c) = f.image(gens[c]).coefficient(mono);
        }
      }
      if (rank(m) != gens.size()) {
        say("linear part singular in degree " + std::to_string(deg));
        return false;
      }
    }
    say("linear substitution with invertible matrices");
    return true;
  }
  Truncation tt = t;
  tt.infer_weight = false;
  FiniteComplex cs = extract_complex(s, tt);
  FiniteComplex ct = extract_complex(g, tt);
  for (int deg = t.lo; deg <= t.hi; ++deg) {
    const auto& b = cs.basis(deg);
    const std::size_t dim = ct.basis(deg).size();
    if (b.size() != dim) {
      say("dimensions differ in degree " + std::to_string(deg) + " within " + t.str());
      return false;
    }
    std::vector<Vec> cols;
    for (const auto& m : b) {
      auto v = ct.coords(deg, f.apply(s->monomial(m)));
      if (!v) {
        say("images leave " + t.str() + "; undecided");
        return false;
      }
      cols.push_back(*v);
    }
    if (rank(Matrix::from_columns(cols, dim)) != dim) {
      say("not bijective in degree " + std::to_string(deg));
      return false;
    }
  }
  say("bijective degreewise within " + t.str());
  return true;
}

std::string verdict_name(NakayamaVerdict v) {
  switch (v) {
    case NakayamaVerdict::iso:
      return "iso";
    case NakayamaVerdict::weak_equivalence:
      return "weak_equivalence";
    case NakayamaVerdict::neither:
      return "neither";
  }
  return "neither";
}

json NakayamaResult::to_json() const {
  return {{"verdict", verdict_name(verdict)},
          {"reduced_iso", reduced_iso},
          {"reduced_quasi_iso", reduced_quasi_iso.to_json()},
          {"note", note}};
}

NakayamaResult nakayama_check(const Morphism& f, const Truncation& t) {
  if (!f.source()->graded_free_over_base() || !f.target()->graded_free_over_base()) {
    throw Error("NotFlatCertificate", "relations mix base and algebra generators");
  }
  if (f.source()->base() != f.target()->base()) {
    throw Error("NotFlatCertificate", "source and target live over different bases");
  }
  Morphism red = f.source()->base() ? reduce_morphism(f) : f;
  NakayamaResult res;
  std::string note;
  res.reduced_iso = is_isomorphism_over_q(red, t, &note);
  res.reduced_quasi_iso = is_quasi_iso(red, t);
  if (res.reduced_iso) {
    res.verdict = NakayamaVerdict::iso;
  } else if (res.reduced_quasi_iso.value) {
    res.verdict = NakayamaVerdict::weak_equivalence;
  } else {
    res.verdict = NakayamaVerdict::neither;
  }
  res.note = note;
  return res;
}

}  // namespace dgdef
