#include "dgdef/artin.hpp"

#include <algorithm>

#include "dgdef/errors.hpp"

namespace dgdef {

namespace {

// Same presentation with every generator flagged base.
AlgPtr as_base_presentation(const AlgPtr& p, const std::vector<Element>& extra_socle = {}) {
  DGAlgebra::Builder b;
  b.label(p->label());
  for (const auto& g : p->generators()) b.base_gen(g.name, g.degree);
  for (int i = 0; i < p->size(); ++i) {
    if (!p->diff(i).is_zero()) b.diff(p->generators()[i].name, p->diff(i));
  }
  for (const auto& r : p->relations()) b.rel(r);
  for (const auto& s : p->socle_rules()) b.socle_rule(s);
  for (const auto& s : extra_socle) b.socle_rule(s);
  return b.build();
}

}  // namespace

bool is_rational_base(const ArtinPtr& a) { return !a || a->dim() == 1; }

ArtinPtr ArtinRing::make(const AlgPtr& presentation) {
  AlgPtr pres = presentation;
  bool all_base = true;
  for (const auto& g : pres->generators()) all_base = all_base && g.base;
  if (!all_base) pres = as_base_presentation(pres);
  if (pres->base()) throw Error("ResidueNotField", "presentation must be over Q");

  auto ring = std::shared_ptr<ArtinRing>(new ArtinRing());
  ring->pres_ = pres;
  const int n = pres->size();
  int lo = 0;
  for (int i = 0; i < n; ++i) {
    const auto& g = pres->generators()[i];
    int bound = pres->base_exponent_bound(i);
    if (bound >= 64) {
      if (g.degree == 0) {
        throw Error("ResidueNotField", g.name + " is not nilpotent");
      }
      throw Error("NotFiniteDimensional", g.name + " is not nilpotent");
    }
    if (g.degree > 0) throw Error("NonpositiveViolation", g.name);
    lo += bound * g.degree;
  }
  for (int deg = 0; deg >= lo; --deg) {
    for (const auto& m : pres->basis(deg, 0)) ring->basis_.push_back(m);
  }
  for (std::size_t k = 0; k < ring->basis_.size(); ++k) {
    ring->index_.emplace(ring->basis_[k], k);
    if (ring->basis_[k] == pres->unit_monomial()) ring->unit_ = k;
  }
  if (ring->index_.count(pres->unit_monomial()) == 0) {
    throw Error("ResidueNotField", "presentation collapses to the zero ring");
  }
  const std::size_t dim = ring->basis_.size();
  ring->table_.assign(dim, std::vector<Vec>(dim));
  for (std::size_t k = 0; k < dim; ++k) {
    Element bk = ring->basis_element(k);
    for (std::size_t l = 0; l < dim; ++l) {
      ring->table_[k][l] = ring->coords(bk * ring->basis_element(l));
    }
  }
  ring->dmat_ = Matrix(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    Vec c = ring->coords(d(ring->basis_element(k)));
    if (k != ring->unit_ && sgn(c[ring->unit_]) != 0) {
      throw Error("ResidueNotField", "the differential leaves the maximal ideal");
    }
    for (std::size_t r = 0; r < dim; ++r) ring->dmat_.at(r, k) = c[r];
  }
  // Powers of the maximal ideal until they vanish.
  std::vector<Vec> power;
  for (auto k : ring->maximal_ideal()) {
    Vec v(dim);
    v[k] = 1;
    power.push_back(v);
  }
  int index = 1;
  while (!power.empty()) {
    ++index;
    SpanBuilder next(dim);
    std::vector<Vec> gens;
    for (auto k : ring->maximal_ideal()) {
      for (const auto& v : power) {
        Vec prod(dim);
        for (std::size_t l = 0; l < dim; ++l) {
          if (sgn(v[l]) == 0) continue;
          const Vec& kl = ring->table_[k][l];
          for (std::size_t r = 0; r < dim; ++r) prod[r] += v[l] * kl[r];
        }
        if (next.add(prod)) gens.push_back(prod);
      }
    }
    power = std::move(gens);
  }
  ring->nilpotency_ = ring->maximal_ideal().empty() ? 1 : index;
  return ring;
}

int ArtinRing::basis_degree(std::size_t k) const { return pres_->degree(basis_[k]); }

std::vector<std::size_t> ArtinRing::maximal_ideal() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    if (k != unit_) out.push_back(k);
  }
  return out;
}

Vec ArtinRing::coords(const Element& a) const {
  Element x = a.algebra() == pres_ ? a : transport(a, pres_);
  Vec v(dim());
  for (const auto& [m, c] : x.terms()) {
    auto it = index_.find(m);
    if (it == index_.end()) throw Error("NotFiniteDimensional", "monomial outside the basis");
    v[it->second] = c;
  }
  return v;
}

Element ArtinRing::element(const Vec& v) const {
  Terms t;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (sgn(v[k]) != 0) t.emplace(basis_[k], v[k]);
  }
  return Element::from_normal(pres_, std::move(t));
}

Element ArtinRing::basis_element(std::size_t k) const { return pres_->monomial(basis_[k]); }

const Vec& ArtinRing::product(std::size_t k, std::size_t l) const { return table_[k][l]; }

bool ArtinRing::in_socle(const Element& v) const {
  Element x = transport(v, pres_);
  for (int i = 0; i < pres_->size(); ++i) {
    if (!(pres_->gen(i) * x).is_zero()) return false;
  }
  return true;
}

ArtinPtr ArtinRing::quotient_by_socle(const Element& t) const {
  Element x = transport(t, pres_);
  if (!x.is_homogeneous() || x.is_zero()) throw Error("NotSocle", "t must be nonzero and homogeneous");
  if (!in_socle(x)) throw Error("NotSocle", x.str() + " is not annihilated by the maximal ideal");
  if (!d(x).is_zero()) throw Error("NotSocle", x.str() + " is not a cocycle");
  return make(as_base_presentation(pres_, {x}));
}

std::vector<SmallExtension> small_extension_tower(const ArtinPtr& a,
                                                  const std::vector<Element>& kernel) {
  std::vector<SmallExtension> steps;
  ArtinPtr cur = a;
  std::vector<Element> gens;
  for (const auto& k : kernel) {
    Element x = transport(k, a->presentation());
    gens.push_back(x);
    gens.push_back(d(x));
  }
  for (;;) {
    const std::size_t dim = cur->dim();
    // J as a subspace: products of basis elements with the ideal generators.
    SpanBuilder span(dim);
    std::vector<Vec> jbasis;
    for (const auto& g : gens) {
      Element x = transport(g, cur->presentation());
      for (std::size_t k = 0; k < dim; ++k) {
        Vec v = cur->coords(cur->basis_element(k) * x);
        if (span.add(v)) jbasis.push_back(v);
      }
    }
    if (jbasis.empty()) break;
    if (jbasis.size() == dim) throw Error("NotSurjective", "kernel contains the unit");
    // Homogeneous pieces of J, degrees ascending.
    std::map<int, std::vector<Vec>> by_degree;
    {
      std::map<int, SpanBuilder> pieces;
      for (const auto& v : jbasis) {
        std::map<int, Vec> split;
        for (std::size_t k = 0; k < dim; ++k) {
          if (sgn(v[k]) == 0) continue;
          int deg = cur->basis_degree(k);
          auto& w = split.try_emplace(deg, Vec(dim)).first->second;
          w[k] = v[k];
        }
        for (auto& [deg, w] : split) {
          auto& sb = pieces.try_emplace(deg, SpanBuilder(dim)).first->second;
          if (sb.add(w)) by_degree[deg].push_back(w);
        }
      }
    }
    std::optional<Element> chosen;
    for (const auto& [deg, vs] : by_degree) {
      // Solve for combinations annihilated by every generator.
      std::vector<Vec> rows;
      const AlgPtr& p = cur->presentation();
      Matrix m(static_cast<std::size_t>(p->size()) * dim, vs.size());
      for (std::size_t c = 0; c < vs.size(); ++c) {
        Element v = cur->element(vs[c]);
        for (int g = 0; g < p->size(); ++g) {
          Vec prod = cur->coords(p->gen(g) * v);
          for (std::size_t r = 0; r < dim; ++r) m.at(g * dim + r, c) = prod[r];
        }
      }
      auto null = nullspace(m);
      if (null.empty()) continue;
      Vec v(dim);
      for (std::size_t c = 0; c < vs.size(); ++c) {
        for (std::size_t r = 0; r < dim; ++r) v[r] += null.front()[c] * vs[c][r];
      }
      Element t = cur->element(v);
      Element dt = d(t);
      chosen = dt.is_zero() ? t : dt;
      break;
    }
    if (!chosen) throw Error("NotSurjective", "kernel has no socle element");
    SmallExtension step;
    step.total = cur;
    step.t = *chosen;
    step.degree = *chosen->degree();
    step.quotient = cur->quotient_by_socle(*chosen);
    steps.push_back(step);
    cur = step.quotient;
  }
  return steps;
}

}  // namespace dgdef
