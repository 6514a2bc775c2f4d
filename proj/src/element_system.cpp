#include "dgdef/element_system.hpp"

#include <map>

#include "dgdef/errors.hpp"
#include "dgdef/morphism.hpp"

namespace dgdef {

void ElementSystem::require(const std::vector<Element>& columns, const Element& rhs) {
  if (columns.size() != n_) throw Error("DimensionMismatch", "wrong number of columns");
  AlgPtr alg;
  for (const auto& c : columns) {
    if (c.algebra()) alg = c.algebra();
  }
  if (!alg) alg = rhs.algebra();
  std::map<Monomial, std::size_t> index;
  auto slot = [&](const Monomial& m) {
    auto [it, fresh] = index.emplace(m, index.size());
    if (fresh) {
      rows_.emplace_back(n_);
      rhs_.emplace_back(0);
    }
    return rows_.size() - index.size() + it->second;
  };
  for (std::size_t k = 0; k < n_; ++k) {
    const Element& c = columns[k];
    if (c.is_zero()) continue;
    Element x = (c.algebra() == alg) ? c : transport(c, alg);
    for (const auto& [m, q] : x.terms()) rows_[slot(m)][k] = q;
  }
  if (!rhs.is_zero()) {
    Element r = (!alg || rhs.algebra() == alg) ? rhs : transport(rhs, alg);
    for (const auto& [m, q] : r.terms()) rhs_[slot(m)] = q;
  }
}

Matrix ElementSystem::matrix() const { return Matrix::from_rows(rows_, n_); }

std::optional<Vec> ElementSystem::solve() const {
  if (rows_.empty()) return Vec(n_);
  return dgdef::solve(matrix(), rhs_);
}

std::vector<Vec> ElementSystem::kernel() const {
  if (rows_.empty()) {
    std::vector<Vec> out;
    for (std::size_t k = 0; k < n_; ++k) {
      Vec v(n_);
      v[k] = 1;
      out.push_back(v);
    }
    return out;
  }
  return nullspace(matrix());
}

Element combine(const AlgPtr& alg, const std::vector<Element>& elems, const Vec& v) {
  Element out = alg->zero();
  for (std::size_t k = 0; k < elems.size(); ++k) {
    if (sgn(v[k]) != 0) out += v[k] * elems[k];
  }
  return out;
}

std::vector<Element> candidates(const AlgPtr& a, int degree, int max_wordlen) {
  std::vector<Element> out;
  for (const auto& m : a->basis(degree, max_wordlen)) out.push_back(a->monomial(m));
  return out;
}

std::vector<Element> apply_all(const Morphism& f, const std::vector<Element>& xs) {
  std::vector<Element> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(f.apply(x));
  return out;
}

std::vector<Element> diff_all(const std::vector<Element>& xs) {
  std::vector<Element> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(d(x));
  return out;
}

Vec MonomialIndex::coords(const Element& e) const {
  Vec v(index_.size());
  for (const auto& [m, c] : e.terms()) v[index_.at(m)] = c;
  return v;
}

}  // namespace dgdef
