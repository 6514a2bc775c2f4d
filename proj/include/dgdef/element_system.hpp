#ifndef DGDEF_ELEMENT_SYSTEM_HPP
#define DGDEF_ELEMENT_SYSTEM_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "dgdef/algebra.hpp"
#include "dgdef/linalg.hpp"

namespace dgdef {

// Linear equations on the coefficients x_k of a fixed list of unknown
// directions. Each requirement reads sum_k x_k * columns[k] = rhs,
// compared monomial by monomial.
class ElementSystem {
 public:
  explicit ElementSystem(std::size_t unknowns) : n_(unknowns) {}

  void require(const std::vector<Element>& columns, const Element& rhs);
  std::size_t unknowns() const { return n_; }
  std::size_t equations() const { return rows_.size(); }

  std::optional<Vec> solve() const;
  std::vector<Vec> kernel() const;

 private:
  Matrix matrix() const;
  std::size_t n_;
  std::vector<Vec> rows_;
  Vec rhs_;
};

// sum_k v_k * elems[k]
Element combine(const AlgPtr& alg, const std::vector<Element>& elems, const Vec& v);

// Standard monomials of a degree (word length <= L) as elements.
std::vector<Element> candidates(const AlgPtr& a, int degree, int max_wordlen);

class Morphism;
std::vector<Element> apply_all(const Morphism& f, const std::vector<Element>& xs);
std::vector<Element> diff_all(const std::vector<Element>& xs);

// Coordinates over a growing monomial index.
class MonomialIndex {
 public:
  std::size_t slot(const Monomial& m) { return index_.emplace(m, index_.size()).first->second; }
  void add(const Element& e) {
    for (const auto& [m, c] : e.terms()) slot(m);
  }
  Vec coords(const Element& e) const;
  std::size_t size() const { return index_.size(); }

 private:
  std::map<Monomial, std::size_t> index_;
};

}  // namespace dgdef

#endif
