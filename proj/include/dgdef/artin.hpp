#ifndef DGDEF_ARTIN_HPP
#define DGDEF_ARTIN_HPP

#include <cstddef>
#include <vector>

#include "dgdef/algebra.hpp"
#include "dgdef/linalg.hpp"

namespace dgdef {

// Finite-dimensional local DG-algebra in non-positive degrees with residue
// field ℚ. Wraps a presentation whose generators are all flagged base and
// keeps the linear-algebra view of it.
class ArtinRing {
 public:
  static ArtinPtr make(const AlgPtr& presentation);
  static ArtinPtr from_text(const std::string& text);

  const AlgPtr& presentation() const { return pres_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<Monomial>& basis() const { return basis_; }
  int basis_degree(std::size_t k) const;
  std::size_t unit_index() const { return unit_; }
  std::vector<std::size_t> maximal_ideal() const;

  Vec coords(const Element& a) const;
  Element element(const Vec& v) const;
  Element basis_element(std::size_t k) const;
  // Structure constants: basis_k * basis_l expressed in the basis.
  const Vec& product(std::size_t k, std::size_t l) const;
  const Matrix& d_matrix() const { return dmat_; }

  // Smallest n with m^n = 0.
  int nilpotency_index() const { return nilpotency_; }
  bool square_zero() const { return nilpotency_ <= 2; }
  bool in_socle(const Element& v) const;
  ArtinPtr quotient_by_socle(const Element& t) const;

 private:
  AlgPtr pres_;
  std::vector<Monomial> basis_;
  std::map<Monomial, std::size_t> index_;
  std::size_t unit_ = 0;
  std::vector<std::vector<Vec>> table_;
  Matrix dmat_;
  int nilpotency_ = 1;
};

struct SmallExtension {
  ArtinPtr total;
  ArtinPtr quotient;
  Element t;       // spans the kernel, lives in total
  int degree = 0;  // deg t
};

// Factors A -> A/J into small extensions. J is the ideal generated by the
// given homogeneous elements. Steps run from A downwards.
std::vector<SmallExtension> small_extension_tower(const ArtinPtr& a,
                                                  const std::vector<Element>& kernel);

// Algebra over the residue field (null base) is represented by nullptr.
bool is_rational_base(const ArtinPtr& a);

}  // namespace dgdef

#endif
