#ifndef DGDEF_DERIVATION_HPP
#define DGDEF_DERIVATION_HPP

#include <optional>
#include <string>
#include <vector>

#include "dgdef/algebra.hpp"
#include "dgdef/morphism.hpp"

namespace dgdef {

// Graded derivation D: S -> T of degree n along an algebra map phi: S -> T,
// D(ab) = D(a) phi(b) + (-1)^{n|a|} phi(a) D(b). Determined by its values on
// the non-base generators of S; base generators are sent to zero. Without
// phi, S and T share generator names and phi is the transport.
class Derivation {
 public:
  Derivation() = default;
  Derivation(AlgPtr source, AlgPtr target, int degree, std::vector<Element> values,
             std::optional<Morphism> along = std::nullopt);
  static Derivation zero(const AlgPtr& source, const AlgPtr& target, int degree,
                         std::optional<Morphism> along = std::nullopt);
  // Values given by generator name; missing generators map to zero.
  static Derivation from_map(const AlgPtr& source, const AlgPtr& target, int degree,
                             const std::map<std::string, Element>& values,
                             std::optional<Morphism> along = std::nullopt);

  const AlgPtr& source() const { return src_; }
  const AlgPtr& target() const { return tgt_; }
  int degree() const { return degree_; }
  const std::vector<Element>& values() const { return values_; }
  const Element& value(int i) const { return values_[i]; }
  const Element& value(const std::string& gen) const;
  const std::optional<Morphism>& along() const { return along_; }
  bool is_zero() const;

  Element apply(const Element& a) const;
  Element operator()(const Element& a) const { return apply(a); }

  Derivation operator+(const Derivation& o) const;
  Derivation operator-(const Derivation& o) const;
  Derivation scaled(const Rational& q) const;
  bool operator==(const Derivation& o) const;
  bool operator!=(const Derivation& o) const { return !(*this == o); }
  std::string str() const;

 private:
  Element phi(const Element& a) const;
  AlgPtr src_;
  AlgPtr tgt_;
  int degree_ = 0;
  std::vector<Element> values_;
  std::optional<Morphism> along_;
};

}  // namespace dgdef

#endif
