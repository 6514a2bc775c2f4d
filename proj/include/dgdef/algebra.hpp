#ifndef DGDEF_ALGEBRA_HPP
#define DGDEF_ALGEBRA_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dgdef/rational.hpp"

namespace dgdef {

struct Generator {
  std::string name;
  int degree = 0;
  bool base = false;  // belongs to the DG-Artin coefficient ring
};

// Exponent vector indexed by the algebra's generator order.
using Monomial = std::vector<int>;
using Terms = std::map<Monomial, Rational>;

enum class Regime { nonpositive, unbounded };

class DGAlgebra;
class ArtinRing;
using AlgPtr = std::shared_ptr<const DGAlgebra>;
using ArtinPtr = std::shared_ptr<const ArtinRing>;

class Element {
 public:
  Element() = default;
  explicit Element(AlgPtr alg) : alg_(std::move(alg)) {}
  // Reduces to normal form.
  Element(AlgPtr alg, Terms terms);
  // Wraps terms already in normal form.
  static Element from_normal(AlgPtr alg, Terms terms);

  const AlgPtr& algebra() const { return alg_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_homogeneous() const;
  // Degree of a nonzero homogeneous element.
  std::optional<int> degree() const;
  int word_length() const;
  Rational coefficient(const Monomial& m) const;

  Element operator-() const;
  Element& operator+=(const Element& o);
  Element& operator-=(const Element& o);
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(const Element& a, const Element& b);
  friend Element operator*(const Rational& q, const Element& a);
  bool operator==(const Element& o) const;
  bool operator!=(const Element& o) const { return !(*this == o); }

  Element pow(int n) const;
  std::string str() const;

 private:
  AlgPtr alg_;
  Terms terms_;
};

Element d(const Element& a);

// Graded-commutative algebra on named generators with a differential and
// supported relations. Immutable once built.
class DGAlgebra : public std::enable_shared_from_this<DGAlgebra> {
 public:
  class Builder;

  const std::vector<Generator>& generators() const { return gens_; }
  int size() const { return static_cast<int>(gens_.size()); }
  std::optional<int> find(const std::string& name) const;
  int index(const std::string& name) const;
  bool odd(int i) const { return (gens_[i].degree % 2) != 0; }
  Regime regime() const { return regime_; }
  const ArtinPtr& base() const { return base_; }
  const std::string& label() const { return label_; }
  std::vector<int> nonbase_indices() const;
  std::vector<int> base_indices() const;

  int degree(const Monomial& m) const;
  int word_length(const Monomial& m) const;  // non-base exponents only
  bool is_base_monomial(const Monomial& m) const;
  Monomial unit_monomial() const { return Monomial(gens_.size(), 0); }

  Element zero() const;
  Element one() const;
  Element scalar(const Rational& q) const;
  Element gen(const std::string& name) const;
  Element gen(int i) const;
  Element monomial(const Monomial& m) const;
  Element parse(const std::string& expr) const;

  Element diff(int i) const;
  Element differentiate(const Element& a) const;

  // Declared relations plus those added by d-closure, as free representatives.
  std::vector<Element> relations() const;
  std::vector<Element> socle_rules() const;
  const std::vector<Terms>& groebner_basis() const { return gb_; }
  const std::vector<Monomial>& monomial_relations() const { return mono_rels_; }
  bool has_nonbase_relations() const;
  // Relations never mention base generators: A ⊗ (ℚ-algebra), free over A.
  bool graded_free_over_base() const;

  // Normal form of an arbitrary combination of exponent vectors.
  Terms reduce(Terms t) const;
  bool is_standard(const Monomial& m) const;
  // Koszul-signed product of exponent vectors; nullopt when an odd
  // generator would square.
  std::optional<std::pair<int, Monomial>> multiply(const Monomial& a,
                                                    const Monomial& b) const;

  // Standard monomials of the given degree with word length <= max_wordlen.
  std::vector<Monomial> basis(int degree, int max_wordlen) const;

  std::string monomial_str(const Monomial& m) const;
  // Maximal exponent a base generator can carry before vanishing.
  int base_exponent_bound(int i) const;

 private:
  DGAlgebra() = default;
  AlgPtr self() const { return shared_from_this(); }
  void classify_relation(const Terms& r);
  void rebuild_groebner();
  void rebuild_socle();
  Terms multiply_terms(const Terms& a, const Terms& b) const;
  Terms differentiate_terms(const Terms& a) const;
  const Terms& differentiate_monomial(const Monomial& m) const;
  bool grevlex_greater(const Monomial& a, const Monomial& b) const;
  Monomial leading(const Terms& p) const;
  Terms gb_reduce_full(Terms p, const std::vector<Terms>& g) const;

  std::string label_;
  std::vector<Generator> gens_;
  std::map<std::string, int> index_;
  Regime regime_ = Regime::nonpositive;
  ArtinPtr base_;
  std::vector<int> zero_even_;  // degree-0 generators, the Groebner variables
  std::vector<Terms> diffs_;
  std::vector<Terms> relations_;
  std::vector<Terms> gb_input_;
  std::vector<Terms> gb_;
  std::vector<Monomial> gb_leads_;
  std::vector<Monomial> mono_rels_;
  std::vector<Terms> socle_input_;
  std::vector<Terms> socle_rules_;  // monic, interreduced
  std::vector<Monomial> socle_leads_;
  std::vector<int> base_bounds_;
  mutable std::map<Monomial, Terms> dcache_;
};

// Builds an algebra. Differentials and relations may be given as text or as
// elements of another algebra; the latter are transported by generator name.
class DGAlgebra::Builder {
 public:
  explicit Builder(ArtinPtr base = nullptr, Regime regime = Regime::nonpositive);

  Builder& label(std::string l);
  Builder& gen(const std::string& name, int degree);
  Builder& diff(const std::string& name, const std::string& expr);
  Builder& diff(const std::string& name, const Element& value);
  Builder& rel(const std::string& expr);
  Builder& rel(const Element& value);
  Builder& socle_rule(const Element& value);
  // Generators flagged as base without an ArtinRing (used for presentations
  // of Artin rings themselves).
  Builder& base_gen(const std::string& name, int degree);
  // Elements from other algebras drop terms whose generators are missing.
  Builder& drop_missing(bool on = true);

  AlgPtr build() const;

 private:
  struct Value {
    std::string text;
    std::optional<Element> elem;
  };
  ArtinPtr base_;
  Regime regime_;
  std::string label_;
  std::vector<Generator> gens_;
  std::vector<std::pair<std::string, Value>> diffs_;
  std::vector<Value> rels_;
  std::vector<Element> socle_;
  bool drop_missing_ = false;
};

// Maps an element to another algebra by generator name. Generators missing in
// the target map to zero when zero_missing is set, otherwise throw.
Element transport(const Element& a, const AlgPtr& target, bool zero_missing = false);

// Substitutes generator images (indexed by source generator) into a.
Element substitute(const Element& a, const std::vector<Element>& images);

}  // namespace dgdef

#endif
