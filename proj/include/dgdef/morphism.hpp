#ifndef DGDEF_MORPHISM_HPP
#define DGDEF_MORPHISM_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dgdef/algebra.hpp"

namespace dgdef {

// Algebra map determined by generator images. Base generators go to the
// same-named target generator, or to zero when the target lacks it.
class Morphism {
 public:
  Morphism() = default;
  Morphism(AlgPtr source, AlgPtr target, std::vector<Element> images, bool chain_map);

  const AlgPtr& source() const { return src_; }
  const AlgPtr& target() const { return tgt_; }
  const std::vector<Element>& images() const { return images_; }
  const Element& image(int i) const { return images_[i]; }
  const Element& image(const std::string& gen) const;
  bool chain_map() const { return chain_map_; }

  Element apply(const Element& a) const;
  Element operator()(const Element& a) const { return apply(a); }
  std::string str() const;

 private:
  AlgPtr src_;
  AlgPtr tgt_;
  std::vector<Element> images_;
  bool chain_map_ = false;
  std::shared_ptr<std::map<Monomial, Element>> memo_;
};

using ImageMap = std::map<std::string, Element>;

// Images of non-base generators are required; elements may live in any
// algebra sharing generator names with the target.
Morphism make_morphism(const AlgPtr& source, const AlgPtr& target, const ImageMap& images);
Morphism make_morphism(const AlgPtr& source, const AlgPtr& target,
                       const std::map<std::string, std::string>& images);
// Degree- and relation-preserving algebra map without the chain-map check.
Morphism make_graded_map(const AlgPtr& source, const AlgPtr& target, const ImageMap& images);

Morphism identity(const AlgPtr& a);
Morphism compose(const Morphism& g, const Morphism& f);  // g after f

// First generator where d f - f d is nonzero.
std::optional<std::pair<std::string, Element>> chain_defect(const Morphism& f);
bool same_on_generators(const Morphism& f, const Morphism& g);

struct Pushout {
  AlgPtr algebra;
  Morphism from_x;
  Morphism from_b;
};
// X ⊗_A B for f: A -> X and g: A -> B. X generators that clash with B
// names get a trailing apostrophe.
Pushout pushout(const Morphism& f, const Morphism& g);

struct BaseChange {
  AlgPtr algebra;
  Morphism map;  // r -> r ⊗ new base (by generator name)
};
// Rebuilds r over new_base: reduction modulo the maximal ideal (nullptr),
// a quotient with the same base generator names, or tensoring a Q-algebra up.
BaseChange change_base(const AlgPtr& r, const ArtinPtr& new_base);
BaseChange reduction(const AlgPtr& r);
// f ⊗ new_base between the rebuilt source and target.
Morphism change_base(const Morphism& f, const AlgPtr& new_source, const AlgPtr& new_target);

struct NewGenerator {
  std::string name;
  int degree = 0;
  // Differential as an element of any algebra sharing generator names with
  // the extension, or as text parsed in the extension.
  std::optional<Element> diff;
  std::string diff_text;
};

struct Extension {
  AlgPtr algebra;
  Morphism inclusion;
};
// a[new generators] with the differential extended; relations are kept.
Extension adjoin(const AlgPtr& a, const std::vector<NewGenerator>& gens, Regime regime);
Extension adjoin(const AlgPtr& a, const std::vector<NewGenerator>& gens);

}  // namespace dgdef

#endif
