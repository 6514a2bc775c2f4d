#ifndef DGDEF_DEFORMATIONS_HPP
#define DGDEF_DEFORMATIONS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dgdef/artin.hpp"
#include "dgdef/complex.hpp"
#include "dgdef/derivation.hpp"
#include "dgdef/idempotents.hpp"
#include "dgdef/linalg.hpp"
#include "json.hpp"

namespace dgdef {

// δη = d η - (-1)^{|η|} η d, along η's algebra map.
Derivation delta(const Derivation& eta);
// [η, θ] = η θ - (-1)^{|η||θ|} θ η for endomorphic derivations.
Derivation bracket(const Derivation& eta, const Derivation& theta);

// Truncated Der*(B, M) along p: B -> M. Basis in each degree: elementary
// derivations g -> m on non-base generators g. When weights make d
// homogeneous the cut is by weight shift <= word_length_max (closed under δ);
// otherwise by word length, with closure checked.
class DerivationComplex {
 public:
  const AlgPtr& source() const { return src_; }
  const AlgPtr& target() const { return tgt_; }
  const Truncation& truncation() const { return trunc_; }
  const std::string& mode() const { return mode_; }
  const std::vector<Derivation>& basis(int degree) const;
  const Matrix& boundary(int degree) const;  // degree -> degree + 1
  std::optional<Vec> coords(const Derivation& eta) const;
  Derivation element(int degree, const Vec& v) const;
  std::map<int, std::size_t> cohomology_dims() const;
  nlohmann::json to_json() const;

 private:
  friend DerivationComplex derivation_complex(const AlgPtr&, const AlgPtr&, const std::optional<Morphism>&,
                                              const Truncation&);
  AlgPtr src_;
  AlgPtr tgt_;
  std::optional<Morphism> along_;
  Truncation trunc_;
  std::string mode_;
  std::map<int, std::vector<Derivation>> basis_;
  std::map<int, std::map<std::pair<int, Monomial>, std::size_t>> index_;
  std::map<int, Matrix> boundary_;
};

// Raises TruncationNotClosed when δ leaves the truncated basis.
DerivationComplex derivation_complex(const AlgPtr& b, const AlgPtr& m, const std::optional<Morphism>& along,
                                     const Truncation& t);
// Der*(R, R), with bracket() as its Lie structure.
DerivationComplex derivation_lie(const AlgPtr& r, const Truncation& t);

struct MCResult {
  bool value = false;
  std::map<std::string, Element> defect;  // nonzero defects by generator
  std::string method;
  nlohmann::json to_json() const;
};

// ξ: degree-1 derivation of R ⊗ A with coefficients in R ⊗ m_A.
// Raises CoefficientNotNilpotent otherwise.
void require_nilpotent(const Derivation& xi, const ArtinPtr& a);
// (d + ξ)^2 on every generator.
MCResult mc_check(const Derivation& xi, const ArtinPtr& a);
// δξ + 1/2 [ξ, ξ] on every generator.
MCResult mc_check_bracket(const Derivation& xi, const ArtinPtr& a);

struct StrictDeformation {
  AlgPtr total;            // R ⊗ A with differential d_R + ξ
  Morphism comparison;     // total ⊗ Q -> R, an isomorphism
  bool reduction_iso = false;
  ReductionCofibration cofibration;  // of A -> total
  nlohmann::json to_json() const;
};

// Raises NotMC.
StrictDeformation psi1_deform(const AlgPtr& r, const ArtinPtr& a, const Derivation& xi,
                              const Truncation& t = Truncation::window(-3, 0, 4));

// exp(±θ) applied to an element, summed until the terms vanish.
Element exp_apply(const Derivation& theta, const Element& x, int sign = 1);

struct GaugeResult {
  Derivation xi;
  Morphism exp_theta;
  Morphism exp_minus_theta;
  bool automorphism = false;  // exp(θ) exp(-θ) = id = exp(-θ) exp(θ)
  bool mc = false;
  nlohmann::json to_json() const;
};

// New differential exp(θ) (d + ξ) exp(-θ) = d + ξ'. Raises NotNilpotent.
GaugeResult gauge_transform(const Derivation& theta, const Derivation& xi, const ArtinPtr& a);

struct GaugeEquivalence {
  bool value = false;
  bool conclusive = false;  // a negative answer is certified within the truncation
  std::optional<Derivation> theta;
  std::string note;
  nlohmann::json to_json() const;
};

// Solves for θ along the m_A-adic filtration; the witness is the logarithm of
// the composed automorphism and is re-verified exactly.
GaugeEquivalence are_gauge_equivalent(const Derivation& xi1, const Derivation& xi2, const ArtinPtr& a,
                                      int max_wordlen = 4);

struct TangentReport {
  std::map<int, std::size_t> dims;
  AlgPtr resolution;
  std::string truncation;
  nlohmann::json to_json() const;
};

// H^n of Der*(R, X) for R the depth-limited Tate resolution of X.
TangentReport tangent_obstruction_dims(const AlgPtr& x, int depth, const std::vector<int>& degrees,
                                       int max_wordlen = 6);

struct H0Deformation {
  AlgPtr h0;  // A[degree-0 generators] / (d of degree -1 generators)
  std::size_t dim_total = 0;
  std::size_t dim_reduced = 0;
  std::size_t dim_base = 0;
  bool finite = false;
  bool flat = false;  // free over A: dim_total = dim_base * dim_reduced
  nlohmann::json to_json() const;
};

// Requires A concentrated in degree 0 (NotDegreeZero).
H0Deformation h0_compare(const StrictDeformation& d, int max_wordlen = 12);
// Same ideal in a presentation over the same base (both directions reduce to zero).
bool same_ideal(const AlgPtr& a, const AlgPtr& b);

enum class HilbertSchapsVerdict { liftable_via_matrix, not_in_matrix_image };
std::string verdict_name(HilbertSchapsVerdict v);

struct HilbertSchapsResult {
  std::vector<Element> minors;
  bool minors_match = false;
  std::size_t perturbation_rank = 0;
  bool perturbations_in_maximal_ideal = false;
  std::vector<Element> first_order;  // candidate's first-order terms
  HilbertSchapsVerdict verdict = HilbertSchapsVerdict::not_in_matrix_image;
  nlohmann::json to_json() const;
};

// g: 2 x 3 matrix over a polynomial ring P in degree-0 generators; ideal:
// generators of an ideal of P; candidate: deformed generators over P ⊗ Q[eps]/(eps^2)
// given as text in P's variables and eps. Entry perturbations range over
// monomials of word length <= support. Raises MinorIdealMismatch.
HilbertSchapsResult hilbert_schaps_check(const std::vector<std::vector<Element>>& g,
                                         const std::vector<Element>& ideal,
                                         const std::vector<std::string>& candidate, int support = 2);

// `degree <n>` and `der <gen> = <expr>` lines; `#` starts a comment.
Derivation parse_derivation(const std::string& text, const AlgPtr& r);
Derivation load_derivation(const std::string& path, const AlgPtr& r);

}  // namespace dgdef

#endif
