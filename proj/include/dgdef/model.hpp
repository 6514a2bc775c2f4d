#ifndef DGDEF_MODEL_HPP
#define DGDEF_MODEL_HPP

#include <optional>
#include <string>
#include <vector>

#include "dgdef/complex.hpp"
#include "dgdef/morphism.hpp"
#include "json.hpp"

namespace dgdef {

struct MorphismClass {
  bool fibration = false;
  bool surjective_all_degrees = false;
  bool weak_equivalence = false;
  bool semifree_extension = false;
  bool cofibration_certificate = false;
  std::string truncation;
  std::vector<std::string> notes;

  bool trivial_fibration() const { return fibration && weak_equivalence; }
  bool trivial_cofibration() const { return cofibration_certificate && weak_equivalence; }
  nlohmann::json to_json() const;
};

// Target indices of the adjoined generators, ordered so that each
// differential only involves the source and earlier adjoined generators.
// None when f is not a semifree extension (f must send every source
// generator to the same-named target generator, keep the differential and
// the relations).
std::optional<std::vector<int>> semifree_order(const Morphism& f);

// Image of the degree-k part (word length <= L) spans the target's
// degree-k part (word length <= L).
bool surjective_in_degree(const Morphism& f, int degree, int max_wordlen);

MorphismClass classify(const Morphism& f, const Truncation& t);

enum class FactorizationKind { C_FW, CW_F };
std::string kind_name(FactorizationKind k);

struct Factorization {
  AlgPtr middle;
  Morphism left;
  Morphism right;
  FactorizationKind kind = FactorizationKind::C_FW;
  int window_lo = 0;  // right is a quasi-isomorphism here (C_FW)
  int window_hi = 0;
  std::vector<std::string> notes;
  nlohmann::json to_json() const;
};

// Depth-limited Tate construction. Stage 0 adjoins copies of the target's
// degree-0 generators; stage k adjoins copies of degree -k generators and
// killers e<k>_<stage> of the kernel cohomology in degree 1-k, weight by
// weight up to weight_max.
Factorization factor_c_fw(const Morphism& f, int depth, int weight_max = 8);

// Contractible pairs (u, du) mapping onto target generators and then onto
// the remaining monomials within the truncation, degree by degree.
Factorization factor_cw_f(const Morphism& f, const Truncation& t = Truncation::window(-3, 0, 6));

// i: P -> Q, p: S -> R, top: P -> S, bottom: Q -> R.
struct LiftingProblem {
  Morphism i;
  Morphism p;
  Morphism top;
  Morphism bottom;
  // Verifies the square commutes on generators (SquareNotCommutative).
  static LiftingProblem make(Morphism i, Morphism p, Morphism top, Morphism bottom);
};

// Graded algebra map Q -> S with gamma i = top and p gamma = bottom, built
// through the killer algebra. Candidates have word length <= max_wordlen.
Morphism graded_lift(const LiftingProblem& pr, int max_wordlen = 6);

// Chain-map lift, generator by generator. Throws ObstructionNotExact when
// the hypotheses are certified within t but a generator cannot be lifted;
// returns none when they are not and no lift exists within t.
std::optional<Morphism> dg_lift(const LiftingProblem& pr, const Truncation& t);

// Lifts h_b (solving the reduced square over b) to a solution over the
// base of pr, reducing to h_b. Every generator of b must be a generator of a.
Morphism lift_lifting_over_artin(const ArtinPtr& a, const ArtinPtr& b, const LiftingProblem& pr,
                                 const Morphism& h_b, const Truncation& t);

// S -> R x_{R (x) B} (S (x) B) is onto in the given degree (word length <= L).
bool pullback_comparison_surjective(const Morphism& p, const ArtinPtr& b, int degree, int max_wordlen);

}  // namespace dgdef

#endif
