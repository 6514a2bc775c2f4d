#ifndef DGDEF_IDEMPOTENTS_HPP
#define DGDEF_IDEMPOTENTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "dgdef/artin.hpp"
#include "dgdef/complex.hpp"
#include "dgdef/model.hpp"
#include "dgdef/morphism.hpp"
#include "json.hpp"

namespace dgdef {

// e∘e = e on generators.
bool is_idempotent(const Morphism& e);

struct Idempotent {
  Morphism map;
  bool trivial = false;  // weak equivalence within `truncation`
  std::string truncation;
};

// Raises NotIdempotent; triviality is decided with is_quasi_iso.
Idempotent make_idempotent(const Morphism& e, const Truncation& t);

struct RetractionData {
  AlgPtr fixed;
  Morphism include;  // F -> Z
  Morphism project;  // Z -> F
  nlohmann::json to_json() const;
};

struct FixedGenerator {
  std::string name;
  Element element;  // in Z, fixed by e
};

// Image of e presented as a free algebra on normal forms e(g), greedily
// choosing generators of Z whose image is not already generated. The four
// retraction identities are verified on generators.
RetractionData fixed_locus(const Morphism& e, int max_wordlen = 6);
// Same with prescribed generators of the fixed locus.
RetractionData fixed_locus(const Morphism& e, const std::vector<FixedGenerator>& generators,
                           int max_wordlen = 6);

// x lies in the ideal of P generated by i(J), J given by generators.
bool in_extended_ideal(const Element& x, const std::vector<Element>& ideal);

// f = 3g^2 - 2g^3 for i: A -> P, an idempotent e: A -> A with g i = i e and
// J ⊆ A with J^2 = 0 and g idempotent modulo i(J)P.
Morphism lift_idempotent_graded(const Morphism& g, const Morphism& i, const Morphism& e,
                                const std::vector<Element>& ideal);

struct CheckResult {
  std::string claim;
  bool holds = false;
  std::string detail;
  nlohmann::json to_json() const;
};

struct IdempotentLiftStep {
  std::string t;  // socle generator of the small extension
  int t_degree = 0;
  std::string graded_lift;
  std::string corrected;
  std::string psi;  // (dr - rd) / t
  bool psi_in_subcomplex = false;
  bool psi_cocycle = false;
  std::string h;
  int word_length = 0;
  nlohmann::json to_json() const;
};

struct IdempotentLift {
  Morphism f;
  std::vector<IdempotentLiftStep> steps;
  std::vector<CheckResult> checks;  // chain map, idempotent, reduction, compatibility, Nakayama
  bool all_hold() const;
  nlohmann::json to_json() const;
};

struct IdempotentLiftOptions {
  Truncation trunc = Truncation::window(-3, 0, 4);
  bool check_triviality = true;
  bool retry_doubled = true;  // retry the defect solve once at twice the word length
};

// Lifts the trivial idempotent f_b of R_A ⊗ B to R_A, compatibly with the
// cofibration g_a: P_A -> R_A and the trivial idempotent e_a of P_A, one
// small extension at a time. b = nullptr is the residue field.
IdempotentLift lift_trivial_idempotent_dg(const ArtinPtr& a, const ArtinPtr& b, const Morphism& g_a,
                                          const Morphism& e_a, const Morphism& f_b,
                                          const IdempotentLiftOptions& opts = {});

// Kernel of A -> B (B presented with the same base generator names).
std::vector<Element> kernel_of_reduction(const ArtinPtr& a, const ArtinPtr& b);

struct LiftedFactorization {
  AlgPtr middle;
  Morphism left;
  std::optional<Morphism> right;  // none when the target is terminal
  AlgPtr ambient;                 // D, of which the middle is a retract
  RetractionData retraction;
  IdempotentLift idempotent;
  std::vector<CheckResult> checks;
  bool all_hold() const;
  nlohmann::json to_json() const;
};

// Lifts a factorization of f ⊗ Q (f: P -> M over A, both graded-free) to
// one of f. The reduced left leg must carry a semifree certificate.
LiftedFactorization lift_factorization(const Morphism& f, const Factorization& given, FactorizationKind kind,
                                       const Truncation& t = Truncation::window(-3, 0, 4));

// Trivial cofibration P -> Q over A lifting the trivial cofibration
// fbar: P ⊗ Q -> Qbar (factorization of P ⊗ Q -> 0).
LiftedFactorization lift_trivial_cofibration(const AlgPtr& p, const Morphism& fbar,
                                             const Truncation& t = Truncation::window(-3, 0, 4));

struct ReductionCofibration {
  bool value = false;
  MorphismClass reduced;
  std::string certificate;
  nlohmann::json to_json() const;
};

// f between graded-free algebras over one Artin base is a cofibration iff
// its reduction is; decided on the reduction.
ReductionCofibration reduction_cofibration_check(const Morphism& f, const Truncation& t);

}  // namespace dgdef

#endif
