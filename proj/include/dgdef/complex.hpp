#ifndef DGDEF_COMPLEX_HPP
#define DGDEF_COMPLEX_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dgdef/algebra.hpp"
#include "dgdef/linalg.hpp"
#include "dgdef/morphism.hpp"
#include "json.hpp"

namespace dgdef {

// Finite-dimensionality policy. With no explicit multigrading, a weight
// making d homogeneous is inferred where possible (dg = 0 gives weight 1,
// otherwise the weight of dg; base generators weigh 0) and the basis is cut
// at weight <= word_length_max, which keeps the complex closed. Otherwise
// the cut is by word length.
struct Truncation {
  int lo = -6;
  int hi = 0;
  int word_length_max = 8;
  std::map<std::string, std::vector<int>> weights;  // explicit multigrading
  std::optional<std::vector<int>> component;
  bool infer_weight = true;

  static Truncation window(int lo, int hi, int word_length_max = 8) {
    Truncation t;
    t.lo = lo;
    t.hi = hi;
    t.word_length_max = word_length_max;
    return t;
  }
  std::string str() const;
  nlohmann::json to_json() const;
};

class FiniteComplex {
 public:
  const AlgPtr& algebra() const { return alg_; }
  const Truncation& truncation() const { return trunc_; }
  // Degrees lo-1 .. hi+1 carry bases; boundaries start in lo-1 .. hi.
  const std::vector<Monomial>& basis(int degree) const;
  const Matrix& boundary(int degree) const;
  bool closed() const { return closed_; }
  const std::optional<Monomial>& escaping() const { return escaping_; }
  // How the basis was cut, e.g. "weight<=8".
  const std::string& mode() const { return mode_; }

  bool in_truncation(const Monomial& m) const;
  std::optional<Vec> coords(int degree, const Element& a) const;
  Element element(int degree, const Vec& v) const;

  friend FiniteComplex extract_complex(const AlgPtr& a, const Truncation& t, bool require_closed);

 private:
  AlgPtr alg_;
  Truncation trunc_;
  std::map<int, std::vector<Monomial>> basis_;
  std::map<int, std::map<Monomial, std::size_t>> index_;
  std::map<int, Matrix> boundary_;
  bool closed_ = true;
  std::optional<Monomial> escaping_;
  std::string mode_;
  std::vector<std::vector<int>> gen_weights_;  // per generator
  int weight_bound_ = -1;                      // < 0: no single-weight cut
};

// Weight per generator making d and the relations homogeneous, if one exists
// under the inference rule.
std::optional<std::vector<int>> infer_weights(const AlgPtr& a);

FiniteComplex extract_complex(const AlgPtr& a, const Truncation& t, bool require_closed = false);

struct CohomologyReport {
  std::map<int, std::size_t> dims;
  std::map<int, std::vector<Element>> representatives;
  std::string truncation;
  nlohmann::json to_json() const;
  std::string str() const;
};

CohomologyReport cohomology(const FiniteComplex& c);

// h with dh = z inside the truncation, or none when the system is infeasible
// there.
std::optional<Element> solve_coboundary(const FiniteComplex& c, const Element& z);

struct DegreeEvidence {
  std::size_t source_dim = 0;
  std::size_t target_dim = 0;
  std::size_t rank = 0;
};

struct QuasiIsoResult {
  bool value = false;
  bool conclusive = true;  // false when images escape the target truncation
  std::map<int, DegreeEvidence> degrees;
  std::optional<Element> witness;  // class killed or missed
  std::string note;
  nlohmann::json to_json() const;
};

// Between graded-free algebras over one Artin base both sides are reduced
// modulo the maximal ideal first; otherwise the complexes are compared over Q.
QuasiIsoResult is_quasi_iso(const Morphism& f, const Truncation& t);

enum class NakayamaVerdict { iso, weak_equivalence, neither };

struct NakayamaResult {
  NakayamaVerdict verdict = NakayamaVerdict::neither;
  bool reduced_iso = false;
  QuasiIsoResult reduced_quasi_iso;
  std::string note;
  nlohmann::json to_json() const;
};

// f between algebras graded-free over the same Artin base.
NakayamaResult nakayama_check(const Morphism& f, const Truncation& t);
// Reduced map bijective: linear parts on generators for free algebras,
// degreewise matrices within the truncation otherwise.
bool is_isomorphism_over_q(const Morphism& f, const Truncation& t, std::string* note = nullptr);

std::string verdict_name(NakayamaVerdict v);

}  // namespace dgdef

#endif
