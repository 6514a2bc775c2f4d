// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <string>

#include "dgdef/complex.hpp"
#include "dgdef/deformations.hpp"
#include "dgdef/verify.hpp"

using namespace dgdef;

namespace {

// Wall-time budgets in milliseconds.
constexpr double kFastMs = 1000;
constexpr double kSearchMs = 5000;

constexpr int kSearchWordlen = 6;
constexpr int kIdempotentTrials = 500;
constexpr int kNakayamaTrials = 100;
constexpr int kKillerTrials = 50;
constexpr int kGaugeTrials = 200;

struct Outcome {
  bool pass = false;
  std::string detail;
};

bool holds(VerificationReport& r, const std::string& claim) {
  Evidence* e = r.find(claim);
  return e && e->holds && e->certified;
}

std::string witness(VerificationReport& r, const std::string& claim) {
  Evidence* e = r.find(claim);
  return e ? e->witness : "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

std::string timing(const VerificationReport& r, double budget) {
  return std::to_string(static_cast<long>(r.wall_ms)) + " ms (budget " + std::to_string(static_cast<long>(budget)) +
         " ms)";
}

bool has_note(const VerificationReport& r, const std::string& part) {
  for (const auto& n : r.notes) {
    if (contains(n, part)) return true;
  }
  return false;
}

// T^1 of Q[x]/(x^n) by brute force: perturbations g of x^n modulo x^n, up to
// the image of x -> x + eps*h, i.e. n x^(n-1) h mod x^n for h = x^k.
int first_order_count(int n) {
  std::vector<std::vector<long>> image;
  for (int k = 0; k < n; ++k) {
    std::vector<long> v(n, 0);
    if (n - 1 + k < n) v[n - 1 + k] = n;
    image.push_back(v);
  }
  int rank = 0;
  std::vector<bool> pivot(n, false);
  for (const auto& v : image) {
    for (int c = 0; c < n; ++c) {
      if (v[c] != 0 && !pivot[c]) {
        pivot[c] = true;
        ++rank;
        break;
      }
    }
  }
  return n - rank;
}

Outcome criterion_1() {
  VerificationReport r = run_example("ex2.6b");
  const bool ok = r.status == Status::verified && holds(r, "Q[x,y,t]") && holds(r, "d(yt) = 0") &&
                  holds(r, "representative yt") && contains(witness(r, "not a quasi-isomorphism"), "t*y") &&
                  r.wall_ms < kFastMs;
  return {ok, witness(r, "representative yt") + "; " + timing(r, kFastMs)};
}

Outcome criterion_2() {
  VerificationReport r = run_example("ex2.6a", {kSearchWordlen, std::nullopt});
  const std::string w = witness(r, "no DG section");
  const bool ok = r.status == Status::verified && holds(r, "infeasible equation family") &&
                  contains(w, "d f(y) = z*k(z)") && contains(w, "f(dy) = y*x*h(z)*k(z)") &&
                  has_note(r, "completeness") && r.wall_ms < kSearchMs;
  return {ok, "d f(y) = z*k vs f(dy) = y*x*h*k; " + timing(r, kSearchMs)};
}

Outcome criterion_3() {
  VerificationReport r = run_example("ex2.7", {kSearchWordlen, std::nullopt});
  const bool ok = r.status == Status::verified && holds(r, "no cocycle lift") && contains(r.truncation, "x0..x3") &&
                  r.wall_ms < kSearchMs;
  return {ok, witness(r, "no cocycle lift") + "; " + timing(r, kSearchMs)};
}

Outcome criterion_4() {
  VerificationReport r = run_example("ex5.2");
  const bool ok = r.status == Status::verified && holds(r, "no chain-map lift") && witness(r, "defect eps*x") == "eps*x" &&
                  r.wall_ms < kFastMs;
  return {ok, "defect " + witness(r, "defect eps*x") + "; " + timing(r, kFastMs)};
}

Outcome criterion_5() {
  VerificationReport r = run_example("ex6.6");
  const bool ok = r.status == Status::verified && witness(r, "minors of G") == "x^3, x^2*y, y^2" &&
                  holds(r, "perturbations lie in (x,y)") && holds(r, "not_in_matrix_image") && r.wall_ms < kFastMs;
  return {ok, "minors " + witness(r, "minors of G") + "; " + timing(r, kFastMs)};
}

Outcome suite(const std::string& name, int trials, std::uint64_t seed, const std::function<bool(VerificationReport&)>& extra) {
  VerificationReport r = run_suite(name, trials, seed);
  const bool ok = r.status == Status::verified && r.trials == trials && r.passed == trials && extra(r);
  std::string detail = std::to_string(r.passed) + "/" + std::to_string(r.trials) + " (seed " + std::to_string(seed) + ")";
  if (r.counterexample) detail += "; " + *r.counterexample;
  return {ok, detail};
}

Outcome criterion_6() {
  return suite("idempotent", kIdempotentTrials, 42, [](VerificationReport& r) { return holds(r, "idempotent"); });
}

Outcome criterion_7() {
  VerificationReport r = run_example("thm5.9-demo");
  int n = 0;
  for (const std::string c : {"chain map", "idempotent", "reduction", "compatibility", "Nakayama weak equivalence"}) {
    for (const auto& e : r.evidence) n += e.claim == c && e.holds && e.certified;
  }
  return {r.status == Status::verified && n == 5, std::to_string(n) + "/5 certificates"};
}

Outcome criterion_8() {
  VerificationReport r = run_example("cor5.13-demo");
  const bool ok = r.status == Status::verified && holds(r, "reduction of the lift equals the input");
  return {ok, status_name(r.status)};
}

Outcome criterion_9() {
  return suite("nakayama", kNakayamaTrials, 3, [](VerificationReport& r) {
    return has_note(r, "eps iso") && has_note(r, "eps non-iso") && has_note(r, "t iso") && has_note(r, "t non-iso");
  });
}

Outcome criterion_10() {
  return suite("killer", kKillerTrials, 1, [](VerificationReport& r) { return holds(r, "H(Q[d^-1] (x) M) = 0"); });
}

Outcome criterion_11() {
  return suite("mcgauge", kGaugeTrials, 5, [](VerificationReport& r) {
    return holds(r, "preserve MC") && holds(r, "both directions exercised");
  });
}

Outcome criterion_12() {
  AlgPtr x = DGAlgebra::Builder().gen("x", 0).rel("x^2").build();
  TangentReport t = tangent_obstruction_dims(x, 2, {0, 1});
  FiniteComplex c = extract_complex(t.resolution, Truncation::window(-1, 0, 8), true);
  CohomologyReport h = cohomology(c);
  const Element x2 = t.resolution->parse("x^2");
  const bool h0 = h.dims.at(0) == 2 && solve_coboundary(c, x2).has_value() &&
                  !solve_coboundary(c, t.resolution->gen("x")).has_value();
  const bool hm1 = h.dims.at(-1) == 0;
  const std::size_t oracle = static_cast<std::size_t>(first_order_count(2));
  const bool tangent = t.dims.at(1) == oracle;
  return {h0 && hm1 && tangent, "H^0 dim " + std::to_string(h.dims.at(0)) + ", H^-1 dim " +
                                    std::to_string(h.dims.at(-1)) + ", tangent " + std::to_string(t.dims.at(1)) +
                                    " vs oracle " + std::to_string(oracle)};
}

Outcome criterion_13() {
  VerificationReport r = run_example("nonflat-wcof");
  const bool ok = r.status == Status::verified && holds(r, "is not injective") && holds(r, "W-cofibration") &&
                  holds(r, "not flat") && r.wall_ms < kFastMs;
  return {ok, timing(r, kFastMs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"pushout Q[x,y,t] and the class [yt]", criterion_1},
      {"no DG section of q", criterion_2},
      {"no cocycle lift of x0", criterion_3},
      {"no chain-map idempotent lift, defect eps*x", criterion_4},
      {"minor ideal and not_in_matrix_image", criterion_5},
      {"idempotent suite", criterion_6},
      {"trivial idempotent lift demo", criterion_7},
      {"lifted trivial cofibration demo", criterion_8},
      {"Nakayama suite", criterion_9},
      {"killer algebra suite", criterion_10},
      {"MC and gauge suite", criterion_11},
      {"Tate resolution and tangent dimension", criterion_12},
      {"non-flat W-cofibration", criterion_13},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << i + 1 << ". " << criteria[i].first << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
