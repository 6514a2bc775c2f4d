#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "dgdef/deformations.hpp"
#include "dgdef/errors.hpp"
#include "dgdef/format.hpp"
#include "dgdef/idempotents.hpp"
#include "dgdef/morphism.hpp"
#include "dgdef/verify.hpp"

using namespace dgdef;
using json = nlohmann::json;

namespace {

void emit(const json& j, const std::string& path) {
  if (path.empty()) return;
  if (path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("IOError", "cannot write " + path);
  out << j.dump(2) << "\n";
}

void print(const VerificationReport& r) {
  std::cout << r.id << ": " << status_name(r.status) << " (" << r.truncation << ")\n";
  for (const auto& e : r.evidence) {
    std::cout << "  [" << (e.holds ? "holds" : "fails") << (e.certified ? ", exact" : ", bounded") << "] " << e.claim
              << "\n";
    if (!e.witness.empty()) std::cout << "      " << e.witness << "\n";
  }
  if (r.kind == "suite") std::cout << "  " << r.passed << "/" << r.trials << " trials, seed " << *r.seed << "\n";
  if (r.counterexample) std::cout << "  counterexample: " << *r.counterexample << "\n";
  for (const auto& n : r.notes) std::cout << "  note: " << n << "\n";
}

std::pair<int, int> parse_window(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--window", "expected lo:hi");
  return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
}

Morphism map_from_pairs(const AlgPtr& s, const AlgPtr& t, const std::vector<std::string>& pairs) {
  std::map<std::string, std::string> images;
  for (const auto& pair : pairs) {
    auto eq = pair.find('=');
    if (eq == std::string::npos) throw Error("ParseError", "expected gen=expr, got " + pair);
    images[pair.substr(0, eq)] = pair.substr(eq + 1);
  }
  return make_morphism(s, t, images);
}

int checks_exit(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks) {
    std::cout << "  [" << (c.holds ? "holds" : "fails") << "] " << c.claim << "\n";
    if (!c.detail.empty()) std::cout << "      " << c.detail << "\n";
  }
  for (const auto& c : checks) {
    if (!c.holds) return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dgdef: deformations of commutative DG algebras"};
  app.require_subcommand(1);
  int code = 0;

  auto* verify = app.add_subcommand("verify", "run a scripted example");
  std::string id, json_out, window;
  int wordlen = 0;
  verify->add_option("id", id)->required()->check(CLI::IsMember(example_ids()));
  verify->add_option("--max-wordlen", wordlen)->check(CLI::PositiveNumber);
  verify->add_option("--window", window, "lo:hi");
  verify->add_option("--json", json_out, "report path, - for stdout");
  verify->callback([&] {
    ExampleOptions o;
    if (wordlen > 0) o.max_wordlen = wordlen;
    if (!window.empty()) o.window = parse_window(window);
    VerificationReport r = run_example(id, o);
    if (json_out != "-") print(r);
    emit(r.to_json(), json_out);
    code = exit_code(r.status);
  });

  auto* props = app.add_subcommand("props", "run a property suite");
  std::string suite;
  int trials = 100;
  std::uint64_t seed = 0;
  props->add_option("--suite", suite)->required()->check(CLI::IsMember(suite_names()));
  props->add_option("--trials", trials)->check(CLI::PositiveNumber);
  props->add_option("--seed", seed);
  props->add_option("--json", json_out);
  props->callback([&] {
    VerificationReport r = run_suite(suite, trials, seed);
    if (json_out != "-") print(r);
    emit(r.to_json(), json_out);
    code = exit_code(r.status);
  });

  auto* lift_idem = app.add_subcommand("lift-idem", "lift a trivial idempotent of the reduction");
  std::string total_path;
  std::vector<std::string> pairs;
  lift_idem->add_option("algebra", total_path, "graded-free algebra over an Artin base")->required();
  lift_idem->add_option("--map", pairs, "gen=expr on the reduction")->required();
  lift_idem->add_option("--max-wordlen", wordlen)->check(CLI::PositiveNumber);
  lift_idem->add_option("--json", json_out);
  lift_idem->callback([&] {
    AlgPtr ra = load_algebra(total_path);
    if (!ra->base()) throw Error("NotOverArtin", total_path + " has base Q");
    AlgPtr rb = reduction(ra).algebra;
    AlgPtr pa = DGAlgebra::Builder(ra->base()).build();
    IdempotentLiftOptions o;
    if (wordlen > 0) o.trunc = Truncation::window(-3, 0, wordlen);
    IdempotentLift lift = lift_trivial_idempotent_dg(ra->base(), nullptr, make_morphism(pa, ra, ImageMap{}),
                                                     identity(pa), map_from_pairs(rb, rb, pairs), o);
    std::cout << lift.f.str() << "\n";
    code = checks_exit(lift.checks);
    emit(lift.to_json(), json_out);
  });

  auto* lift_fact = app.add_subcommand("lift-fact", "lift a trivial cofibration from the reduction");
  std::string source_path, target_path;
  lift_fact->add_option("source", source_path, "graded-free P over an Artin base")->required();
  lift_fact->add_option("target", target_path, "algebra over Q")->required();
  lift_fact->add_option("--map", pairs, "gen=expr from the reduction of P");
  lift_fact->add_option("--max-wordlen", wordlen)->check(CLI::PositiveNumber);
  lift_fact->add_option("--json", json_out);
  lift_fact->callback([&] {
    AlgPtr p = load_algebra(source_path);
    AlgPtr qbar = load_algebra(target_path);
    Morphism fbar = map_from_pairs(reduction(p).algebra, qbar, pairs);
    LiftedFactorization lf =
        lift_trivial_cofibration(p, fbar, Truncation::window(-3, 0, wordlen > 0 ? wordlen : 4));
    std::cout << serialize_algebra(lf.middle);
    code = checks_exit(lf.checks);
    emit(lf.to_json(), json_out);
  });

  std::string r_path, a_path, xi_path;
  auto add_mc_inputs = [&](CLI::App* c) {
    c->add_option("algebra", r_path, "algebra over Q")->required();
    c->add_option("base", a_path, "Artin ring presentation")->required();
    c->add_option("derivation", xi_path, "degree-1 derivation file")->required();
    c->add_option("--json", json_out);
  };
  auto load_xi = [&]() {
    AlgPtr r = load_algebra(r_path);
    ArtinPtr a = load_artin(a_path);
    AlgPtr ra = change_base(r, a).algebra;
    return std::make_tuple(r, a, load_derivation(xi_path, ra));
  };

  auto* mc = app.add_subcommand("mc", "Maurer-Cartan check");
  add_mc_inputs(mc);
  mc->callback([&] {
    auto [r, a, xi] = load_xi();
    MCResult res = mc_check(xi, a);
    std::cout << (res.value ? "MC" : "not MC") << "\n";
    for (const auto& [g, e] : res.defect) std::cout << "  defect on " << g << ": " << e.str() << "\n";
    emit(res.to_json(), json_out);
    code = res.value ? 0 : 2;
  });

  auto* deform = app.add_subcommand("deform", "strict deformation d + xi");
  add_mc_inputs(deform);
  deform->callback([&] {
    auto [r, a, xi] = load_xi();
    StrictDeformation sd = psi1_deform(r, a, xi);
    std::cout << serialize_algebra(sd.total, a_path);
    json j = sd.to_json();
    bool degree_zero = true;
    for (int i : a->presentation()->base_indices()) {
      degree_zero = degree_zero && a->presentation()->generators()[i].degree == 0;
    }
    if (degree_zero) {
      H0Deformation h0 = h0_compare(sd);
      std::cout << "H^0: dim " << h0.dim_total << " over Q, " << (h0.flat ? "flat" : "not flat") << "\n";
      j["h0"] = h0.to_json();
    }
    emit(j, json_out);
  });

  auto* tangent = app.add_subcommand("tangent", "tangent and obstruction dimensions");
  std::string x_path;
  int depth = 2;
  std::vector<int> degrees = {0, 1};
  tangent->add_option("algebra", x_path)->required();
  tangent->add_option("--depth", depth)->check(CLI::PositiveNumber);
  tangent->add_option("--degrees", degrees)->delimiter(',');
  tangent->add_option("--max-wordlen", wordlen)->check(CLI::PositiveNumber);
  tangent->add_option("--json", json_out);
  tangent->callback([&] {
    TangentReport t = tangent_obstruction_dims(load_algebra(x_path), depth, degrees, wordlen > 0 ? wordlen : 6);
    for (const auto& [n, dim] : t.dims) std::cout << "H^" << n << " = " << dim << "\n";
    std::cout << "(" << t.truncation << ")\n";
    emit(t.to_json(), json_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return code;
}
