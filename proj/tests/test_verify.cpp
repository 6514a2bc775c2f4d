#include <fstream>

#include "doctest.h"
#include "dgdef/errors.hpp"
#include "dgdef/verify.hpp"

using namespace dgdef;

namespace {

std::filesystem::path data_dir() { return std::filesystem::path(DGDEF_SOURCE_DIR) / "data"; }

std::filesystem::path scratch(const std::string& name, const std::string& text) {
  std::filesystem::path p = std::filesystem::path(DGDEF_BINARY_DIR) / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("every example has its expected status") {
  const std::map<std::string, Status> expected = {
      {"ex2.6a", Status::verified},       {"ex2.6b", Status::verified},      {"ex2.7", Status::verified},
      {"ex5.2", Status::verified},        {"ex6.6", Status::verified},       {"thm5.9-demo", Status::verified},
      {"cor5.13-demo", Status::verified}, {"nonflat-wcof", Status::verified},
  };
  CHECK(example_ids().size() == expected.size());
  for (const auto& id : example_ids()) {
    CAPTURE(id);
    VerificationReport r = run_example(id);
    for (const auto& e : r.evidence) {
      INFO(e.claim << " holds=" << e.holds << " certified=" << e.certified << " : " << e.witness);
      CHECK(e.holds);
    }
    CHECK(status_name(r.status) == status_name(expected.at(id)));
    CHECK(r.to_json()["status"] == status_name(r.status));
  }
}

TEST_CASE("example evidence") {
  VerificationReport minors = run_example("ex6.6");
  REQUIRE(minors.find("minors") != nullptr);
  CHECK(minors.find("minors")->witness.find("x^3") != std::string::npos);
  CHECK(minors.find("not_in_matrix_image")->holds);

  VerificationReport no_lift = run_example("ex5.2");
  REQUIRE(no_lift.find("defect eps*x") != nullptr);
  CHECK(no_lift.find("defect eps*x")->witness == "eps*x");

  VerificationReport pushout = run_example("ex2.6b");
  CHECK(pushout.find("not a quasi-isomorphism")->witness.find("t*y") != std::string::npos);
}

TEST_CASE("bounds below the certificate threshold are inconclusive") {
  for (const std::string id : {"ex2.7", "ex2.6a"}) {
    CAPTURE(id);
    VerificationReport r = run_example(id, {1, std::nullopt});
    CHECK(r.status == Status::inconclusive_truncation);
    CHECK(exit_code(r.status) == 3);
  }
  CHECK_THROWS_AS(run_example("ex2.7", {0, std::nullopt}), Error);
}

TEST_CASE("unknown ids") {
  try {
    run_example("ex9.9");
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == "UnknownExample");
  }
  try {
    run_suite("nope", 1, 0);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == "UnknownSuite");
  }
}

TEST_CASE("suites pass and are deterministic in the seed") {
  for (const auto& s : suite_names()) {
    CAPTURE(s);
    VerificationReport a = run_suite(s, 12, 7);
    VerificationReport b = run_suite(s, 12, 7);
    INFO(a.counterexample.value_or(""));
    CHECK(a.status == Status::verified);
    CHECK(a.passed == 12);
    CHECK(a.notes == b.notes);
    CHECK(a.to_json()["seed"] == 7);
  }
  CHECK(trial_seed(1, 0) != trial_seed(1, 1));
  CHECK(trial_seed(1, 0) != trial_seed(2, 0));
}

TEST_CASE("exit codes") {
  CHECK(exit_code(Status::verified) == 0);
  CHECK(exit_code(Status::refuted) == 2);
  CHECK(exit_code(Status::inconclusive_truncation) == 3);
  CHECK(status_name(Status::inconclusive_truncation) == "inconclusive-truncation");
}

TEST_CASE("algebra files") {
  AlgPtr b = parse_algebra_file(data_dir() / "ex2_6.dga");
  CHECK(b->size() == 2);
  CHECK(d(b->gen("y")) == b->parse("y*x"));

  AlgPtr q = parse_algebra_file(scratch("empty.dga", "base Q\n"));
  CHECK(q->size() == 0);

  try {
    parse_algebra_file(scratch("bad.dga", "base Q\ngen x 0\ngen y -1\ndiff y = y\n"));
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == "DegreeMismatch");
  }
}
