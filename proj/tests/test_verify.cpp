#include "catch_amalgamated.hpp"

#include "support.hpp"

using namespace qpsurf;
using namespace qpsurf::testing;

namespace {

const Check* find_check(const VerificationReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("flip at j1 matches mutation for the hexagon arc") {
  Triangulation t = hexagon();
  FlipVerification v = verify_flip(t, load_arc(t, "hexagonnice.arc"), "j1");
  INFO(to_text(v.report, false));
  CHECK(v.report.passed());
  CHECK(v.report.exit_code() == 0);
  CHECK(v.iso->verdict == IsoVerdict::isomorphic);
  CHECK(v.g_sigma == std::vector<long>{0, 2, 0, 0, -1, 1, 0, 1, -2});
  CHECK(v.rep_sigma->dim("j1") == 0);
  CHECK(v.rep_sigma->dim("j9") == 2);
  const Check* pot = find_check(v.report, "potential equality with twist");
  REQUIRE(pot);
  CHECK(pot->status == CheckStatus::pass);
  // the untwisted potential differs in the sign of the two reversed arrows
  const Check* raw = find_check(v.report, "potential equality without twist");
  REQUIRE(raw);
  CHECK(raw->status == CheckStatus::info);
  CHECK(raw->details == "differs");
}

TEST_CASE("flip at j1 matches mutation for the monogon loop") {
  Triangulation t = hexagon();
  FlipVerification v = verify_flip(t, load_arc(t, "monogon.arc"), "j1");
  INFO(to_text(v.report, false));
  CHECK(v.report.passed());
  CHECK(v.rep_sigma->dim("j6") == 2);
  CHECK(v.g_sigma == v.g_mutated);
}

TEST_CASE("flip sweep over the hexagon arcs") {
  Triangulation t = hexagon();
  for (auto name : {"hexagonnice.arc", "monogon.arc"}) {
    ArcCurve c = load_arc(t, name);
    for (const auto& j : t.arcs()) {
      INFO(name << " flip " << j);
      FlipVerification v = verify_flip(t, c, j);
      CHECK(v.report.passed());
    }
  }
}

TEST_CASE("flipping an arc far from the curve is trivial") {
  Triangulation t = load_triangulation(
      "triangle A: b12@1 d13@3 b23@2\n"
      "triangle B: d13@1 d14@4 b34@3\n"
      "triangle C: d14@1 d15@5 b45@4\n"
      "triangle D: d15@1 b61@6 b56@5\n"
      "boundary: b12 b23 b34 b45 b56 b61\n");
  ArcCurve c = parse_arc(t, "arc y: start A@2 ; end B@4\n");
  FlipVerification v = verify_flip(t, c, "d15");
  CHECK(v.report.passed());
  CHECK(v.rep_sigma->dim("d15") == 0);
  CHECK(v.rep_tau->dim("d13") == 1);
}

TEST_CASE("machine format and exit codes") {
  VerificationReport r;
  r.add("Relations of M(tau)", true, "0 violated");
  r.add("note", CheckStatus::info);
  CHECK(r.exit_code() == 0);
  CHECK(to_machine(r) == "check.relations_of_m_tau=pass\ndetail.relations_of_m_tau=0 violated\ncheck.note=info\nresult=pass\n");
  r.add("iso", CheckStatus::undetermined, "", "hom dump");
  CHECK(r.exit_code() == 2);
  CHECK(to_text(r).find("    hom dump\n") != std::string::npos);
  CHECK(to_text(r).ends_with("result: undetermined\n"));
  r.add("dims", false);
  CHECK(r.exit_code() == 1);
  CHECK(to_machine(r).ends_with("result=fail\n"));

  CHECK(machine_key("mu_j M(tau) isomorphic to M(sigma)") == "mu_j_m_tau_isomorphic_to_m_sigma");
  CHECK(machine_key("--a--b--") == "a_b");
}

TEST_CASE("reports are deterministic") {
  Triangulation t = hexagon();
  ArcCurve c = load_arc(t, "hexagonnice.arc");
  CHECK(to_text(verify_flip(t, c, "j1").report) == to_text(verify_flip(t, c, "j1").report));
}
