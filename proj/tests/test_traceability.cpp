#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cas/traceability.hpp"

using namespace cas;

namespace {

std::string shipped_manifest() {
  std::ifstream in(std::filesystem::path(CAS_SOURCE_DIR) / "data/requirements.manifest");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmall = R"(# tiny tree
SRATS_001 | | a.x
HLR_001 | SRATS_001 | a.x
DHLR_001a | SRATS_001 | a.y
LLR_001 | HLR_001 | a.x
LLR_01a-01 | DHLR_001a | a.y,a.z
)";

std::size_t error_line(const std::string& text) {
  try {
    build_matrix(parse_manifest(text), {});
  } catch (const ManifestError& e) {
    return e.line();
  }
  return 999;
}

}  // namespace

TEST_CASE("shipped manifest has the full requirement tree") {
  const auto recs = parse_manifest(shipped_manifest());
  const Matrix m = build_matrix(recs, {});
  CHECK(m.summary.totals.at("SRATS") == 19);
  CHECK(m.summary.totals.at("HLR") == 14);
  CHECK(m.summary.totals.at("DHLR") == 2);
  CHECK(m.summary.totals.at("LLR") == 37);
  CHECK(m.summary.uncovered_llrs.size() == 37);
  CHECK(coverage_exit_code(m.summary) == 1);
  CHECK(std::is_sorted(m.rows.begin(), m.rows.end(),
                       [](const auto& a, const auto& b) { return a.requirement < b.requirement; }));
}

TEST_CASE("test report tags map tests onto requirements") {
  const auto rep = parse_test_report("alpha [LLR_001]\nbeta [LLR_001] [HLR_001]\n\nplain test\ngamma [llr_9] [LLR_01a-01]\n");
  REQUIRE(rep.size() == 3);
  CHECK(rep.at("beta [LLR_001] [HLR_001]").size() == 2);
  CHECK(rep.at("gamma [llr_9] [LLR_01a-01]").size() == 1);

  const Matrix m = build_matrix(parse_manifest(kSmall), rep);
  CHECK(coverage_exit_code(m.summary) == 0);
  CHECK(m.summary.uncovered.at("SRATS") == 1);
  CHECK(matrix_csv(m) ==
        "requirement,parents,implementing_ops,covering_tests\n"
        "DHLR_001a,SRATS_001,a.y,\n"
        "HLR_001,SRATS_001,a.x,beta [LLR_001] [HLR_001]\n"
        "LLR_001,HLR_001,a.x,alpha [LLR_001];beta [LLR_001] [HLR_001]\n"
        "LLR_01a-01,DHLR_001a,a.y;a.z,gamma [llr_9] [LLR_01a-01]\n"
        "SRATS_001,,a.x,\n");
}

TEST_CASE("an LLR without tests turns the exit code to 1") {
  const auto rep = parse_test_report("alpha [LLR_001]\n");
  const Matrix m = build_matrix(parse_manifest(kSmall), rep);
  CHECK(coverage_exit_code(m.summary) == 1);
  REQUIRE(m.summary.uncovered_llrs.size() == 1);
  CHECK(m.summary.uncovered_llrs[0] == "LLR_01a-01");
  CHECK(summary_text(m.summary).find("uncovered: LLR_01a-01") != std::string::npos);
}

TEST_CASE("broken manifests are rejected") {
  CHECK(error_line("SRATS_001 | | a\nLLR_001 | HLR_009 | a\n") == 0);
  CHECK(error_line("SRATS_001 | | a\nLLR_001 | SRATS_001 | a\n") == 0);
  CHECK(error_line("SRATS_001 | | a\nHLR_001 | | a\n") == 0);
  CHECK(error_line("SRATS_001 | | a\nSRATS_001 | | b\n") == 0);
  CHECK(error_line("SRATS_001 | | a\nHLR_001 | SRATS_001\n") == 2);
  CHECK(error_line("\n\nFOO_1 | | a\n") == 3);
  CHECK(error_line("SRATS_001 | | a\nHLR_001 | SRATS 001 | a\n") == 2);
}

TEST_CASE("matrix CSV quotes fields with commas") {
  const auto rep = parse_test_report("a, b [LLR_001]\n");
  const Matrix m = build_matrix(parse_manifest(kSmall), rep);
  CHECK(matrix_csv(m).find("\"a, b [LLR_001]\"") != std::string::npos);
}
