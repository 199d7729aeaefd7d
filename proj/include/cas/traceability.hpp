#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cas/core_types.hpp"

namespace cas {

struct TraceabilityRecord {
  RequirementId requirement;
  std::vector<RequirementId> parents;
  std::vector<std::string> implementing_ops;  // module.operation
  std::vector<std::string> covering_tests;
};

class ManifestError : public std::runtime_error {
 public:
  ManifestError(std::size_t line, const std::string& reason)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + reason : reason), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// One requirement per line: `ID | PARENT,PARENT | module.op,module.op`.
/// Blank lines and `#` comments are ignored. Parent links are not resolved here.
std::vector<TraceabilityRecord> parse_manifest(std::string_view text);

/// Test report: one test per line; every `[TAG]` whose TAG is a requirement
/// id marks that test as covering the requirement.
/// Returns test name -> tagged requirement ids.
std::map<std::string, std::vector<RequirementId>> parse_test_report(std::string_view text);

struct MatrixSummary {
  std::map<std::string, int> totals;     // by level
  std::map<std::string, int> uncovered;  // by level
  std::vector<std::string> uncovered_llrs;
};

struct Matrix {
  std::vector<TraceabilityRecord> rows;  // ascending requirement id
  MatrixSummary summary;
};

/// Resolves parent links (throws ManifestError on dangling or ill-levelled
/// parents and duplicate ids) and attaches covering tests.
Matrix build_matrix(std::vector<TraceabilityRecord> manifest,
                    const std::map<std::string, std::vector<RequirementId>>& report);

std::string matrix_csv(const Matrix& m);
std::string summary_text(const MatrixSummary& s);

/// 0 when every LLR-level requirement is covered, else 1.
int coverage_exit_code(const MatrixSummary& s);

}  // namespace cas
