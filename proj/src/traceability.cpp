#include "cas/traceability.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include <fmt/format.h>

namespace cas {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto c = s.find(',', pos);
    if (c == std::string_view::npos) c = s.size();
    const auto item = trim(s.substr(pos, c - pos));
    if (!item.empty()) out.emplace_back(item);
    pos = c + 1;
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    out.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

template <class R, class F>
std::string join(const R& items, F&& str) {
  std::string s;
  for (const auto& it : items) s += (s.empty() ? "" : ";") + str(it);
  return s;
}

bool parent_level_ok(std::string_view child, std::string_view parent) {
  if (child == "LLR") return parent == "HLR" || parent == "DHLR";
  if (child == "HLR" || child == "DHLR") return parent == "SRATS";
  return false;
}

}  // namespace

std::vector<TraceabilityRecord> parse_manifest(std::string_view text) {
  std::vector<TraceabilityRecord> out;
  const auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (const auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;

    std::vector<std::string_view> cols;
    std::size_t pos = 0;
    while (true) {
      const auto bar = line.find('|', pos);
      cols.push_back(trim(line.substr(pos, bar == std::string_view::npos ? std::string_view::npos : bar - pos)));
      if (bar == std::string_view::npos) break;
      pos = bar + 1;
    }
    if (cols.size() != 3) throw ManifestError(i + 1, "expected 'ID | parents | ops'");
    if (!RequirementId::is_valid(cols[0]))
      throw ManifestError(i + 1, fmt::format("'{}' is not a requirement id", cols[0]));

    TraceabilityRecord rec{RequirementId(std::string(cols[0])), {}, split_list(cols[2]), {}};
    for (const auto& p : split_list(cols[1])) {
      if (!RequirementId::is_valid(p)) throw ManifestError(i + 1, fmt::format("'{}' is not a requirement id", p));
      rec.parents.emplace_back(p);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::map<std::string, std::vector<RequirementId>> parse_test_report(std::string_view text) {
  static const std::regex tag(R"(\[((SRATS|HLR|DHLR|LLR)_[0-9A-Za-z-]+)\])");
  std::map<std::string, std::vector<RequirementId>> out;
  for (std::string_view raw : lines_of(text)) {
    const std::string line(trim(raw));
    std::vector<RequirementId> ids;
    for (auto it = std::sregex_iterator(line.begin(), line.end(), tag); it != std::sregex_iterator(); ++it)
      ids.emplace_back((*it)[1].str());
    if (ids.empty()) continue;
    auto& dst = out[line];
    dst.insert(dst.end(), ids.begin(), ids.end());
  }
  return out;
}

Matrix build_matrix(std::vector<TraceabilityRecord> manifest,
                    const std::map<std::string, std::vector<RequirementId>>& report) {
  std::sort(manifest.begin(), manifest.end(),
            [](const auto& a, const auto& b) { return a.requirement < b.requirement; });
  std::map<RequirementId, std::string_view> level_of;
  for (const auto& r : manifest)
    if (!level_of.emplace(r.requirement, r.requirement.level()).second)
      throw ManifestError(0, "duplicate requirement " + r.requirement.str());

  for (const auto& r : manifest) {
    const auto level = r.requirement.level();
    if (level != "SRATS" && r.parents.empty())
      throw ManifestError(0, r.requirement.str() + " has no parent");
    for (const auto& p : r.parents) {
      if (!level_of.count(p))
        throw ManifestError(0, fmt::format("{} references unknown parent {}", r.requirement.str(), p.str()));
      if (!parent_level_ok(level, p.level()))
        throw ManifestError(0, fmt::format("{} cannot descend from {}", r.requirement.str(), p.str()));
    }
  }

  std::map<RequirementId, std::set<std::string>> tests_of;
  for (const auto& [test, ids] : report)
    for (const auto& id : ids) tests_of[id].insert(test);

  Matrix m;
  for (auto& r : manifest) {
    if (auto it = tests_of.find(r.requirement); it != tests_of.end())
      r.covering_tests.assign(it->second.begin(), it->second.end());
    std::sort(r.parents.begin(), r.parents.end());
    const std::string level(r.requirement.level());
    ++m.summary.totals[level];
    m.summary.uncovered[level] += r.covering_tests.empty() ? 1 : 0;
    if (level == "LLR" && r.covering_tests.empty()) m.summary.uncovered_llrs.push_back(r.requirement.str());
    m.rows.push_back(std::move(r));
  }
  return m;
}

std::string matrix_csv(const Matrix& m) {
  std::string s = "requirement,parents,implementing_ops,covering_tests\n";
  for (const auto& r : m.rows) {
    s += csv_field(r.requirement.str()) + ",";
    s += csv_field(join(r.parents, [](const RequirementId& p) { return p.str(); })) + ",";
    s += csv_field(join(r.implementing_ops, [](const std::string& x) { return x; })) + ",";
    s += csv_field(join(r.covering_tests, [](const std::string& x) { return x; })) + "\n";
  }
  return s;
}

std::string summary_text(const MatrixSummary& s) {
  std::string out;
  for (const auto& [level, total] : s.totals) {
    const auto it = s.uncovered.find(level);
    const int unc = it == s.uncovered.end() ? 0 : it->second;
    out += fmt::format("{:<6} {:>3} requirements, {:>3} without covering tests\n", level, total, unc);
  }
  for (const auto& id : s.uncovered_llrs) out += "uncovered: " + id + "\n";
  return out;
}

int coverage_exit_code(const MatrixSummary& s) { return s.uncovered_llrs.empty() ? 0 : 1; }

}  // namespace cas
