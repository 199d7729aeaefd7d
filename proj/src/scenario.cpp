#include "cas/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace cas {

Position IntruderSpec::position_at(double t) const {
  Vec3 p = initial.vec();
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const double a = segments[i].t_start;
    if (t <= a) break;
    const double b = i + 1 < segments.size() ? std::min(segments[i + 1].t_start, t) : t;
    p = p + (b - a) * segments[i].velocity.vec();
  }
  return Position::from(p);
}

Velocity IntruderSpec::velocity_at(double t) const {
  Velocity v;
  for (const auto& s : segments)
    if (s.t_start <= t) v = s.velocity;
  return v;
}

std::string_view to_string(FaultKind k) {
  switch (k) {
    case FaultKind::SensorFailure: return "SensorFailure";
    case FaultKind::SoftwareErrorDrop: return "SoftwareErrorDrop";
    case FaultKind::CommDelay: return "CommDelay";
    case FaultKind::ConfigError: return "ConfigError";
    case FaultKind::PhysicalObstruction: return "PhysicalObstruction";
    case FaultKind::PhantomDetection: return "PhantomDetection";
    case FaultKind::StageDisable: return "StageDisable";
  }
  return "Unknown";
}

namespace {

std::optional<FaultKind> parse_fault_kind(std::string_view s) {
  for (auto k : {FaultKind::SensorFailure, FaultKind::SoftwareErrorDrop, FaultKind::CommDelay,
                 FaultKind::ConfigError, FaultKind::PhysicalObstruction,
                 FaultKind::PhantomDetection, FaultKind::StageDisable})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::vector<double> numbers(std::string_view value, std::size_t count, std::size_t line) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < value.size()) {
    const auto b = value.find_first_not_of(" \t", pos);
    if (b == std::string_view::npos) break;
    auto e = value.find_first_of(" \t", b);
    if (e == std::string_view::npos) e = value.size();
    const auto tok = value.substr(b, e - b);
    const auto d = to_double(tok);
    if (!d) throw ScenarioParseError(line, fmt::format("'{}' is not a finite number", tok));
    out.push_back(*d);
    pos = e;
  }
  if (out.size() != count)
    throw ScenarioParseError(line, fmt::format("expected {} number(s), got {}", count, out.size()));
  return out;
}

double number(std::string_view value, std::size_t line) { return numbers(value, 1, line)[0]; }

struct Entry {
  std::string key;
  std::string value;
  std::size_t line;
};

struct Section {
  std::string kind;  // scenario, sensor, region, own, intruder, fault
  std::string label;
  std::size_t line = 0;
  std::vector<Entry> entries;
};

std::vector<Section> split_sections(std::string_view text, bool allow_free_entries) {
  std::vector<Section> sections;
  if (allow_free_entries) sections.push_back({"", "", 0, {}});
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (nl == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') throw ScenarioParseError(line_no, "unterminated section header");
      const auto inner = trim(line.substr(1, line.size() - 2));
      const auto sp = inner.find_first_of(" \t");
      Section s;
      s.kind = std::string(inner.substr(0, sp));
      s.label = sp == std::string_view::npos ? "" : std::string(trim(inner.substr(sp)));
      s.line = line_no;
      if (s.kind.empty()) throw ScenarioParseError(line_no, "empty section header");
      sections.push_back(std::move(s));
    } else {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ScenarioParseError(line_no, "expected 'key = value'");
      const auto key = trim(line.substr(0, eq));
      const auto value = trim(line.substr(eq + 1));
      if (key.empty()) throw ScenarioParseError(line_no, "missing key");
      if (sections.empty()) throw ScenarioParseError(line_no, "entry outside of any section");
      sections.back().entries.push_back({std::string(key), std::string(value), line_no});
    }
    if (nl == text.size()) break;
  }
  return sections;
}

void require(bool ok, const std::string& field, const std::string& reason) {
  if (!ok) throw ScenarioValidationError(field, reason);
}

[[noreturn]] void unknown_key(const Entry& e, const std::string& section) {
  throw ScenarioParseError(e.line, fmt::format("unknown key '{}' in [{}]", e.key, section));
}

void validate_fault_params(const FaultInjection& f, const std::string& field,
                           const std::set<std::string>& intruder_ids) {
  std::set<std::string> allowed;
  switch (f.kind) {
    case FaultKind::SensorFailure: allowed = {"sensor"}; break;
    case FaultKind::SoftwareErrorDrop: allowed = {"cpa_fixture_bias"}; break;
    case FaultKind::CommDelay: allowed = {"channel"}; break;
    case FaultKind::ConfigError:
      allowed = {"detection_range", "azimuth_for", "elevation_for", "coop_range"};
      break;
    case FaultKind::PhysicalObstruction: allowed = {"intruder"}; break;
    case FaultKind::PhantomDetection: allowed = {"period", "seed", "min_range", "max_range"}; break;
    case FaultKind::StageDisable: allowed = {"stage"}; break;
  }
  for (const auto& [k, v] : f.params) {
    require(allowed.count(k) > 0, field, fmt::format("parameter '{}' not valid for {}", k, to_string(f.kind)));
    const bool text_param = k == "sensor" || k == "channel" || k == "intruder" || k == "stage";
    if (!text_param) require(to_double(v).has_value(), field, fmt::format("parameter '{}' must be numeric", k));
  }
  switch (f.kind) {
    case FaultKind::SensorFailure: {
      const auto s = f.param("sensor", "both");
      require(s == "primary" || s == "secondary" || s == "both", field, "sensor must be primary|secondary|both");
      break;
    }
    case FaultKind::CommDelay: {
      const auto c = f.param("channel", "sensor");
      require(c == "sensor" || c == "ground", field, "channel must be sensor|ground");
      break;
    }
    case FaultKind::PhysicalObstruction: {
      const auto id = f.param("intruder", "all");
      require(id == "all" || intruder_ids.count(id) > 0, field, "unknown intruder '" + id + "'");
      break;
    }
    case FaultKind::PhantomDetection: {
      const double period = f.param_real("period", 5.0);
      require(period >= 2.0 && period == std::floor(period), field, "period must be an integer >= 2 ticks");
      require(f.param_real("min_range", 300.0) > 0.0 &&
                  f.param_real("max_range", 2500.0) >= f.param_real("min_range", 300.0),
              field, "need 0 < min_range <= max_range");
      break;
    }
    case FaultKind::StageDisable: {
      const auto s = f.param("stage");
      require(s == "detection" || s == "tracking" || s == "assessment" || s == "maneuver", field,
              "stage must be detection|tracking|assessment|maneuver");
      break;
    }
    default: break;
  }
}

}  // namespace

bool FaultInjection::active(double t) const { return t >= t_start && t <= t_end; }

std::string FaultInjection::param(const std::string& key, const std::string& fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

double FaultInjection::param_real(const std::string& key, double fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  return to_double(it->second).value_or(fallback);
}

long long Scenario::tick_count() const {
  return static_cast<long long>(std::floor(duration / dt + 1e-9)) + 1;
}

Scenario load_scenario(std::string_view text) {
  Scenario sc;
  bool have_scenario = false, have_own = false;
  std::set<std::string> ids;
  std::set<std::string> seen_sections;

  const auto sections = split_sections(text, false);
  for (const Section& s : sections) {
    if (s.kind != "intruder" && s.kind != "fault") {
      if (!s.label.empty()) throw ScenarioParseError(s.line, "[" + s.kind + "] takes no label");
      if (!seen_sections.insert(s.kind).second)
        throw ScenarioParseError(s.line, "duplicate section [" + s.kind + "]");
    }
    if (s.kind == "scenario") {
      have_scenario = true;
      for (const auto& e : s.entries) {
        if (e.key == "name") sc.name = e.value;
        else if (e.key == "dt") sc.dt = number(e.value, e.line);
        else if (e.key == "duration") sc.duration = number(e.value, e.line);
        else unknown_key(e, s.kind);
      }
    } else if (s.kind == "sensor") {
      for (const auto& e : s.entries) {
        const double v = number(e.value, e.line);
        if (e.key == "detection_range") sc.sensor.detection_range = v;
        else if (e.key == "azimuth_for") sc.sensor.azimuth_for = v;
        else if (e.key == "elevation_for") sc.sensor.elevation_for = v;
        else if (e.key == "coop_range") sc.sensor.cooperative.range = v;
        else if (e.key == "coop_azimuth_for") sc.sensor.cooperative.azimuth_for = v;
        else if (e.key == "coop_elevation_for") sc.sensor.cooperative.elevation_for = v;
        else if (e.key == "update_period") sc.sensor.cooperative.update_period = v;
        else unknown_key(e, s.kind);
      }
    } else if (s.kind == "region") {
      for (const auto& e : s.entries) {
        const double v = number(e.value, e.line);
        if (e.key == "horizontal_radius") sc.region.horizontal_radius = v;
        else if (e.key == "vertical_half_height") sc.region.vertical_half_height = v;
        else unknown_key(e, s.kind);
      }
    } else if (s.kind == "own") {
      have_own = true;
      for (const auto& e : s.entries) {
        const auto v = numbers(e.value, 3, e.line);
        if (e.key == "position") sc.own.position = {v[0], v[1], v[2]};
        else if (e.key == "velocity") sc.own.velocity = {v[0], v[1], v[2]};
        else unknown_key(e, s.kind);
      }
    } else if (s.kind == "intruder") {
      if (s.label.empty()) throw ScenarioParseError(s.line, "[intruder] needs an id");
      IntruderSpec in;
      in.id = s.label;
      for (const auto& e : s.entries) {
        if (e.key == "position") {
          const auto v = numbers(e.value, 3, e.line);
          in.initial = {v[0], v[1], v[2]};
        } else if (e.key == "velocity") {
          const auto v = numbers(e.value, 3, e.line);
          in.segments.push_back({0.0, {v[0], v[1], v[2]}});
        } else if (e.key == "segment") {
          const auto v = numbers(e.value, 4, e.line);
          in.segments.push_back({v[0], {v[1], v[2], v[3]}});
        } else {
          unknown_key(e, s.kind);
        }
      }
      sc.intruders.push_back(std::move(in));
    } else if (s.kind == "fault") {
      FaultInjection f;
      bool have_kind = false;
      for (const auto& e : s.entries) {
        if (e.key == "kind") {
          const auto k = parse_fault_kind(e.value);
          if (!k) throw ScenarioParseError(e.line, "unknown fault kind '" + e.value + "'");
          f.kind = *k;
          have_kind = true;
        } else if (e.key == "start") {
          f.t_start = number(e.value, e.line);
        } else if (e.key == "end") {
          f.t_end = number(e.value, e.line);
        } else {
          if (e.value.find_first_of("|;=") != std::string::npos)
            throw ScenarioParseError(e.line, "reserved character in fault parameter");
          f.params[e.key] = e.value;
        }
      }
      if (!have_kind) throw ScenarioParseError(s.line, "[fault] needs a kind");
      sc.faults.push_back(std::move(f));
    } else {
      throw ScenarioParseError(s.line, "unknown section [" + s.kind + "]");
    }
  }

  if (!have_scenario) throw ScenarioValidationError("scenario", "missing [scenario] section");
  if (!have_own) throw ScenarioValidationError("own", "missing [own] section");

  require(!sc.name.empty() && sc.name.find_first_of("/\\ \t") == std::string::npos, "name",
          "must be a non-empty token without spaces or slashes");
  require(sc.dt > 0.0, "dt", "must be > 0");
  require(sc.duration >= sc.dt && sc.duration <= 1e6, "duration", "must be in [dt, 1e6]");
  require(sc.sensor.detection_range > 0.0, "sensor.detection_range", "must be > 0");
  require(sc.sensor.azimuth_for >= 0.0 && sc.sensor.azimuth_for <= 180.0, "sensor.azimuth_for", "must be in [0, 180]");
  require(sc.sensor.elevation_for >= 0.0 && sc.sensor.elevation_for <= 90.0, "sensor.elevation_for", "must be in [0, 90]");
  require(sc.sensor.cooperative.range > 0.0, "sensor.coop_range", "must be > 0");
  require(sc.sensor.cooperative.update_period > 0.0, "sensor.update_period", "must be > 0");
  require(sc.region.horizontal_radius > 0.0, "region.horizontal_radius", "must be > 0");
  require(sc.region.vertical_half_height > 0.0, "region.vertical_half_height", "must be > 0");
  require(sc.own.velocity.speed() <= kDefaultSpeedSanityBound, "own.velocity", "exceeds 350 m/s");

  for (const auto& in : sc.intruders) {
    const std::string field = "intruders";
    require(ids.insert(in.id).second, field, "duplicate intruder id '" + in.id + "'");
    require(in.id.find_first_of("|;=,") == std::string::npos, field, "id contains a reserved character");
    require(!in.segments.empty() && in.segments.front().t_start == 0.0, field,
            "intruder '" + in.id + "' needs a velocity segment starting at t=0");
    for (std::size_t i = 0; i < in.segments.size(); ++i) {
      require(in.segments[i].velocity.speed() <= kDefaultSpeedSanityBound, field,
              "intruder '" + in.id + "' speed exceeds 350 m/s");
      if (i > 0)
        require(in.segments[i].t_start > in.segments[i - 1].t_start, field,
                "intruder '" + in.id + "' segments must have increasing start times");
      require(in.segments[i].t_start <= sc.duration, field, "segment starts after the scenario ends");
    }
    require((in.initial - sc.own.position).norm() > 0.0, field, "intruder starts on own position");
  }
  for (std::size_t i = 0; i < sc.faults.size(); ++i) {
    const auto& f = sc.faults[i];
    const std::string field = "faults";
    require(f.t_start >= 0.0 && f.t_start <= f.t_end && f.t_end <= sc.duration, field,
            fmt::format("fault {} window must satisfy 0 <= start <= end <= duration", i + 1));
    validate_fault_params(f, field, ids);
  }
  return sc;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

void apply_pipeline_overrides(std::string_view text, PipelineConfig& cfg) {
  for (const Section& s : split_sections(text, true)) {
    for (const auto& e : s.entries) {
      const double v = number(e.value, e.line);
      if (e.key == "confirm_m") cfg.tracking.confirm_m = static_cast<int>(v);
      else if (e.key == "drop_after") cfg.tracking.drop_after = v;
      else if (e.key == "gate_radius") cfg.tracking.gate_radius = v;
      else if (e.key == "alpha") cfg.tracking.alpha = v;
      else if (e.key == "beta") cfg.tracking.beta = v;
      else if (e.key == "update_rate_min") cfg.tracking.update_rate_min = v;
      else if (e.key == "pos_accuracy_y") cfg.tracking.pos_accuracy_y = v;
      else if (e.key == "vel_accuracy_z") cfg.tracking.vel_accuracy_z = v;
      else if (e.key == "protected_radius") cfg.assessment.protected_radius = v;
      else if (e.key == "horizon") cfg.assessment.horizon = v;
      else if (e.key == "t_high") cfg.assessment.t_high = v;
      else if (e.key == "eps_v") cfg.assessment.eps_v = v;
      else if (e.key == "hysteresis") cfg.maneuver.hysteresis = v;
      else if (e.key == "self_test_period") cfg.self_test_period = v;
      else if (e.key == "speed_bound") cfg.speed_bound = v;
      else if (e.key == "turn_rate") cfg.turn_rate = v;
      else if (e.key == "vertical_rate") cfg.vertical_rate = v;
      else if (e.key == "substeps") cfg.substeps = static_cast<int>(v);
      else unknown_key(e, s.kind.empty() ? "config" : s.kind);
    }
  }
  if (!cfg.tracking.valid()) throw ScenarioValidationError("tracking", "invalid tracking configuration");
  if (!(cfg.self_test_period > 0.0)) throw ScenarioValidationError("self_test_period", "must be > 0");
  if (cfg.substeps < 1) throw ScenarioValidationError("substeps", "must be >= 1");
}

}  // namespace cas
