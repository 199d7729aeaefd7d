#include "cas/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace cas::kernels {

namespace {

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("cpa_batch: position and velocity counts differ");
}

std::set<std::string> detected_ids(const SensorInput& frame, const RegionParams& region) {
  std::set<std::string> ids;
  for (const auto& tr : detect(validate_sensor_input(frame), region).traffic) ids.insert(tr.measure_id);
  return ids;
}

}  // namespace

std::vector<CpaResult> cpa_batch(std::span<const Vec3> p, std::span<const Vec3> v, double eps_v) {
  check_sizes(p.size(), v.size());
  const auto n = static_cast<long long>(p.size());
  std::vector<CpaResult> out(p.size());
  std::atomic<bool> zero{false};
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    try {
      out[i] = cpa(p[i], v[i], eps_v);
    } catch (const ZeroRelativePosition&) {
      zero = true;
    }
  }
  if (zero) throw ZeroRelativePosition();
  return out;
}

std::vector<CpaResult> cpa_batch_serial(std::span<const Vec3> p, std::span<const Vec3> v, double eps_v) {
  check_sizes(p.size(), v.size());
  std::vector<CpaResult> out;
  out.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out.push_back(cpa(p[i], v[i], eps_v));
  return out;
}

std::vector<char> validate_batch(std::span<const SensorInput> frames) {
  const auto n = static_cast<long long>(frames.size());
  std::vector<char> out(frames.size(), 0);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    try {
      validate_sensor_input(frames[i]);
      out[i] = 1;
    } catch (const SensorInputError&) {
    }
  }
  return out;
}

std::vector<char> validate_batch_serial(std::span<const SensorInput> frames) {
  std::vector<char> out;
  out.reserve(frames.size());
  for (const auto& f : frames) {
    try {
      validate_sensor_input(f);
      out.push_back(1);
    } catch (const SensorInputError&) {
      out.push_back(0);
    }
  }
  return out;
}

std::vector<std::set<std::string>> detect_batch(std::span<const SensorInput> frames,
                                                const RegionParams& region) {
  const auto n = static_cast<long long>(frames.size());
  std::vector<std::set<std::string>> out(frames.size());
  std::atomic<bool> invalid{false};
#pragma omp parallel for schedule(dynamic, 64)
  for (long long i = 0; i < n; ++i) {
    try {
      out[i] = detected_ids(frames[i], region);
    } catch (const SensorInputError&) {
      invalid = true;
    }
  }
  if (invalid) throw std::invalid_argument("detect_batch: frame fails validation");
  return out;
}

std::vector<std::set<std::string>> detect_batch_serial(std::span<const SensorInput> frames,
                                                       const RegionParams& region) {
  std::vector<std::set<std::string>> out;
  out.reserve(frames.size());
  for (const auto& f : frames) {
    try {
      out.push_back(detected_ids(f, region));
    } catch (const SensorInputError&) {
      throw std::invalid_argument("detect_batch: frame fails validation");
    }
  }
  return out;
}

}  // namespace cas::kernels
