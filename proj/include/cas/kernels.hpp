#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "cas/assessment.hpp"
#include "cas/detection.hpp"

// Batch kernels. Each OpenMP version has a serial twin that the tests and
// the benchmark compare it against; results must be identical.
namespace cas::kernels {

/// Throws ZeroRelativePosition if any relative position is zero.
std::vector<CpaResult> cpa_batch(std::span<const Vec3> rel_pos, std::span<const Vec3> rel_vel,
                                 double eps_v = kDefaultMinRelativeSpeed);
std::vector<CpaResult> cpa_batch_serial(std::span<const Vec3> rel_pos, std::span<const Vec3> rel_vel,
                                        double eps_v = kDefaultMinRelativeSpeed);

/// 1 if validate_sensor_input accepts the frame, else 0.
std::vector<char> validate_batch(std::span<const SensorInput> frames);
std::vector<char> validate_batch_serial(std::span<const SensorInput> frames);

/// Detected measure ids per frame. Frames must pass validation
/// (std::invalid_argument otherwise).
std::vector<std::set<std::string>> detect_batch(std::span<const SensorInput> frames,
                                                const RegionParams& region);
std::vector<std::set<std::string>> detect_batch_serial(std::span<const SensorInput> frames,
                                                       const RegionParams& region);

}  // namespace cas::kernels
