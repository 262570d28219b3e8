#ifndef FPLOC_PDR_HPP
#define FPLOC_PDR_HPP

#include <vector>

#include "fploc/fingerprint.hpp"
#include "fploc/locator.hpp"
#include "fploc/types.hpp"

namespace fploc {

// One inertial sample: specific force in m/s^2 and the azimuth measured
// counterclockwise from the +x axis, radians in [0, 2*pi).
struct SensorSample {
  double t = 0.0;
  Eigen::Vector3d accel{0.0, 0.0, 0.0};
  double heading = 0.0;
};

// A detected step and the heading sampled at its acceleration peak.
struct StepEvent {
  double t = 0.0;
  double heading = 0.0;
};

struct PdrConfig {
  // Static step model: every step advances by the same length.
  double step_length = 0.7;       // meters
  double accel_threshold = 10.8;  // m/s^2, magnitude a peak must exceed
  double min_step_interval = 0.3; // seconds between emitted steps
};

struct TrajectoryPoint {
  double t = 0.0;
  Position position{0.0, 0.0};
};

// Timestamped path; the first entry is the initial fix.
using Trajectory = std::vector<TrajectoryPoint>;

// Normalize an angle into [0, 2*pi).
double wrap_angle(double radians);

// Gait detection: emit a step at each interior local maximum of the
// acceleration magnitude that exceeds config.accel_threshold, skipping
// peaks closer than config.min_step_interval to the previous emitted
// step. An empty trace yields an empty list.
std::vector<StepEvent> detect_steps(const std::vector<SensorSample>& trace,
                                    const PdrConfig& config);

// One dead-reckoning update:
//   (x + d*cos(heading), y + d*sin(heading)).
Position pdr_step(const Position& current, double step_length, double heading);

// Fold pdr_step over the detected steps starting from the initial fix.
// The first trajectory entry carries start_time; step timestamps must be
// strictly increasing and later than start_time (OrderingError otherwise).
Trajectory track(const Position& initial_fix,
                 const std::vector<StepEvent>& steps, const PdrConfig& config,
                 double start_time = 0.0);

// Hybrid tracker: a weighted-k-nearest-neighbor fix seeds the trajectory,
// dead reckoning extends it through the sensor trace.
Trajectory fused_track(const RadioMap& map,
                       const Eigen::Ref<const RssVector>& initial_query,
                       const std::vector<SensorSample>& trace,
                       const LocateConfig& locate_config,
                       const PdrConfig& pdr_config);

}  // namespace fploc

#endif  // FPLOC_PDR_HPP
