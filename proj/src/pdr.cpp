#include "fploc/pdr.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fploc {

double wrap_angle(double radians) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(radians, two_pi);
  if (wrapped < 0.0) {
    wrapped += two_pi;
  }
  // fmod of a slightly-negative value can land exactly on two_pi.
  if (wrapped >= two_pi) {
    wrapped = 0.0;
  }
  return wrapped;
}

std::vector<StepEvent> detect_steps(const std::vector<SensorSample>& trace,
                                    const PdrConfig& config) {
  std::vector<StepEvent> steps;
  if (trace.size() < 3) {
    return steps;
  }

  double previous_magnitude = trace[0].accel.norm();
  double magnitude = trace[1].accel.norm();
  double last_step_time = 0.0;
  for (std::size_t i = 1; i + 1 < trace.size(); ++i) {
    const double next_magnitude = trace[i + 1].accel.norm();
    // Strict rise into the peak keeps a flat plateau from emitting more
    // than one step.
    const bool is_peak =
        previous_magnitude < magnitude && magnitude >= next_magnitude;
    if (is_peak && magnitude > config.accel_threshold &&
        (steps.empty() ||
         trace[i].t - last_step_time >= config.min_step_interval)) {
      steps.push_back(StepEvent{trace[i].t, trace[i].heading});
      last_step_time = trace[i].t;
    }
    previous_magnitude = magnitude;
    magnitude = next_magnitude;
  }
  return steps;
}

Position pdr_step(const Position& current, double step_length, double heading) {
  return Position{current.x() + step_length * std::cos(heading),
                  current.y() + step_length * std::sin(heading)};
}

Trajectory track(const Position& initial_fix,
                 const std::vector<StepEvent>& steps, const PdrConfig& config,
                 double start_time) {
  Trajectory trajectory;
  trajectory.reserve(steps.size() + 1);
  trajectory.push_back(TrajectoryPoint{start_time, initial_fix});

  double previous_time = start_time;
  for (const StepEvent& step : steps) {
    if (step.t <= previous_time) {
      throw OrderingError("track: step timestamps must be strictly increasing (" +
                          std::to_string(step.t) + " after " +
                          std::to_string(previous_time) + ")");
    }
    trajectory.push_back(TrajectoryPoint{
        step.t,
        pdr_step(trajectory.back().position, config.step_length, step.heading)});
    previous_time = step.t;
  }
  return trajectory;
}

Trajectory fused_track(const RadioMap& map,
                       const Eigen::Ref<const RssVector>& initial_query,
                       const std::vector<SensorSample>& trace,
                       const LocateConfig& locate_config,
                       const PdrConfig& pdr_config) {
  const Position initial_fix =
      locate_wknn(map, initial_query, locate_config.k, locate_config.epsilon);
  const std::vector<StepEvent> steps = detect_steps(trace, pdr_config);
  const double start_time = trace.empty() ? 0.0 : trace.front().t;
  return track(initial_fix, steps, pdr_config, start_time);
}

}  // namespace fploc
