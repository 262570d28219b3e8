#include "fploc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace fploc {

namespace {

// 100 Hz sampling and a 0.5 s step cadence give every synthetic step a
// well-separated peak (the detector's refractory interval is 0.3 s).
constexpr double kWalkSampleRate = 100.0;
constexpr double kWalkStepPeriod = 0.5;
constexpr double kWalkBaseline = 9.81;
constexpr double kWalkAmplitude = 3.0;
// Accelerometer jitter grows with the environment's noise knob.
constexpr double kAccelSigmaPerDbm = 0.1;

Eigen::Index grid_points_per_axis(double extent, double spacing) {
  return static_cast<Eigen::Index>(std::floor(extent / spacing + 1e-9)) + 1;
}

}  // namespace

SimConfig SimConfig::field_b8() {
  SimConfig config;
  config.width = 19.0;
  config.height = 8.0;
  config.ap_positions = {Position{0.0, 0.0}, Position{19.0, 0.0},
                         Position{19.0, 8.0}, Position{0.0, 8.0},
                         Position{9.5, 8.0}};
  return config;
}

ErrorStats ErrorStats::from_errors(std::vector<double> errors) {
  if (errors.empty()) {
    throw ShapeError("ErrorStats: empty error list");
  }
  std::sort(errors.begin(), errors.end());
  ErrorStats stats;
  const std::size_t n = errors.size();
  stats.mean = 0.0;
  for (double e : errors) {
    stats.mean += e;
  }
  stats.mean /= static_cast<double>(n);
  stats.median = (n % 2 == 1)
                     ? errors[n / 2]
                     : 0.5 * (errors[n / 2 - 1] + errors[n / 2]);
  const std::size_t p90_rank = static_cast<std::size_t>(
      std::ceil(0.9 * static_cast<double>(n)));
  stats.p90 = errors[p90_rank == 0 ? 0 : p90_rank - 1];
  stats.errors = std::move(errors);
  return stats;
}

double synth_rss(const Position& ap, const Position& point,
                 const SimConfig& config, double noise) {
  const double distance = std::max((ap - point).norm(), 0.1);
  const double rss = config.tx_power_dbm_at_1m -
                     10.0 * config.path_loss_exponent * std::log10(distance) +
                     noise;
  return std::clamp(rss, kRssFloorDbm, kRssCeilingDbm);
}

RssVector synth_fingerprint(const Position& point, const SimConfig& config,
                            std::mt19937_64& rng) {
  const Eigen::Index ap_count =
      static_cast<Eigen::Index>(config.ap_positions.size());
  RssVector rss(ap_count);
  std::normal_distribution<double> noise(0.0, config.noise_sigma);
  for (Eigen::Index a = 0; a < ap_count; ++a) {
    const double draw = config.noise_sigma > 0.0 ? noise(rng) : 0.0;
    rss[a] = synth_rss(config.ap_positions[static_cast<std::size_t>(a)], point,
                       config, draw);
  }
  return rss;
}

std::vector<Fingerprint> generate_grid_samples(const SimConfig& config,
                                               std::mt19937_64& rng) {
  const Eigen::Index nx = grid_points_per_axis(config.width, config.grid_spacing);
  const Eigen::Index ny = grid_points_per_axis(config.height, config.grid_spacing);
  std::vector<Fingerprint> samples;
  samples.reserve(static_cast<std::size_t>(nx * ny * config.samples_per_point));
  for (Eigen::Index iy = 0; iy < ny; ++iy) {
    for (Eigen::Index ix = 0; ix < nx; ++ix) {
      const Position point{static_cast<double>(ix) * config.grid_spacing,
                           static_cast<double>(iy) * config.grid_spacing};
      for (int s = 0; s < config.samples_per_point; ++s) {
        samples.push_back(Fingerprint{point, synth_fingerprint(point, config, rng)});
      }
    }
  }
  return samples;
}

Environment generate_environment(const SimConfig& config) {
  std::mt19937_64 rng(config.seed);
  const std::vector<Fingerprint> samples = generate_grid_samples(config, rng);
  RadioMap map = build_radio_map(
      samples, static_cast<Eigen::Index>(config.ap_positions.size()),
      config.grid_spacing);

  std::uniform_real_distribution<double> ux(0.0, config.width);
  std::uniform_real_distribution<double> uy(0.0, config.height);
  std::vector<Fingerprint> test_set;
  test_set.reserve(static_cast<std::size_t>(config.test_samples));
  for (int i = 0; i < config.test_samples; ++i) {
    const Position truth{ux(rng), uy(rng)};
    test_set.push_back(Fingerprint{truth, synth_fingerprint(truth, config, rng)});
  }
  return Environment{std::move(map), std::move(test_set)};
}

std::vector<ErrorStats> run_benchmark(const SimConfig& config,
                                      const std::vector<LocateConfig>& algorithms) {
  const Environment env = generate_environment(config);
  std::vector<ErrorStats> results;
  results.reserve(algorithms.size());
  for (const LocateConfig& algorithm : algorithms) {
    std::vector<double> errors;
    errors.reserve(env.test_set.size());
    for (const Fingerprint& query : env.test_set) {
      const Position estimate = locate(env.map, query.rss, algorithm);
      errors.push_back((estimate - query.position).norm());
    }
    results.push_back(ErrorStats::from_errors(std::move(errors)));
  }
  return results;
}

std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> errors) {
  if (errors.empty()) {
    throw ShapeError("empirical_cdf: empty error list");
  }
  std::sort(errors.begin(), errors.end());
  std::vector<std::pair<double, double>> cdf;
  cdf.reserve(errors.size());
  const double n = static_cast<double>(errors.size());
  for (std::size_t i = 0; i < errors.size(); ++i) {
    cdf.emplace_back(errors[i], static_cast<double>(i + 1) / n);
  }
  return cdf;
}

WalkData simulate_walk(const std::vector<Position>& true_path,
                       const SimConfig& config, const PdrConfig& pdr_config) {
  if (true_path.size() < 2) {
    throw GeometryError("simulate_walk: path needs at least two waypoints");
  }

  // Segment bearings and cumulative arc length.
  std::vector<double> segment_end_arc(true_path.size() - 1);
  std::vector<double> segment_bearing(true_path.size() - 1);
  double total_length = 0.0;
  for (std::size_t s = 0; s + 1 < true_path.size(); ++s) {
    const Position delta = true_path[s + 1] - true_path[s];
    const double length = delta.norm();
    if (length == 0.0) {
      throw GeometryError("simulate_walk: repeated waypoint at index " +
                          std::to_string(s + 1));
    }
    total_length += length;
    segment_end_arc[s] = total_length;
    segment_bearing[s] = wrap_angle(std::atan2(delta.y(), delta.x()));
  }

  const int step_count = static_cast<int>(
      std::floor(total_length / pdr_config.step_length + 1e-9));

  // Heading per step: the segment whose arc interval the step lands in.
  std::vector<double> step_headings(static_cast<std::size_t>(step_count));
  std::size_t segment = 0;
  for (int k = 0; k < step_count; ++k) {
    const double arc = (static_cast<double>(k) + 1.0) * pdr_config.step_length;
    while (segment + 1 < segment_end_arc.size() &&
           arc > segment_end_arc[segment] + 1e-9) {
      ++segment;
    }
    step_headings[static_cast<std::size_t>(k)] = segment_bearing[segment];
  }

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> accel_noise(
      0.0, kAccelSigmaPerDbm * config.noise_sigma);

  const double dt = 1.0 / kWalkSampleRate;
  const double duration = static_cast<double>(step_count) * kWalkStepPeriod;
  const std::size_t sample_count =
      static_cast<std::size_t>(std::llround(duration / dt));

  WalkData walk;
  walk.trace.reserve(sample_count);
  for (std::size_t i = 0; i < sample_count; ++i) {
    const double t = static_cast<double>(i) * dt;
    double magnitude =
        kWalkBaseline +
        kWalkAmplitude * std::sin(2.0 * std::numbers::pi * t / kWalkStepPeriod);
    if (config.noise_sigma > 0.0) {
      magnitude += accel_noise(rng);
    }
    const std::size_t step_index = std::min(
        static_cast<std::size_t>(t / kWalkStepPeriod),
        step_headings.empty() ? std::size_t{0} : step_headings.size() - 1);
    const double heading =
        step_headings.empty() ? 0.0 : step_headings[step_index];
    walk.trace.push_back(
        SensorSample{t, Eigen::Vector3d{0.0, 0.0, magnitude}, heading});
  }

  walk.waypoint_rss.reserve(true_path.size());
  for (const Position& waypoint : true_path) {
    walk.waypoint_rss.push_back(synth_fingerprint(waypoint, config, rng));
  }
  return walk;
}

std::vector<std::pair<int, double>> sweep_k(const SimConfig& config,
                                            const std::vector<int>& k_values,
                                            int folds, double success_radius,
                                            std::uint64_t seed) {
  SimConfig seeded = config;
  seeded.seed = seed;
  std::mt19937_64 rng(seeded.seed);
  const std::vector<Fingerprint> samples = generate_grid_samples(seeded, rng);

  std::vector<std::pair<int, double>> scores;
  scores.reserve(k_values.size());
  for (int k : k_values) {
    LocateConfig cv_config;
    cv_config.algorithm = Algorithm::WKNN;
    cv_config.k = k;
    scores.emplace_back(
        k, cross_validate(samples, cv_config, folds, success_radius, seed));
  }
  return scores;
}

}  // namespace fploc
