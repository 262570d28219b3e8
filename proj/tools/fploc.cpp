// Command-line front end: map building, locating, tracking, the
// synthetic benchmark and the localization server.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fploc/fingerprint.hpp"
#include "fploc/locator.hpp"
#include "fploc/pdr.hpp"
#include "fploc/server.hpp"
#include "fploc/service.hpp"
#include "fploc/sim.hpp"
#include "fploc/store.hpp"

namespace {

using namespace fploc;

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

RssVector parse_rss_flag(const std::string& csv) {
  std::vector<double> values;
  std::size_t begin = 0;
  while (true) {
    const std::size_t comma = csv.find(',', begin);
    const std::string cell = csv.substr(
        begin, comma == std::string::npos ? std::string::npos : comma - begin);
    try {
      std::size_t used = 0;
      const double value = std::stod(cell, &used);
      if (used != cell.size()) {
        throw std::invalid_argument(cell);
      }
      values.push_back(value);
    } catch (const std::exception&) {
      throw ParseError("--rss: '" + cell + "' is not a number");
    }
    if (comma == std::string::npos) {
      break;
    }
    begin = comma + 1;
  }
  RssVector rss(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    rss[static_cast<Eigen::Index>(i)] = values[i];
  }
  return rss;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw StorageError("cannot open '" + path + "' for writing");
  }
  return out;
}

void write_trajectory(std::ostream& out, const Trajectory& trajectory) {
  out << "t,x,y\n";
  for (const TrajectoryPoint& point : trajectory) {
    out << format_number(point.t) << ',' << format_number(point.position.x())
        << ',' << format_number(point.position.y()) << '\n';
  }
}

SimConfig preset_config(const std::string& preset, std::uint64_t seed,
                        double noise_sigma) {
  SimConfig config;
  if (preset == "field-b8") {
    config = SimConfig::field_b8();
  } else if (!preset.empty() && preset != "default") {
    throw ParseError("unknown preset '" + preset + "'");
  }
  config.seed = seed;
  config.noise_sigma = noise_sigma;
  return config;
}

int cmd_build_map(const std::string& store_path) {
  const std::vector<Fingerprint> records = load_store_file(store_path);
  if (records.empty()) {
    throw EmptyMapError("store '" + store_path + "' has no records");
  }
  const RadioMap map =
      build_radio_map(records, records.front().rss.size(), 1.0);
  std::cout << map.size() << " reference points, " << map.ap_count()
            << " APs\n";
  return 0;
}

int cmd_locate(const std::string& store_path, const std::string& rss_csv,
               const std::string& algorithm, int k) {
  const std::vector<Fingerprint> records = load_store_file(store_path);
  if (records.empty()) {
    throw EmptyMapError("store '" + store_path + "' has no records");
  }
  const RadioMap map =
      build_radio_map(records, records.front().rss.size(), 1.0);
  LocateConfig config;
  config.algorithm = algorithm_from_name(algorithm);
  config.k = k;
  const Position estimate = locate(map, parse_rss_flag(rss_csv), config);
  std::cout << format_number(estimate.x()) << ',' << format_number(estimate.y())
            << '\n';
  return 0;
}

int cmd_track(const std::string& store_path, const std::string& rss_csv,
              const std::string& trace_path, const std::string& out_path,
              int k) {
  const std::vector<Fingerprint> records = load_store_file(store_path);
  if (records.empty()) {
    throw EmptyMapError("store '" + store_path + "' has no records");
  }
  const RadioMap map =
      build_radio_map(records, records.front().rss.size(), 1.0);
  LocateConfig locate_config;
  locate_config.k = k;
  const Trajectory trajectory =
      fused_track(map, parse_rss_flag(rss_csv), load_trace_file(trace_path),
                  locate_config, PdrConfig{});
  if (out_path.empty()) {
    write_trajectory(std::cout, trajectory);
  } else {
    auto out = open_output(out_path);
    write_trajectory(out, trajectory);
  }
  return 0;
}

int cmd_simulate(const std::string& preset, std::uint64_t seed,
                 double noise_sigma, const std::string& out_dir) {
  const SimConfig config = preset_config(preset, seed, noise_sigma);
  const std::vector<LocateConfig> algorithms = {
      LocateConfig{Algorithm::NN, 1, 1e-6},
      LocateConfig{Algorithm::KNN, 5, 1e-6},
      LocateConfig{Algorithm::WKNN, 5, 1e-6},
  };
  const std::vector<ErrorStats> results = run_benchmark(config, algorithms);

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  auto stats_out = open_output((dir / "stats.csv").string());
  stats_out << "algorithm,mean,median,p90\n";
  for (std::size_t i = 0; i < algorithms.size(); ++i) {
    const std::string name = algorithm_name(algorithms[i].algorithm);
    auto cdf_out = open_output((dir / ("cdf_" + name + ".csv")).string());
    cdf_out << "error,probability\n";
    for (const auto& [error, probability] : empirical_cdf(results[i].errors)) {
      cdf_out << format_number(error) << ',' << format_number(probability)
              << '\n';
    }
    stats_out << name << ',' << format_number(results[i].mean) << ','
              << format_number(results[i].median) << ','
              << format_number(results[i].p90) << '\n';
  }
  std::cout << "wrote stats.csv and per-algorithm CDFs to " << out_dir << '\n';
  return 0;
}

int cmd_sweep_k(const std::string& preset, std::uint64_t seed,
                double noise_sigma, int k_min, int k_max, int folds,
                double radius, const std::string& out_path) {
  const SimConfig config = preset_config(preset, seed, noise_sigma);
  std::vector<int> k_values;
  for (int k = k_min; k <= k_max; ++k) {
    k_values.push_back(k);
  }
  const auto scores = sweep_k(config, k_values, folds, radius, seed);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file = open_output(out_path);
    out = &file;
  }
  *out << "k,score\n";
  for (const auto& [k, score] : scores) {
    *out << k << ',' << format_number(score) << '\n';
  }
  return 0;
}

int cmd_serve(const std::string& db_path, int port) {
  LocalizationService service(db_path);
  TcpServer server(service, static_cast<std::uint16_t>(port));
  server.start();
  std::cout << "listening on 127.0.0.1:" << server.port() << ", store: "
            << db_path << '\n';
  server.run_until_shutdown();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wi-Fi fingerprint + dead-reckoning indoor localization toolkit"};
  app.require_subcommand(1);

  std::string store_path;
  std::string rss_csv;
  std::string trace_path;
  std::string out_path;
  std::string out_dir = ".";
  std::string algorithm = "wknn";
  std::string preset = "default";
  std::uint64_t seed = 0;
  double noise_sigma = SimConfig{}.noise_sigma;
  int k = 5;
  int k_min = 1;
  int k_max = 8;
  int folds = 10;
  double radius = 2.0;
  int port = 5555;
  std::string db_path = "fingerprints.csv";

  CLI::App* build = app.add_subcommand("build-map", "Build a radio map from a fingerprint CSV and report its size");
  build->add_option("store", store_path, "fingerprint CSV")->required();

  CLI::App* locate_cmd = app.add_subcommand("locate", "Estimate a position for one fingerprint");
  locate_cmd->add_option("store", store_path, "fingerprint CSV")->required();
  locate_cmd->add_option("--rss", rss_csv, "comma-separated dBm values")->required();
  locate_cmd->add_option("--algo", algorithm, "nn, knn or wknn");
  locate_cmd->add_option("--k", k, "neighbor count");

  CLI::App* track_cmd = app.add_subcommand("track", "Fix a start position, then dead-reckon through a sensor trace");
  track_cmd->add_option("store", store_path, "fingerprint CSV")->required();
  track_cmd->add_option("--rss", rss_csv, "fingerprint at the start position")->required();
  track_cmd->add_option("--trace", trace_path, "sensor trace CSV (t,ax,ay,az,heading)")->required();
  track_cmd->add_option("--out", out_path, "trajectory CSV (stdout when omitted)");
  track_cmd->add_option("--k", k, "neighbor count for the initial fix");

  CLI::App* sim_cmd = app.add_subcommand("simulate", "Benchmark nn/knn/wknn on a synthetic environment");
  sim_cmd->add_option("--preset", preset, "default or field-b8");
  sim_cmd->add_option("--seed", seed, "RNG seed");
  sim_cmd->add_option("--noise-sigma", noise_sigma, "signal noise, dBm");
  sim_cmd->add_option("--out-dir", out_dir, "output directory");

  CLI::App* sweep_cmd = app.add_subcommand("sweep-k", "Cross-validation score per neighbor count");
  sweep_cmd->add_option("--preset", preset, "default or field-b8");
  sweep_cmd->add_option("--seed", seed, "RNG seed");
  sweep_cmd->add_option("--noise-sigma", noise_sigma, "signal noise, dBm");
  sweep_cmd->add_option("--k-min", k_min, "first k");
  sweep_cmd->add_option("--k-max", k_max, "last k");
  sweep_cmd->add_option("--folds", folds, "cross-validation folds");
  sweep_cmd->add_option("--radius", radius, "success radius, meters");
  sweep_cmd->add_option("--out", out_path, "k,score CSV (stdout when omitted)");

  CLI::App* serve_cmd = app.add_subcommand("serve", "Run the line-protocol localization server");
  serve_cmd->add_option("--port", port, "TCP port (0 for ephemeral)");
  serve_cmd->add_option("--db", db_path, "fingerprint store path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return cmd_build_map(store_path);
    if (locate_cmd->parsed()) return cmd_locate(store_path, rss_csv, algorithm, k);
    if (track_cmd->parsed()) return cmd_track(store_path, rss_csv, trace_path, out_path, k);
    if (sim_cmd->parsed()) return cmd_simulate(preset, seed, noise_sigma, out_dir);
    if (sweep_cmd->parsed()) return cmd_sweep_k(preset, seed, noise_sigma, k_min, k_max, folds, radius, out_path);
    if (serve_cmd->parsed()) return cmd_serve(db_path, port);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
