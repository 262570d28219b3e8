#include "fploc/locator.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <random>
#include <set>
#include <utility>

namespace fploc {

std::string algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::NN:
      return "nn";
    case Algorithm::KNN:
      return "knn";
    case Algorithm::WKNN:
      return "wknn";
  }
  return "unknown";
}

Algorithm algorithm_from_name(const std::string& name) {
  std::string lower;
  lower.reserve(name.size());
  for (char c : name) {
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (lower == "nn") return Algorithm::NN;
  if (lower == "knn") return Algorithm::KNN;
  if (lower == "wknn") return Algorithm::WKNN;
  throw ParseError("unknown algorithm '" + name + "'");
}

std::vector<Neighbor> nearest_neighbors(const RadioMap& map,
                                        const Eigen::Ref<const RssVector>& query,
                                        int k) {
  if (query.size() != map.ap_count()) {
    throw ShapeError("nearest_neighbors: query has " +
                     std::to_string(query.size()) + " values, map has " +
                     std::to_string(map.ap_count()) + " APs");
  }
  if (k < 1) {
    throw CapacityError("nearest_neighbors: k must be >= 1");
  }
  if (k > map.size()) {
    throw CapacityError("nearest_neighbors: k=" + std::to_string(k) +
                        " exceeds map size " + std::to_string(map.size()));
  }

  const double n_ap = static_cast<double>(map.ap_count());
  const Eigen::VectorXd distances =
      ((map.rss().rowwise() - query.transpose()).rowwise().squaredNorm() / n_ap)
          .cwiseSqrt();

  // Map rows are sorted by (x, y), so (distance, row) ordering realizes
  // the lexicographic tie rule.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(map.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&distances](Eigen::Index a, Eigen::Index b) {
                      if (distances[a] != distances[b]) {
                        return distances[a] < distances[b];
                      }
                      return a < b;
                    });

  std::vector<Neighbor> result(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const Eigen::Index row = order[static_cast<std::size_t>(i)];
    result[static_cast<std::size_t>(i)] =
        Neighbor{map.position(row), distances[row], 0.0};
  }
  return result;
}

Position locate_nn(const RadioMap& map,
                   const Eigen::Ref<const RssVector>& query) {
  return nearest_neighbors(map, query, 1).front().position;
}

Position locate_knn(const RadioMap& map,
                    const Eigen::Ref<const RssVector>& query, int k) {
  const std::vector<Neighbor> neighbors = nearest_neighbors(map, query, k);
  Position sum{0.0, 0.0};
  for (const Neighbor& n : neighbors) {
    sum += n.position;
  }
  return sum / static_cast<double>(k);
}

Eigen::VectorXd wknn_weights(const Eigen::Ref<const Eigen::VectorXd>& distances,
                             double epsilon) {
  if (distances.size() == 0) {
    throw ShapeError("wknn_weights: empty distance list");
  }
  if (!(epsilon > 0.0)) {
    throw DomainError("wknn_weights: epsilon must be positive");
  }
  const Eigen::VectorXd reciprocal =
      distances.cwiseMax(epsilon).cwiseInverse();
  return reciprocal / reciprocal.sum();
}

std::vector<Neighbor> weighted_neighbors(const RadioMap& map,
                                         const Eigen::Ref<const RssVector>& query,
                                         int k, double epsilon) {
  std::vector<Neighbor> neighbors = nearest_neighbors(map, query, k);
  Eigen::VectorXd distances(k);
  for (int i = 0; i < k; ++i) {
    distances[i] = neighbors[static_cast<std::size_t>(i)].distance;
  }
  const Eigen::VectorXd weights = wknn_weights(distances, epsilon);
  for (int i = 0; i < k; ++i) {
    neighbors[static_cast<std::size_t>(i)].weight = weights[i];
  }
  return neighbors;
}

Position locate_wknn(const RadioMap& map,
                     const Eigen::Ref<const RssVector>& query, int k,
                     double epsilon) {
  Position estimate{0.0, 0.0};
  for (const Neighbor& neighbor : weighted_neighbors(map, query, k, epsilon)) {
    estimate += neighbor.weight * neighbor.position;
  }
  return estimate;
}

Position locate(const RadioMap& map, const Eigen::Ref<const RssVector>& query,
                const LocateConfig& config) {
  switch (config.algorithm) {
    case Algorithm::NN:
      return locate_nn(map, query);
    case Algorithm::KNN:
      return locate_knn(map, query, config.k);
    case Algorithm::WKNN:
      break;
  }
  return locate_wknn(map, query, config.k, config.epsilon);
}

double cross_validate(const std::vector<Fingerprint>& samples,
                      const LocateConfig& config, int folds,
                      double success_radius, std::uint64_t seed) {
  if (folds < 2) {
    throw DomainError("cross_validate: folds must be >= 2");
  }
  if (samples.size() < static_cast<std::size_t>(folds)) {
    throw CapacityError("cross_validate: fewer samples than folds");
  }
  const Eigen::Index ap_count = samples.front().rss.size();

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t n = order.size();
  std::int64_t hits = 0;
  std::int64_t total = 0;
  for (int fold = 0; fold < folds; ++fold) {
    const std::size_t begin = n * static_cast<std::size_t>(fold) /
                              static_cast<std::size_t>(folds);
    const std::size_t end = n * (static_cast<std::size_t>(fold) + 1) /
                            static_cast<std::size_t>(folds);

    std::vector<Fingerprint> training;
    training.reserve(n - (end - begin));
    std::set<std::pair<double, double>> training_positions;
    for (std::size_t i = 0; i < n; ++i) {
      if (i >= begin && i < end) continue;
      const Fingerprint& sample = samples[order[i]];
      training.push_back(sample);
      training_positions.emplace(sample.position.x(), sample.position.y());
    }
    if (training_positions.size() < static_cast<std::size_t>(config.k)) {
      throw CapacityError(
          "cross_validate: training fold has " +
          std::to_string(training_positions.size()) +
          " distinct positions, fewer than k=" + std::to_string(config.k));
    }

    const RadioMap map = build_radio_map(training, ap_count, 1.0);
    for (std::size_t i = begin; i < end; ++i) {
      const Fingerprint& held_out = samples[order[i]];
      const Position estimate = locate(map, held_out.rss, config);
      if ((estimate - held_out.position).norm() <= success_radius) {
        ++hits;
      }
      ++total;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace fploc
