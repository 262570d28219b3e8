#ifndef FPLOC_LOCATOR_HPP
#define FPLOC_LOCATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fploc/fingerprint.hpp"
#include "fploc/types.hpp"

namespace fploc {

enum class Algorithm { NN, KNN, WKNN };

std::string algorithm_name(Algorithm algorithm);
// Throws ParseError for anything other than nn/knn/wknn (case-insensitive).
Algorithm algorithm_from_name(const std::string& name);

struct LocateConfig {
  Algorithm algorithm = Algorithm::WKNN;
  int k = 5;
  // Floor applied to fingerprint distances before taking reciprocals for
  // weights; keeps an exact fingerprint match from dividing by zero and
  // makes it converge to the plain nearest-neighbor answer.
  double epsilon = 1e-6;
};

struct Neighbor {
  Position position{0.0, 0.0};
  double distance = 0.0;
  // Reciprocal-distance weight; filled by the weighted estimator, zero
  // otherwise.
  double weight = 0.0;
};

// The k reference points closest to the query in fingerprint space,
// ascending by distance. Equidistant points are reported in (x, y)
// order, so results never depend on map insertion order.
// Throws ShapeError (query length), CapacityError (k out of range).
std::vector<Neighbor> nearest_neighbors(const RadioMap& map,
                                        const Eigen::Ref<const RssVector>& query,
                                        int k);

// Position of the single closest reference point.
Position locate_nn(const RadioMap& map, const Eigen::Ref<const RssVector>& query);

// Unweighted centroid of the k closest reference points.
Position locate_knn(const RadioMap& map, const Eigen::Ref<const RssVector>& query,
                    int k);

// Normalized reciprocal-distance weights. Distances are clamped below
// at epsilon first; the result sums to 1. Throws ShapeError for an
// empty list, DomainError for a non-positive epsilon.
Eigen::VectorXd wknn_weights(const Eigen::Ref<const Eigen::VectorXd>& distances,
                             double epsilon);

// nearest_neighbors with each neighbor's reciprocal-distance weight
// filled in; the weights sum to 1.
std::vector<Neighbor> weighted_neighbors(const RadioMap& map,
                                         const Eigen::Ref<const RssVector>& query,
                                         int k, double epsilon = 1e-6);

// Weighted centroid of the k closest reference points, weights from
// wknn_weights.
Position locate_wknn(const RadioMap& map, const Eigen::Ref<const RssVector>& query,
                     int k, double epsilon = 1e-6);

// Dispatch on config.algorithm.
Position locate(const RadioMap& map, const Eigen::Ref<const RssVector>& query,
                const LocateConfig& config);

// k-fold hold-out score in [0, 1]: shuffle samples by seed, split into
// folds, build a radio map from each training part, locate every
// held-out sample, and count it a hit when the estimate lands within
// success_radius of the true position. Deterministic for fixed inputs.
// Throws CapacityError when a training fold has fewer than config.k
// distinct positions, DomainError for folds < 2.
double cross_validate(const std::vector<Fingerprint>& samples,
                      const LocateConfig& config, int folds,
                      double success_radius, std::uint64_t seed);

}  // namespace fploc

#endif  // FPLOC_LOCATOR_HPP
