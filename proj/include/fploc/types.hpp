#ifndef FPLOC_TYPES_HPP
#define FPLOC_TYPES_HPP

#include <Eigen/Core>

namespace fploc {

// Planar coordinate in meters.
using Position = Eigen::Vector2d;

// One received-signal-strength value (dBm) per access point; the
// "location fingerprint" of a spot.
using RssVector = Eigen::VectorXd;

// Reference-point coordinates stacked row-wise.
using PositionMatrix = Eigen::Matrix<double, Eigen::Dynamic, 2>;

// Fingerprints stacked row-wise: rows = reference points, cols = APs.
using RssMatrix = Eigen::MatrixXd;

// Hard bounds for stored signal strengths. Anything below the floor is
// indistinguishable from "AP not heard"; anything above 0 dBm is not a
// plausible received power.
inline constexpr double kRssFloorDbm = -120.0;
inline constexpr double kRssCeilingDbm = 0.0;

// A measurement: where it was taken and what was heard there.
struct Fingerprint {
  Position position{0.0, 0.0};
  RssVector rss;
};

}  // namespace fploc

#endif  // FPLOC_TYPES_HPP
