#ifndef FPLOC_FINGERPRINT_HPP
#define FPLOC_FINGERPRINT_HPP

#include <vector>

#include "fploc/errors.hpp"
#include "fploc/types.hpp"

namespace fploc {

// Received signal strength of a power level, 10 * log10(P / 1 mW).
// Throws DomainError for non-positive power.
double rss_from_power(double milliwatts);

// Clamp a signal strength into [kRssFloorDbm, kRssCeilingDbm].
// Throws DomainError for NaN.
double clamp_rss(double dbm);
RssVector clamp_rss(RssVector rss);

// Root-mean-square distance between two fingerprints:
//   sqrt( sum_j (query_j - reference_j)^2 / n_ap ).
// The 1/n_ap normalization keeps distances comparable across deployments
// with different AP counts. Throws ShapeError on length mismatch or
// empty vectors.
double fingerprint_distance(const Eigen::Ref<const RssVector>& query,
                            const Eigen::Ref<const RssVector>& reference);

// The offline-stage product: one averaged fingerprint per reference
// point. Immutable once built and safe to share across readers.
// Reference points are kept sorted by (x, y), which fixes the order in
// which equidistant neighbors are reported.
class RadioMap {
 public:
  // Takes one row per reference point; rows are sorted by (x, y) and
  // must be unique. Throws ShapeError / EmptyMapError on bad input.
  RadioMap(PositionMatrix positions, RssMatrix rss, double grid_spacing);

  Eigen::Index size() const { return positions_.rows(); }
  Eigen::Index ap_count() const { return rss_.cols(); }
  double grid_spacing() const { return grid_spacing_; }

  const PositionMatrix& positions() const { return positions_; }
  const RssMatrix& rss() const { return rss_; }

  Position position(Eigen::Index i) const { return positions_.row(i); }
  RssVector fingerprint(Eigen::Index i) const { return rss_.row(i); }

 private:
  PositionMatrix positions_;
  RssMatrix rss_;
  double grid_spacing_;
};

// Build a radio map from repeated measurements: samples are grouped by
// exact position and each reference point gets the component-wise mean
// of its group. Signal strengths are clamped on the way in.
// Throws EmptyMapError for an empty sample list and ShapeError when a
// sample's length differs from ap_count.
RadioMap build_radio_map(const std::vector<Fingerprint>& samples,
                         Eigen::Index ap_count, double grid_spacing);

}  // namespace fploc

#endif  // FPLOC_FINGERPRINT_HPP
