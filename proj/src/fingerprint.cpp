#include "fploc/fingerprint.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

namespace fploc {

double rss_from_power(double milliwatts) {
  if (!(milliwatts > 0.0)) {
    throw DomainError("rss_from_power: power must be positive (got " +
                      std::to_string(milliwatts) + " mW)");
  }
  return 10.0 * std::log10(milliwatts);
}

double clamp_rss(double dbm) {
  if (std::isnan(dbm)) {
    throw DomainError("clamp_rss: signal strength is NaN");
  }
  return std::clamp(dbm, kRssFloorDbm, kRssCeilingDbm);
}

RssVector clamp_rss(RssVector rss) {
  for (Eigen::Index i = 0; i < rss.size(); ++i) {
    rss[i] = clamp_rss(rss[i]);
  }
  return rss;
}

double fingerprint_distance(const Eigen::Ref<const RssVector>& query,
                            const Eigen::Ref<const RssVector>& reference) {
  if (query.size() == 0 || reference.size() == 0) {
    throw ShapeError("fingerprint_distance: empty vector");
  }
  if (query.size() != reference.size()) {
    throw ShapeError("fingerprint_distance: length mismatch (" +
                     std::to_string(query.size()) + " vs " +
                     std::to_string(reference.size()) + ")");
  }
  const double n = static_cast<double>(query.size());
  return std::sqrt((query - reference).squaredNorm() / n);
}

RadioMap::RadioMap(PositionMatrix positions, RssMatrix rss,
                   double grid_spacing)
    : positions_(std::move(positions)),
      rss_(std::move(rss)),
      grid_spacing_(grid_spacing) {
  if (positions_.rows() == 0) {
    throw EmptyMapError("RadioMap: no reference points");
  }
  if (positions_.rows() != rss_.rows()) {
    throw ShapeError("RadioMap: positions/fingerprints row count mismatch");
  }
  if (rss_.cols() < 1) {
    throw ShapeError("RadioMap: needs at least one AP column");
  }
  if (!(grid_spacing_ > 0.0)) {
    throw ShapeError("RadioMap: grid spacing must be positive");
  }
  if (!positions_.allFinite()) {
    throw DomainError("RadioMap: non-finite reference coordinates");
  }

  // Sort rows by (x, y); the locator relies on this order for
  // deterministic tie-breaking.
  const Eigen::Index n = positions_.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [this](Eigen::Index a, Eigen::Index b) {
    if (positions_(a, 0) != positions_(b, 0)) {
      return positions_(a, 0) < positions_(b, 0);
    }
    return positions_(a, 1) < positions_(b, 1);
  });

  PositionMatrix sorted_pos(n, 2);
  RssMatrix sorted_rss(n, rss_.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    sorted_pos.row(i) = positions_.row(order[static_cast<std::size_t>(i)]);
    sorted_rss.row(i) = rss_.row(order[static_cast<std::size_t>(i)]);
  }
  positions_ = std::move(sorted_pos);
  rss_ = std::move(sorted_rss);

  for (Eigen::Index i = 1; i < n; ++i) {
    if (positions_(i, 0) == positions_(i - 1, 0) &&
        positions_(i, 1) == positions_(i - 1, 1)) {
      throw ShapeError("RadioMap: duplicate reference position");
    }
  }
}

RadioMap build_radio_map(const std::vector<Fingerprint>& samples,
                         Eigen::Index ap_count, double grid_spacing) {
  if (samples.empty()) {
    throw EmptyMapError("build_radio_map: no samples");
  }
  if (ap_count < 1) {
    throw ShapeError("build_radio_map: ap_count must be >= 1");
  }

  // Exact coordinate equality: grid points are entered as exact grid
  // multiples, so no snapping tolerance is applied. The running mean
  // keeps a group of identical readings exactly at that reading.
  struct Group {
    RssVector mean;
    std::int64_t count = 0;
  };
  std::map<std::pair<double, double>, Group> groups;

  for (const Fingerprint& sample : samples) {
    if (sample.rss.size() != ap_count) {
      throw ShapeError("build_radio_map: sample has " +
                       std::to_string(sample.rss.size()) + " values, expected " +
                       std::to_string(ap_count));
    }
    if (!sample.position.allFinite()) {
      throw DomainError("build_radio_map: non-finite sample position");
    }
    const RssVector clamped = clamp_rss(sample.rss);
    auto [it, inserted] = groups.try_emplace(
        std::make_pair(sample.position.x(), sample.position.y()));
    Group& group = it->second;
    if (inserted) {
      group.mean = RssVector::Zero(ap_count);
    }
    group.count += 1;
    group.mean += (clamped - group.mean) / static_cast<double>(group.count);
  }

  const Eigen::Index n = static_cast<Eigen::Index>(groups.size());
  PositionMatrix positions(n, 2);
  RssMatrix rss(n, ap_count);
  Eigen::Index row = 0;
  for (const auto& [pos, group] : groups) {
    positions(row, 0) = pos.first;
    positions(row, 1) = pos.second;
    rss.row(row) = group.mean;
    ++row;
  }
  return RadioMap(std::move(positions), std::move(rss), grid_spacing);
}

}  // namespace fploc
