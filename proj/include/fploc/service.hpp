#ifndef FPLOC_SERVICE_HPP
#define FPLOC_SERVICE_HPP

#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "fploc/fingerprint.hpp"
#include "fploc/locator.hpp"
#include "fploc/pdr.hpp"
#include "fploc/protocol.hpp"
#include "fploc/types.hpp"

namespace fploc {

// Business-logic layer between the wire protocol and the store: owns the
// fingerprint records, persists them as CSV, and keeps an immutable
// radio-map snapshot that is swapped atomically on ingest. Reads grab
// the current snapshot and never block each other; ingestion is
// serialized.
class LocalizationService {
 public:
  // Loads the store file when it exists; a missing file means an empty
  // store (the map stays null until the first ingest).
  explicit LocalizationService(std::string store_path,
                               LocateConfig locate_defaults = {},
                               PdrConfig pdr_defaults = {});

  // Append one record, persist the store, rebuild and publish the map.
  // The record's width must match the store's (ShapeError otherwise);
  // the first record fixes the width.
  void ingest(const Fingerprint& record);

  // Locate against the current snapshot. Throws EmptyMapError before
  // any data has been ingested, ShapeError on width mismatch.
  Position locate(const Eigen::Ref<const RssVector>& query,
                  const LocateConfig& config) const;

  // Weighted-k-nearest-neighbor fix with the service defaults; seeds a
  // tracking session.
  Position initial_fix(const Eigen::Ref<const RssVector>& query) const;

  std::shared_ptr<const RadioMap> map_snapshot() const;

  Eigen::Index ap_count() const;  // 0 while the store is empty
  std::size_t record_count() const;
  const LocateConfig& locate_defaults() const { return locate_defaults_; }
  const PdrConfig& pdr_defaults() const { return pdr_defaults_; }

 private:
  std::string store_path_;
  LocateConfig locate_defaults_;
  PdrConfig pdr_defaults_;

  mutable std::mutex mutex_;
  std::vector<Fingerprint> records_;
  std::shared_ptr<const RadioMap> map_;
};

// Per-connection dead-reckoning state.
struct TrackSession {
  bool active = false;
  Position position{0.0, 0.0};
  double last_time = 0.0;
};

// Full request -> response cycle for one protocol line. Never throws:
// every failure becomes an `ERR,...` response. Sets shutdown for a
// SHUTDOWN request after answering it.
std::string handle_request_line(LocalizationService& service,
                                TrackSession& session, std::string_view line,
                                bool& shutdown);

}  // namespace fploc

#endif  // FPLOC_SERVICE_HPP
