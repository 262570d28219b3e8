#include "fploc/service.hpp"

#include <filesystem>
#include <limits>
#include <utility>

#include "fploc/store.hpp"

namespace fploc {

LocalizationService::LocalizationService(std::string store_path,
                                         LocateConfig locate_defaults,
                                         PdrConfig pdr_defaults)
    : store_path_(std::move(store_path)),
      locate_defaults_(locate_defaults),
      pdr_defaults_(pdr_defaults) {
  if (!store_path_.empty() && std::filesystem::exists(store_path_)) {
    records_ = load_store_file(store_path_);
    if (!records_.empty()) {
      map_ = std::make_shared<const RadioMap>(
          build_radio_map(records_, records_.front().rss.size(), 1.0));
    }
  }
}

void LocalizationService::ingest(const Fingerprint& record) {
  std::lock_guard lock(mutex_);
  if (!records_.empty() && record.rss.size() != records_.front().rss.size()) {
    throw ShapeError("ingest: record has " + std::to_string(record.rss.size()) +
                     " values, store width is " +
                     std::to_string(records_.front().rss.size()));
  }
  Fingerprint stored = record;
  stored.rss = clamp_rss(std::move(stored.rss));
  records_.push_back(std::move(stored));
  if (!store_path_.empty()) {
    save_store_file(records_, store_path_);
  }
  // Publish the new snapshot last so a locate racing this ingest sees
  // either the old complete map or the new one.
  map_ = std::make_shared<const RadioMap>(
      build_radio_map(records_, records_.front().rss.size(), 1.0));
}

std::shared_ptr<const RadioMap> LocalizationService::map_snapshot() const {
  std::lock_guard lock(mutex_);
  return map_;
}

Position LocalizationService::locate(const Eigen::Ref<const RssVector>& query,
                                     const LocateConfig& config) const {
  const std::shared_ptr<const RadioMap> map = map_snapshot();
  if (!map) {
    throw EmptyMapError("empty map");
  }
  return fploc::locate(*map, query, config);
}

Position LocalizationService::initial_fix(
    const Eigen::Ref<const RssVector>& query) const {
  LocateConfig config = locate_defaults_;
  config.algorithm = Algorithm::WKNN;
  return locate(query, config);
}

Eigen::Index LocalizationService::ap_count() const {
  std::lock_guard lock(mutex_);
  return records_.empty() ? 0 : records_.front().rss.size();
}

std::size_t LocalizationService::record_count() const {
  std::lock_guard lock(mutex_);
  return records_.size();
}

std::string handle_request_line(LocalizationService& service,
                                TrackSession& session, std::string_view line,
                                bool& shutdown) {
  try {
    const Request request = parse_request(line);
    switch (request.kind) {
      case RequestKind::Ingest: {
        const Eigen::Index width = service.ap_count();
        if (width != 0 && request.ingest.rss.size() != width) {
          return format_error("width mismatch: expected " +
                              std::to_string(width) + " rss values");
        }
        service.ingest(request.ingest);
        return format_ok();
      }
      case RequestKind::Locate:
        return format_ok(service.locate(request.rss, request.config));
      case RequestKind::TrackStart: {
        session.position = service.initial_fix(request.rss);
        session.active = true;
        session.last_time = std::numeric_limits<double>::lowest();
        return format_ok(session.position);
      }
      case RequestKind::TrackStep: {
        if (!session.active) {
          return format_error("no tracking session: send TRACKSTART first");
        }
        if (request.step.t <= session.last_time) {
          return format_error("step timestamps must be strictly increasing");
        }
        session.position =
            pdr_step(session.position, service.pdr_defaults().step_length,
                     request.step.heading);
        session.last_time = request.step.t;
        return format_ok(session.position);
      }
      case RequestKind::Shutdown:
        shutdown = true;
        return format_ok();
    }
    return format_error("unhandled request");
  } catch (const Error& e) {
    return format_error(e.what());
  } catch (const std::exception& e) {
    return format_error(e.what());
  }
}

}  // namespace fploc
