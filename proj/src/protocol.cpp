#include "fploc/protocol.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <vector>

namespace fploc {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t begin = 0;
  while (true) {
    const std::size_t comma = line.find(',', begin);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(begin));
      break;
    }
    fields.push_back(line.substr(begin, comma - begin));
    begin = comma + 1;
  }
  return fields;
}

double parse_double(std::string_view field, const char* what) {
  if (field.empty()) {
    throw ParseError(std::string("empty ") + what + " field");
  }
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() ||
      !std::isfinite(value)) {
    throw ParseError(std::string("bad ") + what + " field '" +
                     std::string(field) + "'");
  }
  return value;
}

int parse_int(std::string_view field, const char* what) {
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(std::string("bad ") + what + " field '" +
                     std::string(field) + "'");
  }
  return value;
}

RssVector parse_rss(const std::vector<std::string_view>& fields,
                    std::size_t first) {
  if (fields.size() <= first) {
    throw SchemaError("request carries no signal strengths");
  }
  RssVector rss(static_cast<Eigen::Index>(fields.size() - first));
  for (std::size_t i = first; i < fields.size(); ++i) {
    rss[static_cast<Eigen::Index>(i - first)] = parse_double(fields[i], "rss");
  }
  return rss;
}

std::string format_coordinate(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace

Request parse_request(std::string_view line) {
  if (line.empty()) {
    throw ParseError("empty request");
  }
  const std::vector<std::string_view> fields = split_fields(line);
  const std::string_view verb = fields[0];

  Request request;
  if (verb == "INGEST") {
    request.kind = RequestKind::Ingest;
    if (fields.size() < 4) {
      throw SchemaError("INGEST needs x,y and at least one rss value");
    }
    request.ingest.position.x() = parse_double(fields[1], "x");
    request.ingest.position.y() = parse_double(fields[2], "y");
    request.ingest.rss = parse_rss(fields, 3);
    return request;
  }
  if (verb == "LOCATE") {
    request.kind = RequestKind::Locate;
    if (fields.size() < 4) {
      throw SchemaError("LOCATE needs algorithm, k and rss values");
    }
    request.config.algorithm = algorithm_from_name(std::string(fields[1]));
    request.config.k = parse_int(fields[2], "k");
    if (request.config.k < 1) {
      throw ParseError("k must be >= 1");
    }
    request.rss = parse_rss(fields, 3);
    return request;
  }
  if (verb == "TRACKSTART") {
    request.kind = RequestKind::TrackStart;
    request.rss = parse_rss(fields, 1);
    return request;
  }
  if (verb == "TRACKSTEP") {
    request.kind = RequestKind::TrackStep;
    if (fields.size() != 3) {
      throw SchemaError("TRACKSTEP needs t and heading");
    }
    request.step.t = parse_double(fields[1], "t");
    request.step.heading = wrap_angle(parse_double(fields[2], "heading"));
    return request;
  }
  if (verb == "SHUTDOWN") {
    request.kind = RequestKind::Shutdown;
    if (fields.size() != 1) {
      throw SchemaError("SHUTDOWN takes no fields");
    }
    return request;
  }
  throw ParseError("unknown request '" + std::string(verb) + "'");
}

std::string format_ok() { return "OK"; }

std::string format_ok(const Position& position) {
  return "OK," + format_coordinate(position.x()) + ',' +
         format_coordinate(position.y());
}

std::string format_error(std::string_view message) {
  std::string sanitized(message);
  for (char& c : sanitized) {
    if (c == '\n' || c == '\r') {
      c = ' ';
    }
  }
  return "ERR," + sanitized;
}

bool parse_position_response(std::string_view line, Position& position) {
  const std::vector<std::string_view> fields = split_fields(line);
  if (fields.empty() || fields[0] != "OK") {
    return false;
  }
  if (fields.size() == 3) {
    position.x() = parse_double(fields[1], "x");
    position.y() = parse_double(fields[2], "y");
  }
  return true;
}

}  // namespace fploc
