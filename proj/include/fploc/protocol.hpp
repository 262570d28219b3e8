#ifndef FPLOC_PROTOCOL_HPP
#define FPLOC_PROTOCOL_HPP

#include <string>
#include <string_view>

#include "fploc/locator.hpp"
#include "fploc/pdr.hpp"
#include "fploc/types.hpp"

namespace fploc {

// One request per line, comma-separated, one response line each:
//
//   INGEST,<x>,<y>,<rss_1>,...,<rss_n>
//   LOCATE,<nn|knn|wknn>,<k>,<rss_1>,...,<rss_n>
//   TRACKSTART,<rss_1>,...,<rss_n>
//   TRACKSTEP,<t>,<heading>
//   SHUTDOWN
//
// Responses: `OK`, `OK,<x>,<y>`, or `ERR,<message>`. Coordinates are
// serialized with round-trip precision, so a client parsing the reply
// recovers the server's doubles bit for bit.

enum class RequestKind { Ingest, Locate, TrackStart, TrackStep, Shutdown };

struct Request {
  RequestKind kind = RequestKind::Shutdown;
  Fingerprint ingest;    // Ingest
  RssVector rss;         // Locate / TrackStart
  LocateConfig config;   // Locate
  StepEvent step;        // TrackStep
};

// Throws ParseError / SchemaError on malformed input. The caller checks
// RSS widths against the live map; the parser only knows the grammar.
Request parse_request(std::string_view line);

std::string format_ok();
std::string format_ok(const Position& position);
std::string format_error(std::string_view message);

// True when the line is an `OK...` response; fills position for the
// two-field payload.
bool parse_position_response(std::string_view line, Position& position);

}  // namespace fploc

#endif  // FPLOC_PROTOCOL_HPP
