#include <doctest.h>

#include <random>
#include <string>

#include "fploc/protocol.hpp"
#include "test_util.hpp"

using namespace fploc;
using fploc::test::exact_eq;

TEST_CASE("parse_request handles every verb") {
  const Request ingest = parse_request("INGEST,1,2,-46,-41,-55");
  CHECK(ingest.kind == RequestKind::Ingest);
  CHECK(exact_eq(ingest.ingest.position, Position{1, 2}));
  CHECK(ingest.ingest.rss.size() == 3);
  CHECK(ingest.ingest.rss[2] == -55.0);

  const Request locate = parse_request("LOCATE,wknn,5,-46,-41,-55,-68,-67");
  CHECK(locate.kind == RequestKind::Locate);
  CHECK(locate.config.algorithm == Algorithm::WKNN);
  CHECK(locate.config.k == 5);
  CHECK(locate.rss.size() == 5);

  const Request start = parse_request("TRACKSTART,-46,-41");
  CHECK(start.kind == RequestKind::TrackStart);
  CHECK(start.rss.size() == 2);

  const Request step = parse_request("TRACKSTEP,1.5,0.7853981633974483");
  CHECK(step.kind == RequestKind::TrackStep);
  CHECK(step.step.t == 1.5);
  CHECK(step.step.heading == doctest::Approx(0.7853981633974483));

  CHECK(parse_request("SHUTDOWN").kind == RequestKind::Shutdown);
}

TEST_CASE("parse_request rejects malformed lines") {
  CHECK_THROWS_AS(parse_request(""), ParseError);
  CHECK_THROWS_AS(parse_request("PING"), ParseError);
  CHECK_THROWS_AS(parse_request("INGEST,1,2"), SchemaError);
  CHECK_THROWS_AS(parse_request("INGEST,a,2,-50"), ParseError);
  CHECK_THROWS_AS(parse_request("INGEST,1,2,nan"), ParseError);
  CHECK_THROWS_AS(parse_request("LOCATE,svm,5,-50"), ParseError);
  CHECK_THROWS_AS(parse_request("LOCATE,wknn,zero,-50"), ParseError);
  CHECK_THROWS_AS(parse_request("LOCATE,wknn,0,-50"), ParseError);
  CHECK_THROWS_AS(parse_request("LOCATE,wknn,5"), SchemaError);
  CHECK_THROWS_AS(parse_request("TRACKSTART"), SchemaError);
  CHECK_THROWS_AS(parse_request("TRACKSTEP,1"), SchemaError);
  CHECK_THROWS_AS(parse_request("TRACKSTEP,1,2,3"), SchemaError);
  CHECK_THROWS_AS(parse_request("SHUTDOWN,now"), SchemaError);
  CHECK_THROWS_AS(parse_request("shutdown"), ParseError);
}

TEST_CASE("responses format and parse back") {
  CHECK(format_ok() == "OK");
  CHECK(format_error("boom") == "ERR,boom");
  CHECK(format_error("line\nbreak") == "ERR,line break");

  const Position original{1.0 / 3.0, -2.7182818284590452};
  Position parsed{0, 0};
  REQUIRE(parse_position_response(format_ok(original), parsed));
  // Round-trip precision: the client recovers the exact doubles.
  CHECK(exact_eq(parsed, original));

  Position ignored{0, 0};
  CHECK(parse_position_response("OK", ignored));
  CHECK_FALSE(parse_position_response("ERR,empty map", ignored));
}

TEST_CASE("coordinate serialization survives random round-trips") {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int trial = 0; trial < 1000; ++trial) {
    const Position original{u(rng), u(rng)};
    Position parsed{0, 0};
    REQUIRE(parse_position_response(format_ok(original), parsed));
    CHECK(exact_eq(parsed, original));
  }
}
