#include <doctest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "fploc/server.hpp"
#include "fploc/service.hpp"
#include "fploc/store.hpp"
#include "test_util.hpp"

using namespace fploc;
using fploc::test::exact_eq;
using fploc::test::near_eq;
using fploc::test::rss5;

namespace {

std::string temp_store_path(const char* tag) {
  return (std::filesystem::temp_directory_path() /
          (std::string("fploc_test_") + tag + "_" +
           std::to_string(::getpid()) + ".csv"))
      .string();
}

struct TempStore {
  std::string path;
  explicit TempStore(const char* tag) : path(temp_store_path(tag)) {
    std::filesystem::remove(path);
  }
  ~TempStore() { std::filesystem::remove(path); }
};

void ingest_fixture(LocalizationService& service) {
  for (const Fingerprint& record : load_store_file(FPLOC_FIXTURE_CSV)) {
    service.ingest(record);
  }
}

bool parses_cleanly(const std::string& line) {
  try {
    parse_request(line);
    return true;
  } catch (...) {
    return false;
  }
}

// Minimal blocking line client for the tests.
class LineClient {
 public:
  explicit LineClient(std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    REQUIRE(fd_ >= 0);
    timeval timeout{10, 0};
    ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &timeout, sizeof(timeout));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    REQUIRE(::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);
  }
  ~LineClient() {
    if (fd_ >= 0) {
      ::close(fd_);
    }
  }

  void send_line(const std::string& line) {
    const std::string framed = line + "\n";
    std::size_t sent = 0;
    while (sent < framed.size()) {
      const ssize_t n = ::send(fd_, framed.data() + sent, framed.size() - sent, 0);
      REQUIRE(n > 0);
      sent += static_cast<std::size_t>(n);
    }
  }

  std::string read_line() {
    while (true) {
      const std::size_t newline = buffer_.find('\n');
      if (newline != std::string::npos) {
        std::string line = buffer_.substr(0, newline);
        buffer_.erase(0, newline + 1);
        return line;
      }
      char chunk[4096];
      const ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
      REQUIRE(n > 0);
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  std::string request(const std::string& line) {
    send_line(line);
    return read_line();
  }

 private:
  int fd_ = -1;
  std::string buffer_;
};

}  // namespace

TEST_CASE("the service ingests, persists and locates") {
  TempStore store("service");
  LocalizationService service(store.path);
  CHECK(service.record_count() == 0);
  CHECK_THROWS_AS(service.locate(rss5(-46, -41, -55, -68, -67), LocateConfig{}),
                  EmptyMapError);

  ingest_fixture(service);
  CHECK(service.record_count() == 15);
  CHECK(service.ap_count() == 5);

  LocateConfig nn;
  nn.algorithm = Algorithm::NN;
  nn.k = 1;
  CHECK(exact_eq(service.locate(rss5(-46, -41, -55, -68, -67), nn),
                 Position{0, 0}));

  // Reloading from the persisted store sees the same data.
  LocalizationService reloaded(store.path);
  CHECK(reloaded.record_count() == 15);
  CHECK(exact_eq(reloaded.locate(rss5(-46, -41, -55, -68, -67), nn),
                 Position{0, 0}));
}

TEST_CASE("the service rejects width mismatches") {
  TempStore store("width");
  LocalizationService service(store.path);
  ingest_fixture(service);
  RssVector narrow(3);
  narrow << -50, -60, -70;
  CHECK_THROWS_AS(service.ingest(Fingerprint{Position{0, 0}, narrow}),
                  ShapeError);
  CHECK_THROWS_AS(service.locate(narrow, LocateConfig{}), ShapeError);
}

TEST_CASE("handle_request_line answers without throwing") {
  TempStore store("handle");
  LocalizationService service(store.path);
  TrackSession session;
  bool shutdown = false;

  CHECK(handle_request_line(service, session, "LOCATE,nn,1,-46,-41,-55,-68,-67",
                            shutdown) == "ERR,empty map");
  CHECK(handle_request_line(service, session, "TRACKSTEP,1,0", shutdown) ==
        "ERR,no tracking session: send TRACKSTART first");
  CHECK(handle_request_line(service, session, "garbage", shutdown)
            .starts_with("ERR,"));

  CHECK(handle_request_line(service, session, "INGEST,0,0,-46,-41,-55,-68,-67",
                            shutdown) == "OK");
  const std::string located = handle_request_line(
      service, session, "LOCATE,nn,1,-46,-41,-55,-68,-67", shutdown);
  CHECK(located == "OK,0,0");

  CHECK_FALSE(shutdown);
  CHECK(handle_request_line(service, session, "SHUTDOWN", shutdown) == "OK");
  CHECK(shutdown);
}

TEST_CASE("server round-trip over a real socket") {
  TempStore store("server");
  LocalizationService service(store.path);
  TcpServer server(service);
  server.start();
  REQUIRE(server.port() != 0);

  {
    LineClient client(server.port());

    SUBCASE("locate before ingest reports an empty map") {
      CHECK(client.request("LOCATE,wknn,5,-46,-41,-55,-68,-67") ==
            "ERR,empty map");
    }

    SUBCASE("ingest then locate matches the library exactly") {
      for (const Fingerprint& record : load_store_file(FPLOC_FIXTURE_CSV)) {
        std::string line = "INGEST";
        char cell[64];
        std::snprintf(cell, sizeof(cell), ",%.17g,%.17g", record.position.x(),
                      record.position.y());
        line += cell;
        for (Eigen::Index a = 0; a < record.rss.size(); ++a) {
          std::snprintf(cell, sizeof(cell), ",%.17g", record.rss[a]);
          line += cell;
        }
        CHECK(client.request(line) == "OK");
      }

      const std::shared_ptr<const RadioMap> map = service.map_snapshot();
      REQUIRE(map);
      std::mt19937_64 rng(79);
      std::uniform_real_distribution<double> u(-90.0, -30.0);
      for (int trial = 0; trial < 25; ++trial) {
        RssVector query(5);
        std::string line = "LOCATE,wknn,3";
        for (int a = 0; a < 5; ++a) {
          query[a] = u(rng);
          char cell[64];
          std::snprintf(cell, sizeof(cell), ",%.17g", query[a]);
          line += cell;
        }
        Position over_wire{0, 0};
        REQUIRE(parse_position_response(client.request(line), over_wire));
        const Position direct = locate_wknn(*map, query, 3);
        CHECK(exact_eq(over_wire, direct));
      }
    }

    SUBCASE("tracking walks a closed square over the wire") {
      for (const Fingerprint& record : load_store_file(FPLOC_FIXTURE_CSV)) {
        std::string line = "INGEST";
        char cell[64];
        std::snprintf(cell, sizeof(cell), ",%.17g,%.17g", record.position.x(),
                      record.position.y());
        line += cell;
        for (Eigen::Index a = 0; a < record.rss.size(); ++a) {
          std::snprintf(cell, sizeof(cell), ",%.17g", record.rss[a]);
          line += cell;
        }
        REQUIRE(client.request(line) == "OK");
      }

      Position fix{0, 0};
      REQUIRE(parse_position_response(
          client.request("TRACKSTART,-46,-41,-55,-68,-67"), fix));
      CHECK(near_eq(fix, Position{0, 0}, 1e-5));

      // Four steps of 0.7 m: east, north, west, south.
      const char* steps[4] = {
          "TRACKSTEP,1,0",
          "TRACKSTEP,2,1.5707963267948966",
          "TRACKSTEP,3,3.141592653589793",
          "TRACKSTEP,4,4.71238898038469",
      };
      Position position{0, 0};
      for (const char* step : steps) {
        REQUIRE(parse_position_response(client.request(step), position));
      }
      CHECK(near_eq(position, fix, 1e-9));

      // Out-of-order timestamps are refused.
      CHECK(client.request("TRACKSTEP,3,0").starts_with("ERR,"));
    }

    SUBCASE("track sessions are per connection") {
      ingest_fixture(service);
      Position fix{0, 0};
      REQUIRE(parse_position_response(
          client.request("TRACKSTART,-46,-41,-55,-68,-67"), fix));

      LineClient other(server.port());
      CHECK(other.request("TRACKSTEP,1,0").starts_with("ERR,"));
    }

    SUBCASE("a tracking fix needs enough reference points for k") {
      CHECK(client.request("INGEST,0,0,-46,-41,-55,-68,-67") == "OK");
      // One reference point cannot serve the default k=5 fix.
      CHECK(client.request("TRACKSTART,-46,-41,-55,-68,-67")
                .starts_with("ERR,"));
    }

    SUBCASE("an ingest is visible to a locate on another connection") {
      CHECK(client.request("INGEST,3,4,-50,-51,-52,-53,-54") == "OK");
      LineClient other(server.port());
      CHECK(other.request("LOCATE,nn,1,-50,-51,-52,-53,-54") == "OK,3,4");
    }
  }
  server.stop();
}

TEST_CASE("concurrent locates and ingests share the snapshot safely") {
  TempStore store("stress");
  LocalizationService service(store.path);
  ingest_fixture(service);
  TcpServer server(service);
  server.start();

  std::atomic<int> bad{0};
  std::vector<std::thread> readers;
  for (int t = 0; t < 4; ++t) {
    readers.emplace_back([&, t] {
      LineClient client(server.port());
      std::mt19937_64 rng(static_cast<std::uint64_t>(t));
      std::uniform_real_distribution<double> u(-90.0, -30.0);
      for (int i = 0; i < 200; ++i) {
        char line[256];
        std::snprintf(line, sizeof(line), "LOCATE,wknn,3,%g,%g,%g,%g,%g",
                      u(rng), u(rng), u(rng), u(rng), u(rng));
        Position position{0, 0};
        if (!parse_position_response(client.request(line), position)) {
          bad.fetch_add(1);
        }
      }
    });
  }
  std::thread writer([&] {
    LineClient client(server.port());
    for (int i = 0; i < 50; ++i) {
      char line[256];
      std::snprintf(line, sizeof(line), "INGEST,%d,%d,-50,-51,-52,-53,-54",
                    5 + i, 7);
      if (client.request(line) != "OK") {
        bad.fetch_add(1);
      }
    }
  });
  for (std::thread& reader : readers) {
    reader.join();
  }
  writer.join();
  CHECK(bad.load() == 0);
  CHECK(service.record_count() == 65);
  server.stop();
}

TEST_CASE("a malformed-line fuzz stream only ever gets error responses") {
  TempStore store("fuzz");
  LocalizationService service(store.path);
  TcpServer server(service);
  server.start();

  std::mt19937_64 rng(83);
  std::uniform_int_distribution<int> length(0, 120);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> shape(0, 5);
  const std::vector<std::string> prefixes = {
      "INGEST", "LOCATE", "TRACKSTART", "TRACKSTEP", "SHUTDOWN,x", "locate"};

  LineClient client(server.port());
  for (int i = 0; i < 2000; ++i) {
    std::string line;
    const int kind = shape(rng);
    switch (kind) {
      case 0:  // raw printable garbage
        for (int j = length(rng); j > 0; --j) {
          line.push_back(static_cast<char>(' ' + byte(rng) % 95));
        }
        break;
      case 1:  // verb with junk fields
        line = prefixes[static_cast<std::size_t>(byte(rng)) % prefixes.size()];
        for (int j = byte(rng) % 5; j > 0; --j) {
          line += ",x" + std::to_string(byte(rng));
        }
        break;
      case 2:  // truncated numbers
        line = "LOCATE,wknn,5,-4.e,-41";
        break;
      case 3:  // well-formed step without a session -> error response
        line = "TRACKSTEP," + std::to_string(byte(rng)) + ",0";
        break;
      case 4:  // well-formed locate against an empty map -> error response
        line = "LOCATE,nn,1,-50";
        break;
      default:  // arbitrary bytes, newline-free
        for (int j = length(rng); j > 0; --j) {
          const char c = static_cast<char>(byte(rng));
          line.push_back(c == '\n' ? '.' : c);
        }
    }
    // The random shapes must not stumble into a valid request.
    const bool random_shape = kind == 0 || kind == 1 || kind >= 5;
    if (line.empty() || (random_shape && parses_cleanly(line))) {
      line = "?" + line;
    }
    const std::string response = client.request(line);
    CHECK(response.starts_with("ERR,"));
  }

  // The server is still alive and functional afterwards.
  CHECK(client.request("INGEST,0,0,-46,-41,-55,-68,-67") == "OK");
  CHECK(client.request("LOCATE,nn,1,-46,-41,-55,-68,-67") == "OK,0,0");
  server.stop();
}
