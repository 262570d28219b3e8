#include "fploc/store.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fploc/fingerprint.hpp"

namespace fploc {

namespace {

// %.17g round-trips every double exactly and keeps integral values short.
std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t begin = 0;
  while (true) {
    const std::size_t comma = line.find(',', begin);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(begin));
      break;
    }
    cells.push_back(line.substr(begin, comma - begin));
    begin = comma + 1;
  }
  return cells;
}

double parse_cell(const std::string& cell, std::size_t line_number,
                  const char* what) {
  if (cell.empty()) {
    throw NullViolationError("line " + std::to_string(line_number) +
                             ": empty " + std::string(what) + " cell");
  }
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError("line " + std::to_string(line_number) + ": '" + cell +
                     "' is not a number");
  }
  if (!std::isfinite(value)) {
    throw ParseError("line " + std::to_string(line_number) + ": '" + cell +
                     "' is not finite");
  }
  return value;
}

// Reads a line and strips one trailing '\r' (lenient about CRLF input;
// output is always LF).
bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) {
    return false;
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  return true;
}

}  // namespace

void save_store(const std::vector<Fingerprint>& records, std::ostream& out) {
  Eigen::Index width = records.empty() ? 5 : records.front().rss.size();
  if (width < 1) {
    throw ShapeError("save_store: records need at least one AP value");
  }
  out << "X,Y";
  for (Eigen::Index a = 0; a < width; ++a) {
    out << ",AP" << (a + 1);
  }
  out << '\n';
  for (const Fingerprint& record : records) {
    if (record.rss.size() != width) {
      throw ShapeError("save_store: ragged record width");
    }
    out << format_number(record.position.x()) << ','
        << format_number(record.position.y());
    for (Eigen::Index a = 0; a < width; ++a) {
      out << ',' << format_number(record.rss[a]);
    }
    out << '\n';
  }
  if (!out) {
    throw StorageError("save_store: write failed");
  }
}

void save_store_file(const std::vector<Fingerprint>& records,
                     const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw StorageError("save_store: cannot open '" + path + "' for writing");
  }
  save_store(records, out);
}

std::vector<Fingerprint> load_store(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) {
    throw SchemaError("load_store: missing header row");
  }
  const std::vector<std::string> header = split_line(line);
  if (header.size() < 3 || header[0] != "X" || header[1] != "Y") {
    throw SchemaError("load_store: header must start with X,Y,AP1,...");
  }
  for (std::size_t a = 2; a < header.size(); ++a) {
    if (header[a] != "AP" + std::to_string(a - 1)) {
      throw SchemaError("load_store: expected column AP" +
                        std::to_string(a - 1) + ", found '" + header[a] + "'");
    }
  }
  const std::size_t width = header.size() - 2;

  std::vector<Fingerprint> records;
  std::size_t line_number = 1;
  while (next_line(in, line)) {
    ++line_number;
    if (line.empty() && in.eof()) {
      break;  // trailing newline
    }
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != width + 2) {
      throw SchemaError("load_store: line " + std::to_string(line_number) +
                        " has " + std::to_string(cells.size()) +
                        " cells, expected " + std::to_string(width + 2));
    }
    Fingerprint record;
    record.position.x() = parse_cell(cells[0], line_number, "X");
    record.position.y() = parse_cell(cells[1], line_number, "Y");
    record.rss.resize(static_cast<Eigen::Index>(width));
    for (std::size_t a = 0; a < width; ++a) {
      record.rss[static_cast<Eigen::Index>(a)] =
          clamp_rss(parse_cell(cells[a + 2], line_number, "AP"));
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<Fingerprint> load_store_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw StorageError("load_store: cannot open '" + path + "'");
  }
  return load_store(in);
}

std::vector<SensorSample> load_trace(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) {
    throw SchemaError("load_trace: missing header row");
  }
  if (split_line(line) != std::vector<std::string>{"t", "ax", "ay", "az", "heading"}) {
    throw SchemaError("load_trace: header must be t,ax,ay,az,heading");
  }

  std::vector<SensorSample> trace;
  std::size_t line_number = 1;
  while (next_line(in, line)) {
    ++line_number;
    if (line.empty() && in.eof()) {
      break;
    }
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != 5) {
      throw SchemaError("load_trace: line " + std::to_string(line_number) +
                        " has " + std::to_string(cells.size()) +
                        " cells, expected 5");
    }
    SensorSample sample;
    sample.t = parse_cell(cells[0], line_number, "t");
    sample.accel.x() = parse_cell(cells[1], line_number, "ax");
    sample.accel.y() = parse_cell(cells[2], line_number, "ay");
    sample.accel.z() = parse_cell(cells[3], line_number, "az");
    sample.heading = wrap_angle(parse_cell(cells[4], line_number, "heading"));
    if (!trace.empty() && sample.t < trace.back().t) {
      throw OrderingError("load_trace: line " + std::to_string(line_number) +
                          ": timestamps must be non-decreasing");
    }
    trace.push_back(sample);
  }
  return trace;
}

std::vector<SensorSample> load_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw StorageError("load_trace: cannot open '" + path + "'");
  }
  return load_trace(in);
}

}  // namespace fploc
