#ifndef FPLOC_STORE_HPP
#define FPLOC_STORE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "fploc/pdr.hpp"
#include "fploc/types.hpp"

namespace fploc {

// Fingerprint store: a UTF-8 CSV file with header `X,Y,AP1,...,APn`,
// LF line endings and `.` as decimal separator. Every cell is a finite
// number; empty cells are rejected (the schema has no nulls). Values
// round-trip exactly. Duplicates at one position are legal rows; the
// averaging happens at map-build time, not here.

// Throws ShapeError for ragged or empty records, StorageError on I/O
// failure.
void save_store(const std::vector<Fingerprint>& records, std::ostream& out);
void save_store_file(const std::vector<Fingerprint>& records,
                     const std::string& path);

// Parses and validates; signal strengths are clamped into the storable
// range. Throws SchemaError (bad header or row width),
// NullViolationError (empty cell), ParseError (non-numeric or
// non-finite cell), StorageError (unreadable file).
std::vector<Fingerprint> load_store(std::istream& in);
std::vector<Fingerprint> load_store_file(const std::string& path);

// Sensor trace CSV with header `t,ax,ay,az,heading` (SI units, radians).
// Headings are normalized into [0, 2*pi); timestamps must be
// non-decreasing (OrderingError otherwise).
std::vector<SensorSample> load_trace(std::istream& in);
std::vector<SensorSample> load_trace_file(const std::string& path);

}  // namespace fploc

#endif  // FPLOC_STORE_HPP
