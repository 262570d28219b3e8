#ifndef FPLOC_ERRORS_HPP
#define FPLOC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fploc {

// Common base so callers (and the service layer) can catch every toolkit
// error with one handler.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Physically invalid value: non-positive power, NaN signal strength, ...
struct DomainError : Error {
  using Error::Error;
};

// Vector length or row width does not match what the operation expects.
struct ShapeError : Error {
  using Error::Error;
};

// An operation that needs reference points was given none.
struct EmptyMapError : Error {
  using Error::Error;
};

// More neighbors (or folds) requested than the data can provide.
struct CapacityError : Error {
  using Error::Error;
};

// Timestamps out of order.
struct OrderingError : Error {
  using Error::Error;
};

// Degenerate geometry, e.g. a walk path with repeated waypoints.
struct GeometryError : Error {
  using Error::Error;
};

// File could not be opened or written.
struct StorageError : Error {
  using Error::Error;
};

// A cell that should be numeric is not.
struct ParseError : Error {
  using Error::Error;
};

// Header or row does not match the declared column layout.
struct SchemaError : Error {
  using Error::Error;
};

// An empty cell where the schema requires a value.
struct NullViolationError : SchemaError {
  using SchemaError::SchemaError;
};

}  // namespace fploc

#endif  // FPLOC_ERRORS_HPP
