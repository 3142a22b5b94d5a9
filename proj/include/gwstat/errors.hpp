#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gwstat {

// Error taxonomy shared across the library. The CLI maps categories to exit
// codes: usage/input problems exit with 1, statistical degeneracies with 2.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed arguments: dimension mismatches, out-of-range parameters.
struct InvalidInput : Error {
  using Error::Error;
};

// A matrix that must be symmetric positive definite is not (within the
// library's relative eigenvalue floor).
struct NotSpd : Error {
  using Error::Error;
};

// A sample too small or too collinear to produce a full-rank covariance.
struct DegenerateSample : Error {
  using Error::Error;
};

// A scalar function evaluated outside its domain on some eigenvalue.
struct DomainError : Error {
  using Error::Error;
};

// First-order asymptotics requested in the near-null regime where the
// limiting variance degenerates; callers should switch to the second-order
// machinery.
struct NearNullDegenerate : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(const std::string& message, std::size_t line_number)
      : Error(message + " (line " + std::to_string(line_number) + ")"),
        line(line_number) {}
  std::size_t line;
};

}  // namespace gwstat
