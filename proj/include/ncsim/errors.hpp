#pragma once

#include <stdexcept>

namespace ncsim {

// Contract violations carry their own types so callers and tests can tell
// them apart.

struct InvalidParams : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnknownVertex : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct EmptyIndex : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientVertices : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct TooLargeToEnumerate : std::length_error {
  using std::length_error::length_error;
};

struct MissingHistory : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct DegenerateSequence : std::domain_error {
  using std::domain_error::domain_error;
};

struct DegenerateWeight : std::domain_error {
  using std::domain_error::domain_error;
};

struct InsufficientData : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ncsim
