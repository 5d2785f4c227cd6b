#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace abacus {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Input contained no usable edge lines.
class EmptyStream : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An insert of a live edge or a delete of an absent edge.
class StreamInvariantViolation : public Error {
 public:
  StreamInvariantViolation(std::uint64_t index, const std::string& what)
      : Error("stream invariant violated at index " + std::to_string(index) +
              ": " + what),
        index_(index) {}

  std::uint64_t index() const noexcept { return index_; }

 private:
  std::uint64_t index_;
};

/// Discovery probability requested with fewer than three prior edges.
class DegenerateStream : public Error {
 public:
  using Error::Error;
};

class CensusOverflow : public Error {
 public:
  using Error::Error;
};

class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

/// Parallel and sequential estimates disagreed.
class EquivalenceViolation : public Error {
 public:
  using Error::Error;
};

/// Exact (audit) arithmetic exceeded its 128-bit range.
class ArithmeticOverflow : public Error {
 public:
  using Error::Error;
};

}  // namespace abacus
