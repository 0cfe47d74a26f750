#pragma once

#include <stdexcept>
#include <string>

namespace osm {

/// Base class for every error raised by the library. The CLI maps
/// ConfigError to exit code 2 and everything else to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates a documented precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A special function was evaluated outside its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Scene is physically inconsistent with the array (antenna inside a disk,
/// overlapping disks, ...).
class InvalidScene : public Error {
 public:
  using Error::Error;
};

/// Malformed token in an input file. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Row width does not match the column map. Carries the 1-based line number.
class StructureError : public Error {
 public:
  StructureError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Records do not cover every (emitter, receiver) pair.
class CoverageError : public Error {
 public:
  using Error::Error;
};

/// More than one record matches the same (emitter, receiver) pair.
class AmbiguityError : public Error {
 public:
  using Error::Error;
};

/// Map or mask has no usable content (all-zero map, empty union).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Sidelobe bound requested where k|r'-r| <= 1/4.
class BoundNotApplicable : public Error {
 public:
  using Error::Error;
};

/// Peak count differs from the scatterer count.
class CountMismatch : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration. The message starts with the offending field path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace osm
