#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dpstream {

// Root of every error the library throws. Subclasses name the contract that
// was broken so callers (and the CLI exit-code mapping) can dispatch on type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed caller input: wrong dimension, empty point set, bad value.
class InputError : public Error {
 public:
  using Error::Error;
};

// Configuration or parameter outside its legal range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Operation invoked on an object in the wrong lifecycle state.
class StateError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

// A timestamp went backwards.
class OrderingError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class InvariantError : public Error {
 public:
  using Error::Error;
};

// The separation objective is undefined for the requested partition.
class UndefinedObjective : public Error {
 public:
  using Error::Error;
};

// No preference weight reproduces the operator's initial threshold.
class NoConsistentAlpha : public Error {
 public:
  using Error::Error;
};

class InitializationError : public Error {
 public:
  using Error::Error;
};

// Two snapshots did not come from the same engine.
class ProvenanceError : public Error {
 public:
  using Error::Error;
};

class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

class ScenarioError : public Error {
 public:
  using Error::Error;
};

// Text input could not be parsed. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace dpstream
