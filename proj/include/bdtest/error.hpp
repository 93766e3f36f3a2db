#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bdtest {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidEdge : public Error {
 public:
  using Error::Error;
};

class DegreeExceeded : public Error {
 public:
  explicit DegreeExceeded(std::size_t vertex)
      : Error("degree bound exceeded at vertex " + std::to_string(vertex)),
        vertex_(vertex) {}
  std::size_t vertex() const { return vertex_; }

 private:
  std::size_t vertex_;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class InfeasibleSpec : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class RadiusMismatch : public Error {
 public:
  using Error::Error;
};

class SearchBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class CalibrationFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace bdtest
