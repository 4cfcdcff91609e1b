/// @file errors.hpp
/// @brief Exception types raised by the imcf library.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace imcf {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Location of a grid-point failure; `stage` is the rk stage (0 when not stepping).
struct FailureSite {
  std::size_t index = 0;
  int stage = 0;
};

class NonPositiveHeight : public Error {
 public:
  explicit NonPositiveHeight(FailureSite site, double value);
  FailureSite site;
  double value;
};

/// The graph stopped being mean-convex (H <= 0); IMCF speed is undefined there.
class LostMeanConvexity : public Error {
 public:
  explicit LostMeanConvexity(FailureSite site, double denominator);
  FailureSite site;
  double denominator;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class InsufficientSnapshots : public Error {
 public:
  using Error::Error;
};

class NonUniformSampling : public Error {
 public:
  using Error::Error;
};

class OdeBlowup : public Error {
 public:
  OdeBlowup(double t, double value);
  double t;
  double value;
};

class InvalidStats : public Error {
 public:
  using Error::Error;
};

class UnknownMonitor : public Error {
 public:
  using Error::Error;
};

class InsufficientPoints : public Error {
 public:
  using Error::Error;
};

class InadmissibleInitialData : public Error {
 public:
  InadmissibleInitialData(std::string condition, std::size_t index);
  std::string condition;
  std::size_t index;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what);
  int line;
};

/// Collects every violated invariant of a parsed config, not just the first.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  std::vector<std::string> violations;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace imcf
