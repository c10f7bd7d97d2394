#pragma once

#include <stdexcept>
#include <string>

namespace thermogeo {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what, double where = 0.0)
      : Error(what), where_(where) {}
  double where() const noexcept { return where_; }

 private:
  double where_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  /// Residual or step-to-step delta reached before giving up.
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class PositivityError : public Error {
 public:
  using Error::Error;
};

class StabilityError : public Error {
 public:
  StabilityError(const std::string& what, double real_part)
      : Error(what), real_part_(real_part) {}
  /// Largest eigenvalue real part of the offending drift matrix.
  double real_part() const noexcept { return real_part_; }

 private:
  double real_part_;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class MonotonicityError : public Error {
 public:
  using Error::Error;
};

class TopologyError : public Error {
 public:
  using Error::Error;
};

class DegenerateCycleError : public Error {
 public:
  using Error::Error;
};

class CycleDirectionError : public Error {
 public:
  using Error::Error;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, int suggested_cutoff)
      : Error(what), suggested_cutoff_(suggested_cutoff) {}
  int suggested_cutoff() const noexcept { return suggested_cutoff_; }

 private:
  int suggested_cutoff_;
};

}  // namespace thermogeo
