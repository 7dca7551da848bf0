#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hubloc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data. `row` is 1-based (header = row 1)
/// when the error is tied to a CSV row, 0 otherwise.
class InputError : public Error {
 public:
  InputError(const std::string& what, std::size_t row = 0)
      : Error(row ? what + " (row " + std::to_string(row) + ")" : what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// A point could not be attached to the road network within the snap radius.
class SnapTooFar : public Error {
 public:
  explicit SnapTooFar(double distance_m, const std::string& context = {})
      : Error((context.empty() ? std::string() : context + ": ") + "nearest road node is " +
              std::to_string(distance_m) + " m away, beyond the snap radius"),
        distance_m_(distance_m) {}
  double distance_m() const noexcept { return distance_m_; }

 private:
  double distance_m_;
};

/// No candidate set can reach all positively weighted demand.
class Infeasible : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration would exceed the configured subset cap.
class TooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace hubloc
