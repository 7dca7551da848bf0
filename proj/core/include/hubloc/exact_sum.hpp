#pragma once

#include <span>
#include <vector>

namespace hubloc {

/// Correctly rounded floating-point accumulator (Shewchuk partials, the
/// algorithm behind Python's math.fsum). The result depends only on the
/// multiset of added values, never on the order they were added in.
/// Infinite or NaN inputs make the result their plain sum.
class ExactSum {
 public:
  void add(double x);
  double value() const;

 private:
  std::vector<double> partials_;
  double special_ = 0.0;  // sum of non-finite inputs
  bool has_special_ = false;
};

double exact_sum(std::span<const double> values);

}  // namespace hubloc
