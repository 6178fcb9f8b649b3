#pragma once

#include <span>
#include <vector>

namespace sclink {

/// Piecewise-linear function through strictly increasing abscissae.
/// Queries outside [front_x, back_x] throw RangeError.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  PiecewiseLinear(std::vector<double> xs, std::vector<double> ys);

  double operator()(double x) const;
  bool contains(double x) const;

  double front_x() const { return xs_.front(); }
  double back_x() const { return xs_.back(); }
  std::span<const double> xs() const { return xs_; }
  std::span<const double> ys() const { return ys_; }
  std::size_t size() const { return xs_.size(); }
  bool empty() const { return xs_.empty(); }

  bool operator==(const PiecewiseLinear&) const = default;

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

}  // namespace sclink
