#include "sclink/interpolation.hpp"

#include <algorithm>
#include <sstream>

#include "sclink/errors.hpp"

namespace sclink {

PiecewiseLinear::PiecewiseLinear(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() != ys_.size()) {
    throw ValidationError("piecewise-linear table: column lengths differ");
  }
  if (xs_.size() < 2) {
    throw ValidationError("piecewise-linear table: need at least 2 points");
  }
  for (std::size_t i = 1; i < xs_.size(); ++i) {
    if (!(xs_[i] > xs_[i - 1])) {
      std::ostringstream msg;
      msg << "piecewise-linear table: abscissa not strictly increasing at index " << i;
      throw ValidationError(msg.str());
    }
  }
}

bool PiecewiseLinear::contains(double x) const {
  return !xs_.empty() && x >= xs_.front() && x <= xs_.back();
}

double PiecewiseLinear::operator()(double x) const {
  if (!contains(x)) {
    std::ostringstream msg;
    msg << "query " << x << " outside table range [" << (xs_.empty() ? 0.0 : xs_.front()) << ", "
        << (xs_.empty() ? 0.0 : xs_.back()) << "]";
    throw RangeError(msg.str());
  }
  auto hi = std::upper_bound(xs_.begin(), xs_.end(), x);
  if (hi == xs_.end()) return ys_.back();
  const auto k = static_cast<std::size_t>(hi - xs_.begin());
  const double x0 = xs_[k - 1], x1 = xs_[k];
  const double t = (x - x0) / (x1 - x0);
  return ys_[k - 1] + t * (ys_[k] - ys_[k - 1]);
}

}  // namespace sclink
