#include "subflow/grid.hpp"

#include <algorithm>
#include <cmath>

#include "subflow/error.hpp"

namespace subflow {

GridFunction::GridFunction(double origin, double step, std::vector<double> values)
    : origin_(origin), step_(step), values_(std::move(values)) {}

GridFunction GridFunction::sample(const std::function<double(double)>& f, double lo, double hi,
                                  std::size_t n) {
  if (n < 2 || !(hi > lo)) fail(ErrorKind::DomainError, "sample needs hi > lo and n >= 2");
  const double h = (hi - lo) / static_cast<double>(n - 1);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = f(i + 1 == n ? hi : lo + static_cast<double>(i) * h);
  }
  return GridFunction(lo, h, std::move(v));
}

void GridFunction::set_missing(std::size_t i) {
  if (missing_.empty()) missing_.assign(values_.size(), false);
  missing_[i] = true;
}

bool GridFunction::any_missing() const {
  return std::find(missing_.begin(), missing_.end(), true) != missing_.end();
}

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!missing(i)) m = std::max(m, std::abs(values_[i]));
  }
  return m;
}

void GridFunction::require_valid() const {
  if (values_.size() < 3) fail(ErrorKind::GridTooCoarse, "grid function needs at least 3 samples");
  if (!(step_ > 0.0) || !std::isfinite(step_)) fail(ErrorKind::DomainError, "grid step must be > 0");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!missing(i) && !std::isfinite(values_[i])) {
      fail(ErrorKind::DomainError, "grid function has non-finite samples");
    }
  }
}

}  // namespace subflow
