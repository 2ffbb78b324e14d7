#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace subflow {

/// Uniformly sampled real function x_i = origin + i * step. Samples flagged
/// as missing carry no value (they print as empty CSV fields).
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(double origin, double step, std::vector<double> values);

  /// n samples of f on [lo, hi], both ends included.
  static GridFunction sample(const std::function<double(double)>& f, double lo, double hi,
                             std::size_t n);

  double origin() const { return origin_; }
  double step() const { return step_; }
  std::size_t size() const { return values_.size(); }
  double x(std::size_t i) const { return origin_ + static_cast<double>(i) * step_; }
  double back_x() const { return x(size() - 1); }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

  bool missing(std::size_t i) const { return !missing_.empty() && missing_[i]; }
  void set_missing(std::size_t i);
  bool any_missing() const;

  /// Sup norm over the samples that are present.
  double sup_norm() const;

  /// Throws GridTooCoarse (fewer than 3 samples) or DomainError (bad step,
  /// non-finite samples).
  void require_valid() const;

 private:
  double origin_ = 0.0;
  double step_ = 1.0;
  std::vector<double> values_;
  std::vector<bool> missing_;
};

}  // namespace subflow
