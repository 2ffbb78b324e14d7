#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "subflow/bernstein.hpp"
#include "subflow/rng.hpp"

namespace subflow {

/// A non-negative value that may be +infinity, kept as an explicit flag
/// rather than a floating-point overflow.
struct ExtendedValue {
  double value = 0.0;
  bool infinite = false;

  static ExtendedValue inf() { return {0.0, true}; }
  double as_double() const {
    return infinite ? std::numeric_limits<double>::infinity() : value;
  }
  friend bool operator==(const ExtendedValue&, const ExtendedValue&) = default;
};

using JumpSize = ExtendedValue;

struct CtrwConfig {
  BernsteinSpec spec;
  double gamma = 1e-4;    // jumps of size <= gamma are discarded
  double horizon = 1.0;   // operational time covered by simulate_path
  std::size_t n_paths = 1;
  std::uint64_t seed = 0;

  /// Throws ConfigError / SpecInvalid.
  void validate() const;
};

/// Sampler for the jump law Pr{Y > y} = nu(y) / nu(gamma), y >= gamma, with an
/// atom at infinity of mass a / nu(gamma).
class JumpSampler {
 public:
  JumpSampler(const BernsteinSpec& spec, double gamma);

  double rate() const { return rate_; }  // nu(gamma)

  /// Draws one jump. Tempered stable jumps are drawn by rejection from the
  /// truncated stable law; every other family uses invert().
  JumpSize operator()(Rng& rng) const;

  /// Inverse CDF: solves nu(y) = u nu(gamma) (closed form for Stable,
  /// bracketing root search to relative 1e-12 otherwise).
  JumpSize invert(double u) const;

 private:
  BernsteinSpec spec_;
  double gamma_;
  double rate_;
};

JumpSize sample_jump(const BernsteinSpec& spec, double gamma, Rng& rng);

/// One path s -> b s + sum_{tau_j <= s} y_j on [0, horizon].
struct SubordinatorPath {
  double drift = 0.0;
  double horizon = 0.0;
  std::vector<double> epochs;
  std::vector<JumpSize> sizes;

  /// First epoch with an infinite jump, or +inf.
  double lifetime() const;
  /// Path value at s in [0, horizon].
  ExtendedValue value(double s) const;
};

/// Path number `index` of the configuration's ensemble. Epochs come from a
/// unit-rate Poisson stream clocked at nu(gamma), so smaller gamma never
/// removes a jump epoch.
SubordinatorPath simulate_path(const CtrwConfig& cfg, std::size_t index = 0);

/// inf{s : path(s) > t}. Throws NoCrossing if the level is not crossed on
/// [0, horizon].
double hitting_time(const SubordinatorPath& path, double t);

/// Hitting time of path `index` generated lazily until the level t is crossed,
/// regardless of cfg.horizon. Throws NoCrossing when no crossing is possible.
double simulate_hitting_time(const CtrwConfig& cfg, std::size_t index, double t);

enum class Process { Hitting, Subordinator };

struct Functional {
  enum class Kind { Mean, Laplace, Cdf, Survival };
  Kind kind = Kind::Mean;
  double lambda = 1.0;        // Laplace
  std::vector<double> grid;   // Cdf evaluation points

  static Functional mean() { return {}; }
  static Functional laplace(double l) { return {Kind::Laplace, l, {}}; }
  static Functional cdf(std::vector<double> g) { return {Kind::Cdf, 1.0, std::move(g)}; }
  static Functional survival() { return {Kind::Survival, 1.0, {}}; }
};

struct EnsembleRow {
  double t = 0.0;
  double x = 0.0;  // lambda for Laplace, grid point for Cdf, 0 otherwise
  double estimate = 0.0;
  double std_error = 0.0;
};

/// samples[i][p]: L(t_i) or sigma(t_i) of path p (possibly +inf for sigma).
std::vector<std::vector<double>> simulate_samples(const CtrwConfig& cfg, Process process,
                                                  const std::vector<double>& t_list);

/// Monte Carlo estimates with standard errors from path-level variance.
/// Paths run in parallel; the reduction is sequential in path order, so the
/// output does not depend on the thread count.
std::vector<EnsembleRow> ensemble_stats(const CtrwConfig& cfg, Process process,
                                        const std::vector<double>& t_list,
                                        const Functional& functional);

/// Mean and standard error of the values in path order (compensated sums).
EnsembleRow mean_with_error(const std::vector<double>& values);

}  // namespace subflow
