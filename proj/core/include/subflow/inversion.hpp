#pragma once

#include <complex>
#include <functional>

#include "subflow/bernstein.hpp"

namespace subflow {

enum class InversionMethod { Talbot, GaverStehfest };

struct InversionConfig {
  InversionMethod method = InversionMethod::Talbot;
  int n_terms = 40;  // Gaver-Stehfest, even, 8..48
  int n_nodes = 32;  // fixed Talbot, >= 16
  /// Evaluate both algorithms and fail with InversionUnstable if they disagree
  /// by more than tol * value + abs_floor + |G_n - G_{n-2}|.
  bool cross_check = true;
  double tol = 1e-4;        // relative disagreement allowed
  double abs_floor = 1e-8;  // absolute slack for values near zero

  /// Throws ConfigError on out-of-range parameters.
  void validate() const;
};

/// A Laplace transform F given twice: in complex double precision (may be
/// empty when no continuation off the positive axis exists) and in extended
/// precision on the positive real axis.
struct Transform {
  std::function<std::complex<double>(std::complex<double>)> complex;
  std::function<ExtendedReal(const ExtendedReal&)> real;
  /// Relative accuracy of `real`; 0 means accurate to working precision.
  /// Larger values make Gaver-Stehfest drop to fewer terms.
  double real_accuracy = 0.0;
};

/// Fixed-Talbot inversion (Abate-Valko contour) with M nodes.
double talbot(const std::function<std::complex<double>(std::complex<double>)>& F, double t,
              int nodes);

/// Gaver-Stehfest inversion with n terms, evaluated in extended precision.
double gaver_stehfest(const std::function<ExtendedReal(const ExtendedReal&)>& F, double t,
                      int terms);

/// Sum of |V_k| for the n-term Gaver-Stehfest weights (noise amplification).
double stehfest_amplification(int terms);

/// Inverts F at t > 0 according to cfg, cross-checking when requested and possible.
double invert(const Transform& F, double t, const InversionConfig& cfg);

}  // namespace subflow
