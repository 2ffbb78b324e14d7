#pragma once

#include <span>

#include "subflow/bernstein.hpp"
#include "subflow/grid.hpp"

namespace subflow {

enum class WeylDirection { Plus, Minus };

struct CalculusOptions {
  /// Kernel values nu(s) at or below this level are treated as zero in Weyl sums.
  double tail_cutoff_tol = 1e-12;
  /// Admissible window/truncation remainder relative to the sup norm of u.
  double window_tol = 1e-6;
};

/// Generalized Caputo derivative b u'(t) + int_0^{t-c} u'(t-s) nu(s) ds.
/// u is reconstructed piecewise linearly and the kernel enters through exact
/// increments of V(s) = int_0^s nu, so singular tails are integrated exactly.
GridFunction caputo_derivative(const BernsteinSpec& spec, const GridFunction& u);

/// Generalized Riemann-Liouville derivative: Caputo plus nu(t - c) u(c).
/// The first sample is missing when nu(0+) is infinite.
GridFunction rl_derivative(const BernsteinSpec& spec, const GridFunction& u);

/// Weyl-type derivatives on a window; u is extended by its boundary values.
///   Plus:  b u'(x) + int_0^inf u'(x - s) nu(s) ds
///   Minus: -(b u'(x) + int_0^inf u'(x + s) nu(s) ds)
/// Throws WindowTooNarrow if the estimated clamp/truncation remainder exceeds
/// window_tol * |u|_inf.
GridFunction weyl_derivative(const BernsteinSpec& spec, const GridFunction& u,
                             WeylDirection direction, const CalculusOptions& opts = {});

/// Max over lambdas of |L[D u] - (f u~ - f u(0) / lambda)| / |f u~| where D is
/// the Caputo derivative and transforms are exact for the piecewise-linear
/// interpolants. Requires lambda * T >= 30 for every lambda.
double laplace_symbol_check(const BernsteinSpec& spec, const GridFunction& u,
                            std::span<const double> lambdas);

/// Laplace transform of the piecewise-linear interpolant of u (zero beyond the grid).
double laplace_transform(const GridFunction& u, double lambda);

/// Second-order finite-difference derivative (one-sided at the ends).
std::vector<double> finite_difference(const GridFunction& u);

}  // namespace subflow
