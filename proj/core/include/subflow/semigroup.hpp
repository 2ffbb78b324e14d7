#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <variant>
#include <vector>

#include "subflow/bernstein.hpp"

namespace subflow {

using StateVector = Eigen::VectorXd;

/// T_t u = e^{-mu t} u on a one-dimensional state.
struct ScalarRelaxation {
  double mu = 1.0;
};

/// (T_t u)(x) = u(x + t) on the grid lo + i h, i < n, with u held at u(hi)
/// beyond the window and linear interpolation between nodes.
struct LeftTranslation {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 2;
  double step() const { return (hi - lo) / static_cast<double>(n - 1); }
};

/// Heat semigroup e^{t kappa d^2/dx^2} on the periodic grid lo + i (hi - lo) / n,
/// i < n, applied spectrally.
struct Heat1D {
  double kappa = 1.0;
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 64;
};

/// e^{t Q} for a conservative generator matrix Q.
struct MarkovMatrix {
  Eigen::MatrixXd q;
};

using SemigroupSpec = std::variant<ScalarRelaxation, LeftTranslation, Heat1D, MarkovMatrix>;

/// Throws SpecInvalid if the variant parameters are out of range.
void validate(const SemigroupSpec& sg);

/// Dimension of the state space.
std::size_t state_size(const SemigroupSpec& sg);

/// The variant's natural norm: |.| (scalar), sup (translation, Markov) or the
/// L2 grid norm (heat).
double norm(const SemigroupSpec& sg, const StateVector& u);

StateVector apply(const SemigroupSpec& sg, double t, const StateVector& u);

/// The generator A u: -mu u, forward difference, spectral second derivative, Q u.
StateVector generator(const SemigroupSpec& sg, const StateVector& u);

/// d/ds T_s u; equals T_s A u except on the translation grid, where it is the
/// slope of the interpolant at x + s.
StateVector orbit_derivative(const SemigroupSpec& sg, double s, const StateVector& u);

struct SemigroupOptions {
  double tail_mass = 1e-8;  // truncate the s-integral where the law has this mass left
  double rel_tol = 1e-10;
};

/// Bochner subordination: int T_s u mu_t(ds).
StateVector subordinate_apply(const SemigroupSpec& sg, const BernsteinSpec& spec, double t,
                              const StateVector& u, const SemigroupOptions& opts = {});

/// Time-changed operator: int T_s u l_t(ds). Not a semigroup in t.
StateVector time_changed_apply(const SemigroupSpec& sg, const BernsteinSpec& spec, double t,
                               const StateVector& u, const SemigroupOptions& opts = {});

/// Phillips generator -f(-A) u = -a u + b A u + int (T_s u - u) nu-bar(ds).
StateVector phillips_generator(const SemigroupSpec& sg, const BernsteinSpec& spec,
                               const StateVector& u);

struct RefinementLevel {
  double step = 0.0;
  double residual = 0.0;
};

struct CauchySolution {
  std::vector<double> times;
  std::vector<StateVector> trajectory;
  /// |D q(t_k) - A q(t_k)| / |A u0|; NaN before the residual window.
  std::vector<double> residuals;
  double max_residual = 0.0;
  /// Max residual on the grid subsampled by 4, 2 and 1 (coarse to fine).
  std::vector<RefinementLevel> refinement;
};

struct CauchyOptions {
  SemigroupOptions semigroup{};
  /// Residuals are reported for t >= residual_start * horizon.
  double residual_start = 0.05;
};

/// Trajectory q(t_k) = time_changed_apply(t_k, u0) on t_k = k h, k < n, with the
/// generalized Caputo residual of ^fD q = A q.
CauchySolution solve_cauchy(const SemigroupSpec& sg, const BernsteinSpec& spec,
                            const StateVector& u0, double horizon, std::size_t n,
                            const CauchyOptions& opts = {});

}  // namespace subflow
