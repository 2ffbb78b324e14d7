#pragma once

#include "subflow/bernstein.hpp"
#include "subflow/inversion.hpp"

namespace subflow {

/// How l_t(s) is computed: by inverting (f/lambda) e^{-s f} in t, or from the
/// convolution b mu_s(t) + int_0^t mu_s(t - z) nu(z) dz.
enum class DensityPath { Inversion, Convolution };

struct DensityOptions {
  InversionConfig inversion{};
  DensityPath path = DensityPath::Inversion;
  /// Return nu(t) at s = 0 instead of inverting the boundary transform.
  bool boundary_rule = true;
};

/// mu_t(x), the density of sigma(t); zero for x <= b t.
double subordinator_density(const BernsteinSpec& spec, double t, double x,
                            const InversionConfig& cfg = {});

/// Pr{sigma(t) <= x}; its limit as x grows is e^{-a t}.
double subordinator_cdf(const BernsteinSpec& spec, double t, double x,
                        const InversionConfig& cfg = {});

/// l_t(s), the density of the hitting time L(t); zero for s >= t / b.
double inverse_density(const BernsteinSpec& spec, double t, double s,
                       const DensityOptions& opts = {});

/// Pr{L(t) > s} = Pr{sigma(s) < t}.
double inverse_tail_cdf(const BernsteinSpec& spec, double t, double s,
                        const InversionConfig& cfg = {});

enum class RenewalMode { Function, Density };

/// Renewal function U(x) = E L(x) (transform 1/(lambda f)) or its density
/// u(x) (transform 1/f).
double renewal(const BernsteinSpec& spec, double x, RenewalMode mode,
               const InversionConfig& cfg = {});

enum class DensityKind {
  SubordinatorDensity,
  InverseDensity,
  InverseTailCDF,
  RenewalFunction,
  RenewalDensity,
};

/// Bundles a spec with what to evaluate and how to invert.
struct DensityField {
  BernsteinSpec spec;
  DensityKind kind = DensityKind::SubordinatorDensity;
  InversionConfig inversion{};

  /// (t, x) has the meaning of the kind: (t, x) for mu, (t, s) for l and the
  /// tail CDF; renewal kinds ignore t.
  double operator()(double t, double x) const;
};

}  // namespace subflow
