#pragma once

// Unitary-averaging channel: one arm of a two-mode squeezed vacuum is spread
// over n modes by a balanced interferometer, each mode picks up an independent
// random phase, a second balanced interferometer recombines them, and the
// n - 1 auxiliary outputs are heralded on vacuum.

#include "uacv/gaussian.hpp"

#include <cmath>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace uacv {

/// Angle of the output correlation block relative to the mean-phasor argument.
enum class AngleConvention {
  paper,       ///< Theta = 2 phi_beta (reproduces the reference squeezing table)
  derivation,  ///< Theta = phi_beta (what the Fock and Gaussian computations give)
};

std::string_view to_string(AngleConvention c);
AngleConvention angle_convention_from_string(std::string_view s);

/// Correlation angle for a given mean-phasor argument.
inline double correlation_angle(double phi_beta, AngleConvention c) {
  return c == AngleConvention::paper ? 2.0 * phi_beta : phi_beta;
}

struct ChannelParams {
  int n = 1;        ///< redundancy: modes through the interferometer
  double r = 0.0;   ///< input two-mode squeezing
  double v = 0.0;   ///< phase variance, rad^2
  AngleConvention convention = AngleConvention::paper;

  /// Throws std::invalid_argument on n < 1, r < 0, v < 0 or non-finite values.
  void validate() const;
};

struct PhaseSample {
  std::vector<double> phases;
};

struct PhasorMean {
  double alpha = 1.0;      ///< |mean phasor|, in [0, 1]
  double phi_beta = 0.0;   ///< arg(mean phasor); 0 when degenerate
  bool degenerate = false; ///< alpha < 1e-14, argument undefined
};

struct ShotOutcome {
  double alpha = 1.0;
  double phi_beta = 0.0;
  double r_prime = 0.0;
  double probability = 1.0;
  bool degenerate = false;
  Matrix cov;  ///< 4x4 conditional covariance (free mode, output mode)
};

/// Hadamard / sqrt(n) for n a power of two, the unitary DFT otherwise.
/// Either way the first column is uniformly 1/sqrt(n).
ComplexMatrix balanced_splitter(int n);

/// H^dagger diag(e^{i theta}) H with H = balanced_splitter(phases.size()).
ComplexMatrix averaging_interferometer(std::span<const double> phases);

/// n independent draws from Normal(0, v). Deterministic given the generator state.
template <class Generator>
PhaseSample sample_phases(const ChannelParams& params, Generator& gen) {
  params.validate();
  PhaseSample out;
  out.phases.assign(static_cast<std::size_t>(params.n), 0.0);
  if (params.v == 0.0) return out;
  std::normal_distribution<double> dist(0.0, std::sqrt(params.v));
  for (double& p : out.phases) p = dist(gen);
  return out;
}

PhasorMean complex_mean(std::span<const double> phases);

/// tanh r' = alpha tanh r, P = (cosh r' / cosh r)^2, cov = TMSV(r', Theta).
ShotOutcome shot_closed_form(const ChannelParams& params, std::span<const double> phases);

/// Builds TMSV(r) (x) vacuum^{n-1}, applies the interferometer to modes 1..n and
/// heralds modes 2..n on vacuum. The correlation angle is always the physical
/// one (derivation convention), irrespective of params.convention.
ShotOutcome shot_gaussian_path(const ChannelParams& params, std::span<const double> phases);

/// (n + 1)-mode input: modes 0 and 1 carry the TMSV, modes 2..n are vacuum.
GaussianState channel_input_state(double r, int n);

/// Runs the interferometer and heralding on an arbitrary (n + 1)-mode state.
/// Optional uniform loss gamma is applied to all modes after the interferometer
/// and before heralding.
HeraldResult run_channel(const GaussianState& input, std::span<const double> phases,
                         double loss_after = 0.0);

/// (cosh r' / cosh r)^2. Throws if r' > r.
double success_probability(double r, double r_prime);

}  // namespace uacv
