#pragma once

// Small-noise ensemble approximation of the averaged channel and its n -> inf
// limit. The expectation of each covariance entry is approximated by inserting
// the mean effective squeezing <tanh r'> and mean correlation cosine into the
// single-shot expressions.

#include "uacv/channel.hpp"
#include "uacv/gaussian.hpp"

namespace uacv {

struct EnsembleMetrics {
  double mean_tanh = 0.0;  ///< <tanh r'>
  double mean_cos = 1.0;   ///< <cos Theta> for the chosen angle convention
  Matrix cov;              ///< 4x4 ensemble covariance
  double purity = 1.0;
  double squeezing_db = 0.0;  ///< along (x1 - x2) / sqrt(2)
  double eof_bits = 0.0;
  double log_negativity = 0.0;
  double probability = 1.0;
  bool outside_small_noise = false;  ///< v > 0.5: expansion no longer trustworthy
};

/// v beyond which the first-order expansions are flagged.
inline constexpr double kSmallNoiseLimit = 0.5;

/// (1 - v/2 - v/(2n)) tanh r, clamped at 0.
double mean_tanh_rprime(double r, double v, int n);

/// cos(2 sqrt(v / n)).
double mean_cos_2phibeta(double v, int n);
/// E[cos 2X] for X ~ Normal(0, v/n): exp(-2 v / n).
double mean_cos_2phibeta_gaussian(double v, int n);
/// cos(sqrt(v / n)), the same small-angle rule for the single-angle convention.
double mean_cos_phibeta(double v, int n);

/// A = B = a I, C = diag(c, -c) with a = (1 + t^2)/(1 - t^2),
/// c = 2t/(1 - t^2) <cos Theta>, t = <tanh r'>.
Matrix ensemble_covariance(double r, double v, int n,
                           AngleConvention convention = AngleConvention::paper);

/// Gaussian-core metrics of ensemble_covariance; probability from
/// r' = atanh(<tanh r'>).
EnsembleMetrics ensemble_metrics(double r, double v, int n,
                                 AngleConvention convention = AngleConvention::paper);

/// The n -> inf limit: <tanh r'> = (1 - v/2) tanh r, <cos Theta> = 1.
EnsembleMetrics asymptotic_metrics(double r, double v,
                                   AngleConvention convention = AngleConvention::paper);

/// Metrics of an arbitrary symmetric two-mode covariance with a given
/// heralding probability; shared by the analytic and sampled engines.
EnsembleMetrics metrics_from_covariance(const Matrix& cov, double probability);

}  // namespace uacv
