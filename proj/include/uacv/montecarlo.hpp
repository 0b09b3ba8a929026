#pragma once

// Shot-ensemble engine: independent phase draws per shot, per-shot pure
// conditional covariances, and their mixture.

#include "uacv/analytic.hpp"
#include "uacv/channel.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace uacv {

enum class Weighting {
  unweighted,  ///< plain average over shots
  heralded,    ///< weighted by each shot's heralding probability
};

std::string_view to_string(Weighting w);
Weighting weighting_from_string(std::string_view s);

enum class ShotEngine { closed_form, gaussian_path };

struct EnsembleOptions {
  int shards = 1;  ///< worker threads; results do not depend on it
  ShotEngine engine = ShotEngine::closed_form;
};

/// Shots per accumulation block. Blocks are merged in index order, so the
/// floating-point result is independent of how blocks are assigned to shards.
inline constexpr std::int64_t kShotsPerBlock = 2048;

/// Number of independent covariance entries of a 4x4 symmetric matrix.
inline constexpr int kCovEntries = 10;
using EntryCovariance = Eigen::Matrix<double, kCovEntries, kCovEntries>;

struct EnsembleStats {
  ChannelParams params;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
  ShotEngine engine = ShotEngine::closed_form;

  Matrix mean_cov_unweighted;
  Matrix mean_cov_weighted;
  Matrix stderr_cov;  ///< elementwise standard errors of the unweighted mean
  double mean_probability = 1.0;
  double stderr_probability = 0.0;
  double mean_tanh = 0.0;  ///< <tanh r'>
  double mean_cos = 1.0;   ///< <cos Theta>

  /// Estimator covariance of the ten independent mean-covariance entries,
  /// for each weighting (delta-method input).
  EntryCovariance entry_cov_unweighted = EntryCovariance::Zero();
  EntryCovariance entry_cov_weighted = EntryCovariance::Zero();

  const Matrix& mean_cov(Weighting w) const {
    return w == Weighting::unweighted ? mean_cov_unweighted : mean_cov_weighted;
  }
};

/// Generator for one shot; a pure function of (seed, shot index).
std::mt19937_64 shot_stream(std::uint64_t seed, std::int64_t shot);

EnsembleStats run_ensemble(const ChannelParams& params, std::int64_t shots, std::uint64_t seed,
                           const EnsembleOptions& options = {});

struct MonteCarloMetrics {
  EnsembleMetrics metrics;
  double stderr_squeezing_db = 0.0;
  double stderr_purity = 0.0;
  double stderr_eof_bits = 0.0;
  double stderr_log_negativity = 0.0;
  double stderr_probability = 0.0;
  bool clipped = false;  ///< averaged covariance was unphysical and was clipped
};

/// Gaussian-core metrics of the selected averaged covariance. Metric standard
/// errors use the delta method with finite-difference gradients.
MonteCarloMetrics metrics_from_ensemble(const EnsembleStats& stats, Weighting weighting);

struct ConvergenceRow {
  std::int64_t shots = 0;
  double squeezing_db = 0.0;
  double stderr_squeezing_db = 0.0;
  double stderr_cov_max = 0.0;  ///< largest elementwise covariance standard error
};

/// One ensemble per ladder entry, all with the same seed.
std::vector<ConvergenceRow> convergence_report(const ChannelParams& params,
                                               std::span<const std::int64_t> ladder,
                                               std::uint64_t seed,
                                               const EnsembleOptions& options = {});

/// Packs the upper triangle of a 4x4 symmetric matrix, row-major.
Eigen::Matrix<double, kCovEntries, 1> pack_covariance(const Matrix& cov);
Matrix unpack_covariance(const Eigen::Matrix<double, kCovEntries, 1>& packed);

}  // namespace uacv
