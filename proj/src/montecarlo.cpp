#include "uacv/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

namespace uacv {

namespace {

// Per-shot record: ten covariance entries, probability, tanh r', cos Theta.
constexpr int kRecord = kCovEntries + 3;
using Record = Eigen::Matrix<double, kRecord, 1>;
using RecordMatrix = Eigen::Matrix<double, kRecord, kRecord>;

Record shot_record(const ChannelParams& params, ShotEngine engine, std::uint64_t seed,
                   std::int64_t shot) {
  auto gen = shot_stream(seed, shot);
  const PhaseSample sample = sample_phases(params, gen);
  const ShotOutcome out = engine == ShotEngine::closed_form
                              ? shot_closed_form(params, sample.phases)
                              : shot_gaussian_path(params, sample.phases);
  const double theta = engine == ShotEngine::closed_form
                           ? correlation_angle(out.phi_beta, params.convention)
                           : out.phi_beta;
  Record rec;
  rec.head<kCovEntries>() = pack_covariance(out.cov);
  rec(kCovEntries) = out.probability;
  rec(kCovEntries + 1) = std::tanh(out.r_prime);
  rec(kCovEntries + 2) = std::cos(theta);
  return rec;
}

// Mergeable sums of shifted records d = x - reference, with weight w = P.
struct Accumulator {
  std::int64_t count = 0;
  double sum_w = 0.0;
  double sum_w2 = 0.0;
  Record sum_d = Record::Zero();
  RecordMatrix sum_ddt = RecordMatrix::Zero();
  Record sum_wd = Record::Zero();
  Record sum_w2d = Record::Zero();
  RecordMatrix sum_w2ddt = RecordMatrix::Zero();

  void add(const Record& x, const Record& reference) {
    const Record d = x - reference;
    const double w = x(kCovEntries);
    ++count;
    sum_w += w;
    sum_w2 += w * w;
    sum_d += d;
    sum_ddt.noalias() += d * d.transpose();
    sum_wd += w * d;
    sum_w2d += w * w * d;
    sum_w2ddt.noalias() += (w * w) * d * d.transpose();
  }

  void merge(const Accumulator& o) {
    count += o.count;
    sum_w += o.sum_w;
    sum_w2 += o.sum_w2;
    sum_d += o.sum_d;
    sum_ddt += o.sum_ddt;
    sum_wd += o.sum_wd;
    sum_w2d += o.sum_w2d;
    sum_w2ddt += o.sum_w2ddt;
  }
};

}  // namespace

std::string_view to_string(Weighting w) {
  return w == Weighting::unweighted ? "unweighted" : "heralded";
}

Weighting weighting_from_string(std::string_view s) {
  if (s == "unweighted") return Weighting::unweighted;
  if (s == "heralded" || s == "weighted") return Weighting::heralded;
  throw std::invalid_argument("unknown weighting: " + std::string(s));
}

Eigen::Matrix<double, kCovEntries, 1> pack_covariance(const Matrix& cov) {
  if (cov.rows() != 4 || cov.cols() != 4) throw std::invalid_argument("pack_covariance: 4x4 only");
  Eigen::Matrix<double, kCovEntries, 1> out;
  int k = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) out(k++) = cov(i, j);
  }
  return out;
}

Matrix unpack_covariance(const Eigen::Matrix<double, kCovEntries, 1>& packed) {
  Matrix cov(4, 4);
  int k = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      cov(i, j) = cov(j, i) = packed(k++);
    }
  }
  return cov;
}

std::mt19937_64 shot_stream(std::uint64_t seed, std::int64_t shot) {
  const auto s = static_cast<std::uint64_t>(shot);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
  return std::mt19937_64(seq);
}

EnsembleStats run_ensemble(const ChannelParams& params, std::int64_t shots, std::uint64_t seed,
                           const EnsembleOptions& options) {
  params.validate();
  if (shots < 1) throw std::invalid_argument("run_ensemble: shots must be >= 1");
  if (options.shards < 1) throw std::invalid_argument("run_ensemble: shards must be >= 1");

  const Record reference = shot_record(params, options.engine, seed, 0);
  const std::int64_t blocks = (shots + kShotsPerBlock - 1) / kShotsPerBlock;
  std::vector<Accumulator> partial(static_cast<std::size_t>(blocks));

  auto work = [&](int shard) {
    for (std::int64_t b = shard; b < blocks; b += options.shards) {
      Accumulator& acc = partial[static_cast<std::size_t>(b)];
      const std::int64_t end = std::min(shots, (b + 1) * kShotsPerBlock);
      for (std::int64_t shot = b * kShotsPerBlock; shot < end; ++shot) {
        acc.add(shot_record(params, options.engine, seed, shot), reference);
      }
    }
  };
  const int workers = static_cast<int>(std::min<std::int64_t>(options.shards, blocks));
  if (workers <= 1) {
    for (int s = 0; s < options.shards; ++s) work(s);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(options.shards));
    for (int s = 0; s < options.shards; ++s) pool.emplace_back(work, s);
  }

  Accumulator total;
  for (const Accumulator& acc : partial) total.merge(acc);

  const auto n = static_cast<double>(total.count);
  const Record mean_d = total.sum_d / n;
  const Record mean = reference + mean_d;
  const Record mean_wd = total.sum_wd / total.sum_w;
  const Record mean_w = reference + mean_wd;

  RecordMatrix sample_cov = RecordMatrix::Zero();
  RecordMatrix ratio_cov = RecordMatrix::Zero();
  if (total.count > 1) {
    const double bessel = n / (n - 1.0);
    sample_cov = (total.sum_ddt - n * mean_d * mean_d.transpose()) / (n - 1.0);
    // Linearized variance of sum(w x) / sum(w).
    ratio_cov = (total.sum_w2ddt - total.sum_w2d * mean_wd.transpose() -
                 mean_wd * total.sum_w2d.transpose() +
                 total.sum_w2 * mean_wd * mean_wd.transpose()) /
                (total.sum_w * total.sum_w) * bessel;
  }
  const RecordMatrix estimator_cov = sample_cov / n;

  EnsembleStats stats;
  stats.params = params;
  stats.shots = shots;
  stats.seed = seed;
  stats.engine = options.engine;
  stats.mean_cov_unweighted = symmetrized(unpack_covariance(mean.head<kCovEntries>()));
  stats.mean_cov_weighted = symmetrized(unpack_covariance(mean_w.head<kCovEntries>()));
  const Eigen::Matrix<double, kCovEntries, 1> entry_var =
      estimator_cov.diagonal().head<kCovEntries>().cwiseMax(0.0);
  stats.stderr_cov = unpack_covariance(entry_var.cwiseSqrt());
  stats.mean_probability = mean(kCovEntries);
  stats.stderr_probability = std::sqrt(std::max(0.0, estimator_cov(kCovEntries, kCovEntries)));
  stats.mean_tanh = mean(kCovEntries + 1);
  stats.mean_cos = mean(kCovEntries + 2);
  stats.entry_cov_unweighted = estimator_cov.topLeftCorner<kCovEntries, kCovEntries>();
  stats.entry_cov_weighted = ratio_cov.topLeftCorner<kCovEntries, kCovEntries>();
  return stats;
}

namespace {

template <class Metric>
double delta_method_stderr(const Matrix& cov, const EntryCovariance& entry_cov, Metric metric) {
  if (entry_cov.isZero(0.0)) return 0.0;
  const Eigen::Matrix<double, kCovEntries, 1> x = pack_covariance(cov);
  Eigen::Matrix<double, kCovEntries, 1> grad;
  for (int k = 0; k < kCovEntries; ++k) {
    const double h = 1e-6 * std::max(1.0, std::abs(x(k)));
    Eigen::Matrix<double, kCovEntries, 1> up = x;
    Eigen::Matrix<double, kCovEntries, 1> down = x;
    up(k) += h;
    down(k) -= h;
    grad(k) = (metric(unpack_covariance(up)) - metric(unpack_covariance(down))) / (2.0 * h);
  }
  return std::sqrt(std::max(0.0, grad.dot(entry_cov * grad)));
}

}  // namespace

MonteCarloMetrics metrics_from_ensemble(const EnsembleStats& stats, Weighting weighting) {
  MonteCarloMetrics out;
  Matrix cov = stats.mean_cov(weighting);
  if (!is_physical(cov)) {
    cov = clip_to_physical(cov);
    out.clipped = true;
  }
  out.metrics = metrics_from_covariance(cov, stats.mean_probability);
  out.metrics.mean_tanh = stats.mean_tanh;
  out.metrics.mean_cos = stats.mean_cos;

  const EntryCovariance& entry_cov = weighting == Weighting::unweighted
                                         ? stats.entry_cov_unweighted
                                         : stats.entry_cov_weighted;
  const QuadratureForm epr = QuadratureForm::epr_difference();
  out.stderr_squeezing_db = delta_method_stderr(
      cov, entry_cov, [&](const Matrix& m) { return squeezing_db(quadrature_variance(m, epr)); });
  out.stderr_purity =
      delta_method_stderr(cov, entry_cov, [](const Matrix& m) { return purity(m); });
  // The symmetric-state formula is used as a smooth function of nu~_- only.
  out.stderr_eof_bits = delta_method_stderr(cov, entry_cov, [](const Matrix& m) {
    return eof_from_ppt_eigenvalue(ppt_min_symplectic_eigenvalue(m));
  });
  out.stderr_log_negativity =
      delta_method_stderr(cov, entry_cov, [](const Matrix& m) { return log_negativity(m); });
  out.stderr_probability = stats.stderr_probability;
  return out;
}

std::vector<ConvergenceRow> convergence_report(const ChannelParams& params,
                                               std::span<const std::int64_t> ladder,
                                               std::uint64_t seed,
                                               const EnsembleOptions& options) {
  std::vector<ConvergenceRow> rows;
  rows.reserve(ladder.size());
  for (std::int64_t shots : ladder) {
    const EnsembleStats stats = run_ensemble(params, shots, seed, options);
    const MonteCarloMetrics m = metrics_from_ensemble(stats, Weighting::unweighted);
    ConvergenceRow row;
    row.shots = shots;
    row.squeezing_db = m.metrics.squeezing_db;
    row.stderr_squeezing_db = m.stderr_squeezing_db;
    row.stderr_cov_max = stats.stderr_cov.maxCoeff();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace uacv
