#include "uacv/analytic.hpp"

#include <algorithm>
#include <cmath>

namespace uacv {

namespace {

void require_inputs(double r, double v) {
  if (!std::isfinite(r) || r < 0.0) throw std::invalid_argument("r must be finite and >= 0");
  if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("v must be finite and >= 0");
}

// inv_n = 1/n, with 0 standing for the n -> inf limit.
double mean_tanh_impl(double r, double v, double inv_n) {
  return std::max(0.0, 1.0 - 0.5 * v - 0.5 * v * inv_n) * std::tanh(r);
}

double mean_cos_impl(double v, double inv_n, AngleConvention convention) {
  const double spread = std::sqrt(v * inv_n);
  return convention == AngleConvention::paper ? std::cos(2.0 * spread) : std::cos(spread);
}

Matrix covariance_from_means(double t, double mean_cos) {
  const double denom = 1.0 - t * t;
  const double a = (1.0 + t * t) / denom;
  const double c = 2.0 * t / denom * mean_cos;
  Matrix cov = Matrix::Zero(4, 4);
  cov.diagonal().setConstant(a);
  cov(0, 2) = cov(2, 0) = c;
  cov(1, 3) = cov(3, 1) = -c;
  return cov;
}

EnsembleMetrics metrics_impl(double r, double v, double inv_n, AngleConvention convention) {
  require_inputs(r, v);
  const double t = mean_tanh_impl(r, v, inv_n);
  const double mean_cos = mean_cos_impl(v, inv_n, convention);
  // (cosh r' / cosh r)^2 with tanh r' = t.
  const double cosh_r = std::cosh(r);
  const double probability = std::min(1.0, 1.0 / ((1.0 - t * t) * cosh_r * cosh_r));
  EnsembleMetrics m = metrics_from_covariance(covariance_from_means(t, mean_cos), probability);
  m.mean_tanh = t;
  m.mean_cos = mean_cos;
  m.outside_small_noise = v > kSmallNoiseLimit;
  return m;
}

}  // namespace

double mean_tanh_rprime(double r, double v, int n) {
  require_inputs(r, v);
  if (n < 1) throw std::invalid_argument("mean_tanh_rprime: n must be >= 1");
  return mean_tanh_impl(r, v, 1.0 / n);
}

double mean_cos_2phibeta(double v, int n) {
  require_inputs(0.0, v);
  if (n < 1) throw std::invalid_argument("mean_cos_2phibeta: n must be >= 1");
  return std::cos(2.0 * std::sqrt(v / n));
}

double mean_cos_2phibeta_gaussian(double v, int n) {
  require_inputs(0.0, v);
  if (n < 1) throw std::invalid_argument("mean_cos_2phibeta_gaussian: n must be >= 1");
  return std::exp(-2.0 * v / n);
}

double mean_cos_phibeta(double v, int n) {
  require_inputs(0.0, v);
  if (n < 1) throw std::invalid_argument("mean_cos_phibeta: n must be >= 1");
  return std::cos(std::sqrt(v / n));
}

Matrix ensemble_covariance(double r, double v, int n, AngleConvention convention) {
  require_inputs(r, v);
  if (n < 1) throw std::invalid_argument("ensemble_covariance: n must be >= 1");
  const double inv_n = 1.0 / n;
  return covariance_from_means(mean_tanh_impl(r, v, inv_n), mean_cos_impl(v, inv_n, convention));
}

EnsembleMetrics ensemble_metrics(double r, double v, int n, AngleConvention convention) {
  if (n < 1) throw std::invalid_argument("ensemble_metrics: n must be >= 1");
  return metrics_impl(r, v, 1.0 / n, convention);
}

EnsembleMetrics asymptotic_metrics(double r, double v, AngleConvention convention) {
  return metrics_impl(r, v, 0.0, convention);
}

EnsembleMetrics metrics_from_covariance(const Matrix& cov, double probability) {
  EnsembleMetrics m;
  m.cov = cov;
  m.purity = purity(cov);
  m.squeezing_db = squeezing_db(quadrature_variance(cov, QuadratureForm::epr_difference()));
  m.eof_bits = eof_symmetric(cov);
  m.log_negativity = log_negativity(cov);
  m.probability = probability;
  return m;
}

}  // namespace uacv
