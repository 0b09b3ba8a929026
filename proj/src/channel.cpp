#include "uacv/channel.hpp"

#include <algorithm>
#include <bit>
#include <complex>
#include <numbers>
#include <numeric>
#include <string>

namespace uacv {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

constexpr double kDegenerateAlpha = 1e-14;

}  // namespace

std::string_view to_string(AngleConvention c) {
  return c == AngleConvention::paper ? "paper" : "derived";
}

AngleConvention angle_convention_from_string(std::string_view s) {
  if (s == "paper" || s == "paper-faithful") return AngleConvention::paper;
  if (s == "derived" || s == "derivation") return AngleConvention::derivation;
  throw std::invalid_argument("unknown angle convention: " + std::string(s));
}

void ChannelParams::validate() const {
  if (n < 1) throw std::invalid_argument("ChannelParams: n must be >= 1");
  if (!std::isfinite(r) || r < 0.0) throw std::invalid_argument("ChannelParams: r must be >= 0");
  if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("ChannelParams: v must be >= 0");
}

ComplexMatrix balanced_splitter(int n) {
  if (n < 1) throw std::invalid_argument("balanced_splitter: n must be >= 1");
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexMatrix h(n, n);
  if (is_power_of_two(n)) {
    // Sylvester construction: sign is (-1)^{popcount(j & k)}.
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        h(j, k) = (std::popcount(static_cast<unsigned>(j & k)) % 2 == 0) ? scale : -scale;
      }
    }
  } else {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / n;
        h(j, k) = std::polar(scale, angle);
      }
    }
  }
  return h;
}

ComplexMatrix averaging_interferometer(std::span<const double> phases) {
  const int n = static_cast<int>(phases.size());
  const ComplexMatrix h = balanced_splitter(n);
  Eigen::VectorXcd rotation(n);
  for (int j = 0; j < n; ++j) rotation(j) = std::polar(1.0, phases[static_cast<std::size_t>(j)]);
  return h.adjoint() * rotation.asDiagonal() * h;
}

PhasorMean complex_mean(std::span<const double> phases) {
  if (phases.empty()) throw std::invalid_argument("complex_mean: no phases");
  std::complex<double> sum = 0.0;
  for (double p : phases) {
    if (!std::isfinite(p)) throw std::invalid_argument("complex_mean: non-finite phase");
    sum += std::polar(1.0, p);
  }
  const std::complex<double> mean = sum / static_cast<double>(phases.size());
  PhasorMean out;
  out.alpha = std::min(1.0, std::abs(mean));
  if (out.alpha < kDegenerateAlpha) {
    out.alpha = 0.0;
    out.degenerate = true;
    out.phi_beta = 0.0;
  } else {
    out.phi_beta = std::arg(mean);
  }
  return out;
}

double success_probability(double r, double r_prime) {
  if (!(r >= 0.0) || !(r_prime >= 0.0)) {
    throw std::invalid_argument("success_probability: squeezing must be non-negative");
  }
  if (r_prime > r) throw std::invalid_argument("success_probability: r' exceeds r");
  const double ratio = std::cosh(r_prime) / std::cosh(r);
  return ratio * ratio;
}

ShotOutcome shot_closed_form(const ChannelParams& params, std::span<const double> phases) {
  params.validate();
  if (static_cast<int>(phases.size()) != params.n) {
    throw std::invalid_argument("shot_closed_form: expected n phases");
  }
  const PhasorMean mean = complex_mean(phases);
  ShotOutcome out;
  out.alpha = mean.alpha;
  out.phi_beta = mean.phi_beta;
  out.degenerate = mean.degenerate;
  // alpha = 1 must reproduce r exactly; atanh(tanh r) is off by an ulp.
  out.r_prime = mean.alpha >= 1.0 ? params.r
                                  : std::min(std::atanh(mean.alpha * std::tanh(params.r)), params.r);
  out.probability = success_probability(params.r, out.r_prime);
  out.cov = tmsv_covariance(out.r_prime, correlation_angle(out.phi_beta, params.convention)).cov();
  return out;
}

GaussianState channel_input_state(double r, int n) {
  if (n < 1) throw std::invalid_argument("channel_input_state: n must be >= 1");
  GaussianState state = tmsv_covariance(r);
  if (n > 1) state = state.tensor(GaussianState::vacuum(n - 1));
  return state;
}

HeraldResult run_channel(const GaussianState& input, std::span<const double> phases,
                         double loss_after) {
  const int n = static_cast<int>(phases.size());
  if (input.modes() != n + 1) {
    throw std::invalid_argument("run_channel: input must have n + 1 modes");
  }
  const SymplecticMatrix s = symplectic_from_passive(averaging_interferometer(phases));
  std::vector<int> arm(static_cast<std::size_t>(n));
  std::iota(arm.begin(), arm.end(), 1);
  GaussianState evolved = apply_symplectic(input, s, arm);
  if (loss_after > 0.0) evolved = apply_uniform_loss(evolved, loss_after);
  if (n == 1) return HeraldResult{evolved, 1.0};
  const std::vector<int> heralded(arm.begin() + 1, arm.end());
  return herald_vacuum(evolved, heralded);
}

ShotOutcome shot_gaussian_path(const ChannelParams& params, std::span<const double> phases) {
  params.validate();
  if (static_cast<int>(phases.size()) != params.n) {
    throw std::invalid_argument("shot_gaussian_path: expected n phases");
  }
  const ComplexMatrix u = averaging_interferometer(phases);
  const HeraldResult heralded = run_channel(channel_input_state(params.r, params.n), phases);

  ShotOutcome out;
  out.cov = heralded.state.cov();
  out.probability = heralded.probability;
  const std::complex<double> transmitted = u(0, 0);
  out.alpha = std::min(1.0, std::abs(transmitted));
  out.degenerate = out.alpha < kDegenerateAlpha;
  out.phi_beta = out.degenerate ? 0.0 : std::arg(transmitted);
  out.r_prime = 0.5 * std::acosh(std::max(1.0, out.cov(0, 0)));
  return out;
}

}  // namespace uacv
