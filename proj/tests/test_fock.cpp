#include "uacv/fock.hpp"

#include "uacv/channel.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "test_support.hpp"

using namespace uacv;
using namespace uacv::fock;

namespace {

Complex amp(const FockAmplitudes& s, int a, int b) {
  const std::array<int, 2> occ{a, b};
  return s(occ);
}

double max_amp_diff(const FockAmplitudes& a, const FockAmplitudes& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a.data()[k] - b.data()[k]));
  return d;
}

ComplexMatrix embed(const TwoModeUnitary& t, int n) {
  ComplexMatrix g = ComplexMatrix::Identity(n, n);
  g(t.mode_a, t.mode_a) = t.block(0, 0);
  g(t.mode_a, t.mode_b) = t.block(0, 1);
  g(t.mode_b, t.mode_a) = t.block(1, 0);
  g(t.mode_b, t.mode_b) = t.block(1, 1);
  return g;
}

}  // namespace

TEST(TmsvAmplitudes, Examples) {
  const FockAmplitudes z = tmsv_amplitudes(0.0, 5);
  EXPECT_DOUBLE_EQ(std::abs(amp(z, 0, 0)), 1.0);
  EXPECT_DOUBLE_EQ(z.norm_squared(), 1.0);
  const FockAmplitudes t = tmsv_amplitudes(1.2, 40);
  EXPECT_NEAR(amp(t, 0, 0).real(), 1.0 / std::cosh(1.2), 1e-15);
  EXPECT_NEAR(amp(t, 0, 0).real(), 0.55229, 1e-5);
  EXPECT_NEAR(amp(t, 3, 3).real(), std::pow(std::tanh(1.2), 3) / std::cosh(1.2), 1e-14);
  EXPECT_DOUBLE_EQ(std::abs(amp(t, 3, 2)), 0.0);
  EXPECT_LT(1.0 - t.norm_squared(), 2e-6);
  EXPECT_LE(1.0 - t.norm_squared(), t.tail_bound() * (1.0 + 1e-9));
}

TEST(TmsvAmplitudes, AlternatingSignFlipsCorrelations) {
  const Matrix pos = moments_to_covariance(tmsv_amplitudes(0.8, 60));
  const Matrix alt = moments_to_covariance(tmsv_amplitudes(0.8, 60, LayerSign::alternating));
  EXPECT_LT((pos.topLeftCorner(2, 2) - alt.topLeftCorner(2, 2)).norm(), 1e-10);
  EXPECT_LT((pos.topRightCorner(2, 2) + alt.topRightCorner(2, 2)).norm(), 1e-10);
  EXPECT_LT((pos - tmsv_covariance(0.8).cov()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(ClosedFormAmplitudes, NoiselessIsTmsv) {
  const std::vector<double> zeros(3, 0.0);
  EXPECT_LT(max_amp_diff(heralded_amplitudes_closed_form(1.2, zeros, 30), tmsv_amplitudes(1.2, 30)),
            1e-15);
}

TEST(ClosedFormAmplitudes, AntipodalPairKeepsVacuumOnly) {
  const std::vector<double> ph{0.0, std::numbers::pi};
  const FockAmplitudes s = heralded_amplitudes_closed_form(1.2, ph, 20);
  EXPECT_NEAR(std::abs(amp(s, 0, 0)), 1.0 / std::cosh(1.2), 1e-15);
  EXPECT_NEAR(s.norm_squared(), 1.0 / std::pow(std::cosh(1.2), 2), 1e-15);
}

TEST(ClosedFormAmplitudes, NormIsHeraldingProbability) {
  std::mt19937_64 gen(31);
  for (int k = 0; k < 20; ++k) {
    const auto ph = support::random_phases(3, gen);
    const ShotOutcome o = shot_closed_form(ChannelParams{3, 1.2, 0.0}, ph);
    const double p = std::pow(std::cosh(o.r_prime) / std::cosh(1.2), 2);
    EXPECT_NEAR(heralded_amplitudes_closed_form(1.2, ph, 120).norm_squared(), p, 1e-10);
  }
}

TEST(LinearOptics, SinglePhotonThroughHadamard) {
  FockAmplitudes s(2, 1);
  const std::array<int, 2> one{1, 0};
  s(one) = 1.0;
  const FockAmplitudes out = fock_linear_optics(s, balanced_splitter(2));
  EXPECT_NEAR(std::abs(amp(out, 1, 0)), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(amp(out, 0, 1)), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(LinearOptics, TwoPhotonsBunch) {
  FockAmplitudes s(2, 2);
  const std::array<int, 2> pair{1, 1};
  s(pair) = 1.0;
  const FockAmplitudes out = fock_linear_optics(s, balanced_splitter(2));
  EXPECT_NEAR(std::abs(amp(out, 1, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::norm(amp(out, 2, 0)), 0.5, 1e-14);
  EXPECT_NEAR(std::norm(amp(out, 0, 2)), 0.5, 1e-14);
}

TEST(LinearOptics, VacuumStaysVacuum) {
  std::mt19937_64 gen(32);
  FockAmplitudes s(3, 2);
  const std::array<int, 3> vac{0, 0, 0};
  s(vac) = 1.0;
  const FockAmplitudes out = fock_linear_optics(s, support::random_unitary(3, gen));
  EXPECT_NEAR(std::abs(out(vac)), 1.0, 1e-14);
  EXPECT_NEAR(out.norm_squared(), 1.0, 1e-14);
}

TEST(LinearOptics, RejectsNonUnitaryAndOversize) {
  FockAmplitudes s(2, 2);
  ComplexMatrix u = ComplexMatrix::Identity(2, 2) * 1.1;
  EXPECT_THROW(fock_linear_optics(s, u), UnitarityError);
  EXPECT_THROW(fock_linear_optics(s, ComplexMatrix::Identity(3, 3)), std::invalid_argument);
  EXPECT_THROW(fock_linear_optics(FockAmplitudes(4, 1), ComplexMatrix::Identity(4, 4)),
               std::invalid_argument);
}

TEST(LinearOptics, SectorUnitarity) {
  std::mt19937_64 gen(33);
  for (int trial = 0; trial < 10; ++trial) {
    FockAmplitudes s(3, 4);
    std::normal_distribution<double> g(0.0, 1.0);
    for (std::size_t k = 0; k < s.size(); ++k) {
      const auto occ = s.occupation(k);
      if (occ[0] + occ[1] + occ[2] <= 4) s.data()[k] = {g(gen), g(gen)};
    }
    const double before = s.norm_squared();
    const FockAmplitudes out = fock_linear_optics(s, support::random_unitary(3, gen));
    EXPECT_NEAR(out.norm_squared(), before, 1e-10 * before);
  }
}

TEST(Givens, Reconstructs) {
  std::mt19937_64 gen(34);
  for (int n = 1; n <= 4; ++n) {
    const ComplexMatrix u = support::random_unitary(n, gen);
    const GivensDecomposition d = givens_decompose(u);
    ComplexMatrix prod = ComplexMatrix::Identity(n, n);
    for (const TwoModeUnitary& t : d.rotations) prod = prod * embed(t, n);
    prod = prod * d.phases.asDiagonal();
    EXPECT_LT((prod - u).norm(), 1e-12) << n;
    for (Eigen::Index k = 0; k < d.phases.size(); ++k) EXPECT_NEAR(std::abs(d.phases(k)), 1.0, 1e-12);
  }
}

TEST(Evolved, MatchesClosedFormAmplitudes) {
  std::mt19937_64 gen(35);
  for (int n : {1, 2, 3}) {
    for (int k = 0; k < 10; ++k) {
      const auto ph = support::random_phases(n, gen);
      const FockAmplitudes a = heralded_amplitudes_evolved(1.2, ph, kMaxSectorPhotons);
      const FockAmplitudes b = heralded_amplitudes_closed_form(1.2, ph, kMaxSectorPhotons);
      EXPECT_LT(max_amp_diff(a, b), 1e-8) << n;
    }
  }
  const std::vector<double> ph(2, 0.0);
  EXPECT_THROW(heralded_amplitudes_evolved(1.0, ph, kMaxSectorPhotons + 1), std::invalid_argument);
}

TEST(Moments, Vacuum) {
  FockAmplitudes s(2, 3);
  const std::array<int, 2> vac{0, 0};
  s(vac) = 1.0;
  EXPECT_LT((moments_to_covariance(s) - Matrix::Identity(4, 4)).norm(), 1e-15);
}

TEST(Moments, TmsvAtCutoff40) {
  const Matrix c = moments_to_covariance(tmsv_amplitudes(1.2, 40));
  EXPECT_NEAR(c(0, 0), 5.5569, 1e-4);
  EXPECT_NEAR(c(0, 2), 5.4662, 1e-4);
  EXPECT_NEAR(c(1, 3), -5.4662, 1e-4);
  EXPECT_LT((c - tmsv_covariance(1.2).cov()).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Moments, HeraldedMatchesGaussianPath) {
  std::mt19937_64 gen(36);
  for (int n : {2, 3}) {
    for (int k = 0; k < 10; ++k) {
      const auto ph = support::random_phases(n, gen);
      const ShotOutcome g = shot_gaussian_path(ChannelParams{n, 1.2, 0.0}, ph);
      const FockAmplitudes f = heralded_amplitudes_closed_form(1.2, ph, 80);
      EXPECT_LT((moments_to_covariance(f) - g.cov).cwiseAbs().maxCoeff(), 1e-5);
      EXPECT_NEAR(f.norm_squared(), g.probability, 1e-10);
    }
  }
}

TEST(Moments, SmallSqueezingEvolvedMatchesGaussianPath) {
  std::mt19937_64 gen(37);
  for (int n : {2, 3}) {
    const auto ph = support::random_phases(n, gen);
    const ShotOutcome g = shot_gaussian_path(ChannelParams{n, 0.3, 0.0}, ph);
    const FockAmplitudes f = heralded_amplitudes_evolved(0.3, ph, kMaxSectorPhotons);
    EXPECT_LT((moments_to_covariance(f) - g.cov).cwiseAbs().maxCoeff(), 1e-5);
  }
}

TEST(Entropy, PureTmsvEqualsEof) {
  for (double r : {0.3, 1.0, 1.2}) {
    const double e = reduced_entropy_bits(tmsv_amplitudes(r, 120));
    EXPECT_NEAR(e, eof_symmetric(tmsv_covariance(r).cov()), 1e-6) << r;
  }
}
