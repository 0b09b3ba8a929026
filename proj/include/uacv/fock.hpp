#pragma once

// Truncated Fock-space reference computations, independent of the covariance
// formalism. Amplitudes are stored densely with a per-mode occupation cutoff.

#include "uacv/gaussian.hpp"

#include <complex>
#include <span>
#include <vector>

namespace uacv::fock {

using Complex = std::complex<double>;

/// Limits for full multimode linear-optics evolution.
inline constexpr int kMaxOpticsModes = 3;
inline constexpr int kMaxSectorPhotons = 8;

/// Sign of the photon-number layers of a two-mode squeezed vacuum.
/// positive: sum_N lambda^N |N, N> with lambda = tanh r (expansion of
/// exp[r(a0^dag a1^dag - a0 a1)]); alternating multiplies layer N by (-1)^N.
enum class LayerSign { positive, alternating };

class FockAmplitudes {
 public:
  FockAmplitudes(int modes, int cutoff);

  int modes() const { return modes_; }
  int cutoff() const { return cutoff_; }

  Complex& operator()(std::span<const int> occupation);
  Complex operator()(std::span<const int> occupation) const;
  Complex& diagonal(int n);  ///< two-mode |n, n>

  std::size_t size() const { return amps_.size(); }
  const std::vector<Complex>& data() const { return amps_; }
  std::vector<Complex>& data() { return amps_; }

  /// Occupation tuple of a flat index.
  std::vector<int> occupation(std::size_t flat) const;

  double norm_squared() const;
  int max_total_photons() const;  ///< largest total of any nonzero entry

  /// Analytic bound on the squared-norm weight discarded by truncation.
  double tail_bound() const { return tail_bound_; }
  void set_tail_bound(double b) { tail_bound_ = b; }

 private:
  std::size_t flat_index(std::span<const int> occupation) const;

  int modes_;
  int cutoff_;
  std::vector<Complex> amps_;
  double tail_bound_ = 0.0;
};

/// tanh^{2(N_max + 1)}(r) / (1 - tanh^2 r).
double geometric_tail_bound(double tanh_r, int cutoff);

/// sech r sum_{N <= cutoff} (+-tanh r)^N |N, N>.
FockAmplitudes tmsv_amplitudes(double r, int cutoff, LayerSign sign = LayerSign::positive);

/// Heralded output written directly as sech r sum_N [mean phasor * tanh r]^N |N, N>.
/// Sub-normalized: the squared norm is the heralding probability.
FockAmplitudes heralded_amplitudes_closed_form(double r, std::span<const double> phases,
                                               int cutoff,
                                               LayerSign sign = LayerSign::positive);

/// Exact passive evolution a_k^dag -> sum_l U_lk a_l^dag via a Givens
/// decomposition into two-mode unitaries and output phases.
/// Requires modes <= kMaxOpticsModes and total photons <= kMaxSectorPhotons.
FockAmplitudes fock_linear_optics(const FockAmplitudes& state, const ComplexMatrix& u);

/// Heralded output computed from first principles: the arm photons of each
/// |N, N> layer go through the averaging interferometer, and the amplitude of
/// the auxiliary vacuum is kept. Requires cutoff <= kMaxSectorPhotons.
FockAmplitudes heralded_amplitudes_evolved(double r, std::span<const double> phases, int cutoff,
                                           LayerSign sign = LayerSign::positive);

/// Two-mode covariance from <a_i a_j> and <a_i^dag a_j> of the normalized state.
Matrix moments_to_covariance(const FockAmplitudes& state);

/// Von Neumann entropy (bits) of mode 0 of a normalized two-mode pure state.
double reduced_entropy_bits(const FockAmplitudes& state);

/// Two-mode rotation used by the decomposition: acts on (mode_a, mode_b)
/// with column-action a_k^dag -> sum_l block(l, k) a_l^dag.
struct TwoModeUnitary {
  int mode_a;
  int mode_b;
  Eigen::Matrix2cd block;
};

struct GivensDecomposition {
  std::vector<TwoModeUnitary> rotations;  ///< U = rotations[0] ... rotations[k-1] diag(phases)
  Eigen::VectorXcd phases;
};

GivensDecomposition givens_decompose(const ComplexMatrix& u);

}  // namespace uacv::fock
