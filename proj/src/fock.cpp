#include "uacv/fock.hpp"

#include "uacv/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace uacv::fock {

namespace {

double factorial(int k) { return std::tgamma(static_cast<double>(k) + 1.0); }

Complex layer_coefficient(Complex lambda, int n, LayerSign sign) {
  Complex c = std::pow(lambda, n);
  if (sign == LayerSign::alternating && n % 2 == 1) c = -c;
  return c;
}

// (a_mode psi)(occ) = sqrt(occ_mode + 1) psi(occ + e_mode).
FockAmplitudes lower(const FockAmplitudes& psi, int mode) {
  FockAmplitudes out(psi.modes(), psi.cutoff());
  for (std::size_t k = 0; k < psi.size(); ++k) {
    std::vector<int> occ = psi.occupation(k);
    if (occ[static_cast<std::size_t>(mode)] == psi.cutoff()) continue;
    const double weight = std::sqrt(static_cast<double>(occ[static_cast<std::size_t>(mode)] + 1));
    occ[static_cast<std::size_t>(mode)] += 1;
    out.data()[k] = weight * psi(occ);
  }
  return out;
}

Complex inner(const FockAmplitudes& bra, const FockAmplitudes& ket) {
  Complex sum = 0.0;
  for (std::size_t k = 0; k < bra.size(); ++k) sum += std::conj(bra.data()[k]) * ket.data()[k];
  return sum;
}

// Two-mode unitary acting on modes (a, b) with a^dag -> M_aa a^dag + M_ba b^dag
// and b^dag -> M_ab a^dag + M_bb b^dag; conserves the photon total on (a, b).
FockAmplitudes apply_two_mode(const FockAmplitudes& psi, const TwoModeUnitary& t) {
  FockAmplitudes out(psi.modes(), psi.cutoff());
  const auto ia = static_cast<std::size_t>(t.mode_a);
  const auto ib = static_cast<std::size_t>(t.mode_b);
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const Complex amp = psi.data()[k];
    if (amp == Complex(0.0)) continue;
    std::vector<int> occ = psi.occupation(k);
    const int p = occ[ia];
    const int q = occ[ib];
    const int total = p + q;
    if (total > psi.cutoff()) {
      throw std::invalid_argument("fock_linear_optics: sector exceeds cutoff");
    }
    // Expand (M_aa x + M_ba y)^p (M_ab x + M_bb y)^q; poly[s] is the x^s coefficient.
    std::vector<Complex> poly{Complex(1.0)};
    auto multiply = [&poly](Complex cx, Complex cy) {
      std::vector<Complex> next(poly.size() + 1, Complex(0.0));
      for (std::size_t s = 0; s < poly.size(); ++s) {
        next[s + 1] += poly[s] * cx;
        next[s] += poly[s] * cy;
      }
      poly = std::move(next);
    };
    for (int i = 0; i < p; ++i) multiply(t.block(0, 0), t.block(1, 0));
    for (int i = 0; i < q; ++i) multiply(t.block(0, 1), t.block(1, 1));
    const double norm_in = std::sqrt(factorial(p) * factorial(q));
    for (int s = 0; s <= total; ++s) {
      const Complex c = poly[static_cast<std::size_t>(s)];
      if (c == Complex(0.0)) continue;
      occ[ia] = s;
      occ[ib] = total - s;
      out(occ) += amp * c * std::sqrt(factorial(s) * factorial(total - s)) / norm_in;
    }
  }
  out.set_tail_bound(psi.tail_bound());
  return out;
}

}  // namespace

FockAmplitudes::FockAmplitudes(int modes, int cutoff) : modes_(modes), cutoff_(cutoff) {
  if (modes < 1) throw std::invalid_argument("FockAmplitudes: modes must be >= 1");
  if (cutoff < 0) throw std::invalid_argument("FockAmplitudes: cutoff must be >= 0");
  std::size_t n = 1;
  for (int k = 0; k < modes; ++k) n *= static_cast<std::size_t>(cutoff + 1);
  amps_.assign(n, Complex(0.0));
}

std::size_t FockAmplitudes::flat_index(std::span<const int> occupation) const {
  if (static_cast<int>(occupation.size()) != modes_) {
    throw std::invalid_argument("FockAmplitudes: occupation has wrong length");
  }
  std::size_t idx = 0;
  for (int n : occupation) {
    if (n < 0 || n > cutoff_) throw std::out_of_range("FockAmplitudes: occupation beyond cutoff");
    idx = idx * static_cast<std::size_t>(cutoff_ + 1) + static_cast<std::size_t>(n);
  }
  return idx;
}

Complex& FockAmplitudes::operator()(std::span<const int> occupation) {
  return amps_[flat_index(occupation)];
}

Complex FockAmplitudes::operator()(std::span<const int> occupation) const {
  return amps_[flat_index(occupation)];
}

Complex& FockAmplitudes::diagonal(int n) {
  if (modes_ != 2) throw std::logic_error("FockAmplitudes::diagonal: two-mode states only");
  const int occ[2] = {n, n};
  return (*this)(occ);
}

std::vector<int> FockAmplitudes::occupation(std::size_t flat) const {
  std::vector<int> occ(static_cast<std::size_t>(modes_));
  const auto base = static_cast<std::size_t>(cutoff_ + 1);
  for (int k = modes_ - 1; k >= 0; --k) {
    occ[static_cast<std::size_t>(k)] = static_cast<int>(flat % base);
    flat /= base;
  }
  return occ;
}

double FockAmplitudes::norm_squared() const {
  double s = 0.0;
  for (const Complex& a : amps_) s += std::norm(a);
  return s;
}

int FockAmplitudes::max_total_photons() const {
  int best = 0;
  for (std::size_t k = 0; k < amps_.size(); ++k) {
    if (amps_[k] == Complex(0.0)) continue;
    int total = 0;
    for (int n : occupation(k)) total += n;
    best = std::max(best, total);
  }
  return best;
}

double geometric_tail_bound(double tanh_r, int cutoff) {
  const double t2 = tanh_r * tanh_r;
  return std::pow(t2, cutoff + 1) / (1.0 - t2);
}

FockAmplitudes tmsv_amplitudes(double r, int cutoff, LayerSign sign) {
  if (cutoff < 1) throw std::invalid_argument("tmsv_amplitudes: cutoff must be >= 1");
  if (!std::isfinite(r) || r < 0.0) throw std::invalid_argument("tmsv_amplitudes: r must be >= 0");
  FockAmplitudes out(2, cutoff);
  const double sech = 1.0 / std::cosh(r);
  for (int n = 0; n <= cutoff; ++n) {
    out.diagonal(n) = sech * layer_coefficient(std::tanh(r), n, sign);
  }
  out.set_tail_bound(geometric_tail_bound(std::tanh(r), cutoff));
  return out;
}

FockAmplitudes heralded_amplitudes_closed_form(double r, std::span<const double> phases,
                                               int cutoff, LayerSign sign) {
  if (phases.empty()) throw std::invalid_argument("heralded_amplitudes_closed_form: no phases");
  if (cutoff < 1) throw std::invalid_argument("heralded_amplitudes_closed_form: cutoff must be >= 1");
  Complex mean = 0.0;
  for (double p : phases) mean += std::polar(1.0, p);
  mean /= static_cast<double>(phases.size());
  FockAmplitudes out(2, cutoff);
  const double sech = 1.0 / std::cosh(r);
  for (int n = 0; n <= cutoff; ++n) {
    out.diagonal(n) = sech * layer_coefficient(mean * std::tanh(r), n, sign);
  }
  out.set_tail_bound(geometric_tail_bound(std::tanh(r), cutoff));
  return out;
}

GivensDecomposition givens_decompose(const ComplexMatrix& u) {
  const int n = static_cast<int>(u.rows());
  ComplexMatrix work = u;
  GivensDecomposition out;
  // Left-multiply by row rotations G until work is diagonal; then
  // U = G_1^dag G_2^dag ... G_k^dag D.
  for (int col = 0; col + 1 < n; ++col) {
    for (int row = n - 1; row > col; --row) {
      const Complex x = work(row - 1, col);
      const Complex y = work(row, col);
      const double rho = std::hypot(std::abs(x), std::abs(y));
      if (std::abs(y) == 0.0 || rho == 0.0) continue;
      Eigen::Matrix2cd g;
      g << std::conj(x) / rho, std::conj(y) / rho, -y / rho, x / rho;
      const Eigen::Matrix<Complex, 2, Eigen::Dynamic> rows =
          g * work.middleRows(row - 1, 2);
      work.middleRows(row - 1, 2) = rows;
      out.rotations.push_back(TwoModeUnitary{row - 1, row, g.adjoint()});
    }
  }
  out.phases = work.diagonal();
  return out;
}

FockAmplitudes fock_linear_optics(const FockAmplitudes& state, const ComplexMatrix& u) {
  if (u.rows() != u.cols() || u.rows() != state.modes()) {
    throw std::invalid_argument("fock_linear_optics: U does not match the mode count");
  }
  if (state.modes() > kMaxOpticsModes) {
    throw std::invalid_argument("fock_linear_optics: too many modes");
  }
  const int photons = state.max_total_photons();
  if (photons > kMaxSectorPhotons || photons > state.cutoff()) {
    throw std::invalid_argument("fock_linear_optics: photon sector exceeds size limits");
  }
  const double defect =
      (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (!(defect <= kUnitarityTolerance)) {
    throw UnitarityError("fock_linear_optics: U is not unitary", defect);
  }
  const GivensDecomposition dec = givens_decompose(u);

  FockAmplitudes psi = state;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    if (psi.data()[k] == Complex(0.0)) continue;
    const std::vector<int> occ = psi.occupation(k);
    Complex phase = 1.0;
    for (std::size_t m = 0; m < occ.size(); ++m) {
      phase *= std::pow(dec.phases(static_cast<Eigen::Index>(m)), occ[m]);
    }
    psi.data()[k] *= phase;
  }
  for (auto it = dec.rotations.rbegin(); it != dec.rotations.rend(); ++it) {
    psi = apply_two_mode(psi, *it);
  }
  return psi;
}

FockAmplitudes heralded_amplitudes_evolved(double r, std::span<const double> phases, int cutoff,
                                           LayerSign sign) {
  const int n = static_cast<int>(phases.size());
  if (n < 1) throw std::invalid_argument("heralded_amplitudes_evolved: no phases");
  if (cutoff < 1 || cutoff > kMaxSectorPhotons) {
    throw std::invalid_argument("heralded_amplitudes_evolved: cutoff outside [1, 8]");
  }
  const ComplexMatrix u = averaging_interferometer(phases);
  const FockAmplitudes input = tmsv_amplitudes(r, cutoff, sign);
  FockAmplitudes out(2, cutoff);
  std::vector<int> arm(static_cast<std::size_t>(n), 0);
  for (int photons = 0; photons <= cutoff; ++photons) {
    FockAmplitudes sector(n, photons);
    arm[0] = photons;
    sector(arm) = 1.0;
    const FockAmplitudes evolved = fock_linear_optics(sector, u);
    // Project modes 2..n onto vacuum: only |photons, 0, ..., 0> survives.
    const int both[2] = {photons, photons};
    out(both) = input(both) * evolved(arm);
  }
  out.set_tail_bound(input.tail_bound());
  return out;
}

Matrix moments_to_covariance(const FockAmplitudes& state) {
  if (state.modes() != 2) throw std::invalid_argument("moments_to_covariance: two modes only");
  const double norm = state.norm_squared();
  if (!(norm >= 1e-12)) throw std::invalid_argument("moments_to_covariance: norm below 1e-12");

  const FockAmplitudes lowered[2] = {lower(state, 0), lower(state, 1)};
  Matrix cov(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Complex m = inner(state, lower(lowered[j], i)) / norm;  // <a_i a_j>
      const Complex nn = inner(lowered[i], lowered[j]) / norm;      // <a_i^dag a_j>
      const double delta = i == j ? 1.0 : 0.0;
      cov(2 * i, 2 * j) = 2.0 * (m + nn).real() + delta;
      cov(2 * i + 1, 2 * j + 1) = 2.0 * (nn - m).real() + delta;
      cov(2 * i, 2 * j + 1) = 2.0 * (m + nn).imag();
      cov(2 * j + 1, 2 * i) = cov(2 * i, 2 * j + 1);
    }
  }
  return symmetrized(cov);
}

double reduced_entropy_bits(const FockAmplitudes& state) {
  if (state.modes() != 2) throw std::invalid_argument("reduced_entropy_bits: two modes only");
  const double norm = state.norm_squared();
  if (!(norm >= 1e-12)) throw std::invalid_argument("reduced_entropy_bits: norm below 1e-12");
  const int d = state.cutoff() + 1;
  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      Complex s = 0.0;
      for (int k = 0; k < d; ++k) {
        const int occ_a[2] = {a, k};
        const int occ_b[2] = {b, k};
        s += state(occ_a) * std::conj(state(occ_b));
      }
      rho(a, b) = s / norm;
    }
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho, Eigen::EigenvaluesOnly);
  double entropy = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    const double p = es.eigenvalues()(k);
    if (p > 1e-300) entropy -= p * std::log2(p);
  }
  return entropy;
}

}  // namespace uacv::fock
