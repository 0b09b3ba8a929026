#pragma once

#include "uacv/gaussian.hpp"

#include <random>

namespace uacv::support {

// Haar-ish unitary: QR of a complex Gaussian matrix with the phases of R's
// diagonal folded back in.
inline ComplexMatrix random_unitary(int n, std::mt19937_64& gen) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix z(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) z(i, j) = {g(gen), g(gen)};
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) q.col(j) *= std::polar(1.0, std::arg(r(j, j)));
  return q;
}

inline std::vector<double> random_phases(int n, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-3.14159, 3.14159);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (double& p : out) p = u(gen);
  return out;
}

// Passive * local squeezers * passive, a generic symplectic.
inline Matrix random_symplectic(int modes, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> sq(-1.0, 1.0);
  Matrix local = Matrix::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    local.block(2 * k, 2 * k, 2, 2) = SymplecticMatrix::squeezer(sq(gen)).matrix();
  }
  return symplectic_from_passive(random_unitary(modes, gen)).matrix() * local *
         symplectic_from_passive(random_unitary(modes, gen)).matrix();
}

// S diag(nu) S^T with nu >= 1; pure when `mixed` is false.
inline Matrix random_covariance(int modes, std::mt19937_64& gen, bool mixed = true) {
  std::uniform_real_distribution<double> th(1.0, 3.0);
  Vector d(2 * modes);
  for (int k = 0; k < modes; ++k) d(2 * k) = d(2 * k + 1) = mixed ? th(gen) : 1.0;
  const Matrix s = random_symplectic(modes, gen);
  return symmetrized(s * d.asDiagonal() * s.transpose());
}

}  // namespace uacv::support
