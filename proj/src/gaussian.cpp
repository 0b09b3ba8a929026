#include "uacv/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>

namespace uacv {

GaussianState make_trusted_state(Matrix cov);

namespace {

void require_square_even(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
    throw std::invalid_argument(std::string(what) +
                                ": expected a nonempty 2m x 2m matrix");
  }
}

void require_symmetric(const Matrix& m, const char* what) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
    throw std::invalid_argument(std::string(what) + ": matrix is not symmetric");
  }
}

void require_two_mode(const Matrix& cov, const char* what) {
  if (cov.rows() != 4 || cov.cols() != 4) {
    throw std::invalid_argument(std::string(what) +
                                ": expected a 4x4 two-mode covariance");
  }
}

Matrix sqrt_positive(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

bool positive_definite(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  return llt.info() == Eigen::Success;
}

// sigma^{1/2} i Omega sigma^{1/2} is Hermitian with spectrum {+-nu_k}.
Eigen::SelfAdjointEigenSolver<ComplexMatrix> hermitian_symplectic_problem(
    const Matrix& cov, Matrix* root) {
  *root = sqrt_positive(cov);
  const Matrix a = *root * symplectic_form(static_cast<int>(cov.rows() / 2)) * *root;
  const ComplexMatrix h = std::complex<double>(0.0, 1.0) * a.cast<std::complex<double>>();
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h);
}

std::pair<double, double> two_mode_invariant_roots(double delta, double det) {
  const double disc = std::sqrt(std::max(0.0, delta * delta - 4.0 * det));
  const double plus_sq = 0.5 * (delta + disc);
  const double minus_sq = plus_sq > 0.0 ? det / plus_sq : 0.0;
  return {std::sqrt(std::max(0.0, minus_sq)), std::sqrt(plus_sq)};
}

}  // namespace

GaussianState make_trusted_state(Matrix cov) { return GaussianState(symmetrized(cov)); }

Matrix symplectic_form(int modes) {
  Matrix omega = Matrix::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

GaussianState GaussianState::vacuum(int modes) {
  if (modes < 1) throw std::invalid_argument("vacuum: modes must be positive");
  return GaussianState(Matrix::Identity(2 * modes, 2 * modes));
}

GaussianState GaussianState::from_covariance(const Matrix& cov) {
  require_square_even(cov, "GaussianState");
  if (!cov.allFinite()) throw std::invalid_argument("GaussianState: non-finite entries");
  require_symmetric(cov, "GaussianState");
  Matrix sym = symmetrized(cov);
  const double nu_min = min_symplectic_eigenvalue(sym);
  if (nu_min < 1.0 - kPhysicalityTolerance) {
    throw PhysicalityError("GaussianState: uncertainty relation violated (nu_min = " +
                           std::to_string(nu_min) + ")");
  }
  return GaussianState(std::move(sym));
}

GaussianState GaussianState::tensor(const GaussianState& other) const {
  const auto n1 = cov_.rows();
  const auto n2 = other.cov_.rows();
  Matrix out = Matrix::Zero(n1 + n2, n1 + n2);
  out.topLeftCorner(n1, n1) = cov_;
  out.bottomRightCorner(n2, n2) = other.cov_;
  return GaussianState(std::move(out));
}

GaussianState GaussianState::reduced(std::span<const int> modes) const {
  const int m = static_cast<int>(modes.size());
  Matrix out(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      out.block<2, 2>(2 * i, 2 * j) = cov_.block<2, 2>(2 * modes[i], 2 * modes[j]);
    }
  }
  return GaussianState(std::move(out));
}

SymplecticMatrix::SymplecticMatrix(Matrix s) : s_(std::move(s)) {
  require_square_even(s_, "SymplecticMatrix");
  const Matrix omega = symplectic_form(modes());
  const double defect = (s_ * omega * s_.transpose() - omega).cwiseAbs().maxCoeff();
  if (!(defect <= kSymplecticTolerance)) {
    throw std::invalid_argument("SymplecticMatrix: S Omega S^T != Omega (defect " +
                                std::to_string(defect) + ")");
  }
}

SymplecticMatrix SymplecticMatrix::identity(int modes) {
  return SymplecticMatrix(Matrix::Identity(2 * modes, 2 * modes));
}

SymplecticMatrix SymplecticMatrix::rotation(double theta) {
  Matrix s(2, 2);
  s << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return SymplecticMatrix(std::move(s));
}

SymplecticMatrix SymplecticMatrix::squeezer(double r) {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 0) = std::exp(-r);
  s(1, 1) = std::exp(r);
  return SymplecticMatrix(std::move(s));
}

QuadratureForm::QuadratureForm(Vector coefficients) : coefficients_(std::move(coefficients)) {
  if (coefficients_.size() == 0 || coefficients_.size() % 2 != 0) {
    throw std::invalid_argument("QuadratureForm: length must be 2m");
  }
  if (std::abs(coefficients_.squaredNorm() - 1.0) > 1e-12) {
    throw std::invalid_argument("QuadratureForm: coefficients are not normalized");
  }
}

QuadratureForm QuadratureForm::epr_difference() {
  Vector f = Vector::Zero(4);
  f(0) = std::numbers::sqrt2 / 2.0;
  f(2) = -std::numbers::sqrt2 / 2.0;
  return QuadratureForm(std::move(f));
}

GaussianState tmsv_covariance(double r, double theta) {
  if (!std::isfinite(r) || r < 0.0) {
    throw std::invalid_argument("tmsv_covariance: r must be finite and non-negative");
  }
  if (!std::isfinite(theta)) throw std::invalid_argument("tmsv_covariance: non-finite angle");
  const double a = std::cosh(2.0 * r);
  const double c = std::sinh(2.0 * r);
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  Matrix cov = Matrix::Zero(4, 4);
  cov(0, 0) = cov(1, 1) = cov(2, 2) = cov(3, 3) = a;
  cov(0, 2) = cov(2, 0) = c * cs;
  cov(0, 3) = cov(3, 0) = c * sn;
  cov(1, 2) = cov(2, 1) = c * sn;
  cov(1, 3) = cov(3, 1) = -c * cs;
  return make_trusted_state(std::move(cov));
}

SymplecticMatrix symplectic_from_passive(const ComplexMatrix& u) {
  if (u.rows() != u.cols() || u.rows() == 0) {
    throw std::invalid_argument("symplectic_from_passive: U must be square");
  }
  const auto n = u.rows();
  const double defect =
      (u.adjoint() * u - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(defect <= kUnitarityTolerance)) {
    throw UnitarityError("symplectic_from_passive: U is not unitary (defect " +
                             std::to_string(defect) + ")",
                         defect);
  }
  Matrix s(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double re = u(j, k).real();
      const double im = u(j, k).imag();
      s(2 * j, 2 * k) = re;
      s(2 * j, 2 * k + 1) = -im;
      s(2 * j + 1, 2 * k) = im;
      s(2 * j + 1, 2 * k + 1) = re;
    }
  }
  return SymplecticMatrix(std::move(s));
}

GaussianState apply_symplectic(const GaussianState& state, const SymplecticMatrix& s,
                               std::span<const int> modes) {
  const int m = state.modes();
  if (s.modes() != static_cast<int>(modes.size())) {
    throw std::invalid_argument("apply_symplectic: S dimension does not match mode subset");
  }
  std::set<int> seen;
  for (int k : modes) {
    if (k < 0 || k >= m || !seen.insert(k).second) {
      throw std::invalid_argument("apply_symplectic: invalid or repeated mode index");
    }
  }
  Matrix full = Matrix::Identity(2 * m, 2 * m);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    for (std::size_t j = 0; j < modes.size(); ++j) {
      full.block<2, 2>(2 * modes[i], 2 * modes[j]) =
          s.matrix().block<2, 2>(2 * static_cast<int>(i), 2 * static_cast<int>(j));
    }
  }
  return make_trusted_state(full * state.cov() * full.transpose());
}

GaussianState apply_symplectic(const GaussianState& state, const SymplecticMatrix& s) {
  std::vector<int> all(static_cast<std::size_t>(state.modes()));
  for (int k = 0; k < state.modes(); ++k) all[static_cast<std::size_t>(k)] = k;
  return apply_symplectic(state, s, all);
}

HeraldResult herald_vacuum(const GaussianState& state, std::span<const int> measured) {
  const int m = state.modes();
  if (measured.empty() || static_cast<int>(measured.size()) >= m) {
    throw std::invalid_argument("herald_vacuum: measured set must be a nonempty proper subset");
  }
  std::vector<bool> is_measured(static_cast<std::size_t>(m), false);
  for (int k : measured) {
    if (k < 0 || k >= m || is_measured[static_cast<std::size_t>(k)]) {
      throw std::invalid_argument("herald_vacuum: invalid or repeated mode index");
    }
    is_measured[static_cast<std::size_t>(k)] = true;
  }
  std::vector<int> keep_idx;
  std::vector<int> meas_idx;
  for (int k = 0; k < m; ++k) {
    auto& target = is_measured[static_cast<std::size_t>(k)] ? meas_idx : keep_idx;
    target.push_back(2 * k);
    target.push_back(2 * k + 1);
  }
  const Matrix& cov = state.cov();
  const auto nb = static_cast<Eigen::Index>(meas_idx.size());
  const Matrix sigma_a = cov(keep_idx, keep_idx);
  const Matrix sigma_ab = cov(keep_idx, meas_idx);
  const Matrix shifted = cov(meas_idx, meas_idx) + Matrix::Identity(nb, nb);

  Eigen::SelfAdjointEigenSolver<Matrix> es(shifted, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 1e-12)) {
    throw NumericalError("herald_vacuum: sigma_B + I is numerically singular");
  }
  Eigen::LLT<Matrix> llt(shifted);
  const Matrix cond = sigma_a - sigma_ab * llt.solve(sigma_ab.transpose());
  const double det = shifted.partialPivLu().determinant();
  const double p = std::pow(2.0, static_cast<double>(nb / 2)) / std::sqrt(det);
  return HeraldResult{make_trusted_state(cond), std::min(1.0, p)};
}

GaussianState apply_uniform_loss(const GaussianState& state, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("apply_uniform_loss: gamma must lie in [0, 1]");
  }
  const auto d = state.cov().rows();
  return make_trusted_state((1.0 - gamma) * state.cov() + gamma * Matrix::Identity(d, d));
}

double purity(const Matrix& cov) {
  require_square_even(cov, "purity");
  return 1.0 / std::sqrt(cov.partialPivLu().determinant());
}

std::vector<double> symplectic_eigenvalues(const Matrix& cov) {
  require_square_even(cov, "symplectic_eigenvalues");
  require_symmetric(cov, "symplectic_eigenvalues");
  const auto m = cov.rows() / 2;
  const Matrix sym = symmetrized(cov);
  std::vector<double> nu;
  nu.reserve(static_cast<std::size_t>(m));
  if (positive_definite(sym)) {
    Matrix root;
    const auto es = hermitian_symplectic_problem(sym, &root);
    for (Eigen::Index k = m; k < 2 * m; ++k) nu.push_back(es.eigenvalues()(k));
  } else {
    // Unphysical input: moduli of the spectrum of i Omega sigma, paired.
    const Matrix omega_sigma = symplectic_form(static_cast<int>(m)) * sym;
    Eigen::EigenSolver<Matrix> es(omega_sigma, false);
    std::vector<double> moduli;
    for (Eigen::Index k = 0; k < 2 * m; ++k) moduli.push_back(std::abs(es.eigenvalues()(k)));
    std::sort(moduli.begin(), moduli.end());
    for (Eigen::Index k = 0; k < m; ++k) nu.push_back(moduli[static_cast<std::size_t>(2 * k)]);
  }
  std::sort(nu.begin(), nu.end());
  return nu;
}

std::vector<double> symplectic_eigenvalues_two_mode(const Matrix& cov) {
  require_two_mode(cov, "symplectic_eigenvalues_two_mode");
  const double delta = cov.block<2, 2>(0, 0).determinant() +
                       cov.block<2, 2>(2, 2).determinant() +
                       2.0 * cov.block<2, 2>(0, 2).determinant();
  const auto [minus, plus] = two_mode_invariant_roots(delta, cov.determinant());
  return {minus, plus};
}

WilliamsonForm williamson(const Matrix& cov) {
  require_square_even(cov, "williamson");
  require_symmetric(cov, "williamson");
  const Matrix sym = symmetrized(cov);
  if (!positive_definite(sym)) {
    throw std::invalid_argument("williamson: covariance is not positive definite");
  }
  const auto m = sym.rows() / 2;
  Matrix root;
  const auto es = hermitian_symplectic_problem(sym, &root);
  Matrix o(2 * m, 2 * m);
  WilliamsonForm out;
  Vector inv_sqrt_nu(2 * m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const double nu = es.eigenvalues()(m + k);
    const auto w = es.eigenvectors().col(m + k);
    o.col(2 * k) = std::numbers::sqrt2 * w.imag();
    o.col(2 * k + 1) = std::numbers::sqrt2 * w.real();
    inv_sqrt_nu(2 * k) = inv_sqrt_nu(2 * k + 1) = 1.0 / std::sqrt(nu);
    out.nu.push_back(nu);
  }
  out.s = root * o * inv_sqrt_nu.asDiagonal();
  return out;
}

Matrix clip_to_physical(const Matrix& cov) {
  if (Eigen::LLT<Matrix>(symmetrized(cov)).info() != Eigen::Success) {
    throw PhysicalityError("clip_to_physical: covariance is not positive definite");
  }
  const WilliamsonForm w = williamson(cov);
  const auto m = static_cast<Eigen::Index>(w.nu.size());
  Vector d(2 * m);
  for (Eigen::Index k = 0; k < m; ++k) {
    d(2 * k) = d(2 * k + 1) = std::max(1.0, w.nu[static_cast<std::size_t>(k)]);
  }
  return symmetrized(w.s * d.asDiagonal() * w.s.transpose());
}

double min_symplectic_eigenvalue(const Matrix& cov) {
  if (Eigen::LLT<Matrix>(symmetrized(cov)).info() != Eigen::Success) return 0.0;
  return symplectic_eigenvalues(cov).front();
}

Matrix partial_transpose(const Matrix& cov) {
  require_two_mode(cov, "partial_transpose");
  Vector flip = Vector::Ones(4);
  flip(3) = -1.0;
  return flip.asDiagonal() * cov * flip.asDiagonal();
}

double ppt_min_symplectic_eigenvalue(const Matrix& cov) {
  require_two_mode(cov, "ppt_min_symplectic_eigenvalue");
  const double delta_pt = cov.block<2, 2>(0, 0).determinant() +
                          cov.block<2, 2>(2, 2).determinant() -
                          2.0 * cov.block<2, 2>(0, 2).determinant();
  return two_mode_invariant_roots(delta_pt, cov.determinant()).first;
}

double eof_from_ppt_eigenvalue(double nu) {
  if (nu >= 1.0) return 0.0;
  if (!(nu > 0.0)) throw std::invalid_argument("eof_from_ppt_eigenvalue: nu must be positive");
  const double root = std::sqrt(nu);
  const double c_plus = std::pow(1.0 / root + root, 2) / 4.0;
  const double c_minus = std::pow(1.0 / root - root, 2) / 4.0;
  const double tail = c_minus > 0.0 ? c_minus * std::log2(c_minus) : 0.0;
  return std::max(0.0, c_plus * std::log2(c_plus) - tail);
}

double eof_symmetric(const Matrix& cov) {
  require_two_mode(cov, "eof_symmetric");
  const double det_a = cov.block<2, 2>(0, 0).determinant();
  const double det_b = cov.block<2, 2>(2, 2).determinant();
  if (std::abs(det_a - det_b) > 1e-9 * std::max(1.0, std::abs(det_a))) {
    throw std::invalid_argument("eof_symmetric: state is not symmetric (det A != det B)");
  }
  return eof_from_ppt_eigenvalue(ppt_min_symplectic_eigenvalue(cov));
}

double log_negativity(const Matrix& cov) {
  return std::max(0.0, -std::log2(ppt_min_symplectic_eigenvalue(cov)));
}

double quadrature_variance(const Matrix& cov, const QuadratureForm& form) {
  const Vector& f = form.coefficients();
  if (f.size() != cov.rows()) {
    throw std::invalid_argument("quadrature_variance: form length does not match state");
  }
  return f.dot(cov * f);
}

double squeezing_db(double variance) {
  if (!(variance > 0.0)) throw std::invalid_argument("squeezing_db: variance must be positive");
  return -10.0 * std::log10(variance);
}

double squeezing_db_from_r(double r) { return 20.0 * r / std::numbers::ln10; }

double r_from_squeezing_db(double db) { return db * std::numbers::ln10 / 20.0; }

}  // namespace uacv
