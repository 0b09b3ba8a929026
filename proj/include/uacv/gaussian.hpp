#pragma once

// Covariance-matrix formalism for zero-mean Gaussian states.
//
// Quadratures are ordered mode-blocked (x1, p1, x2, p2, ...), with
// x = a + a^dagger and p = -i (a - a^dagger), so that the vacuum covariance
// matrix is the identity.

#include <Eigen/Dense>

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace uacv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Slack allowed below 1 on symplectic eigenvalues of a physical state.
inline constexpr double kPhysicalityTolerance = 1e-9;
/// Relative tolerance on covariance symmetry.
inline constexpr double kSymmetryTolerance = 1e-12;
/// Absolute tolerance on S Omega S^T = Omega.
inline constexpr double kSymplecticTolerance = 1e-10;
/// Absolute tolerance on U^dagger U = I for passive transformations.
inline constexpr double kUnitarityTolerance = 1e-10;

/// A covariance matrix violates the uncertainty relation.
class PhysicalityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A linear solve was too badly conditioned to trust.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix that was required to be unitary is not.
class UnitarityError : public std::invalid_argument {
 public:
  UnitarityError(const std::string& what, double defect)
      : std::invalid_argument(what), defect_(defect) {}
  double defect() const { return defect_; }

 private:
  double defect_;
};

/// Standard symplectic form: block-diagonal with [[0, 1], [-1, 0]] per mode.
Matrix symplectic_form(int modes);

/// Averages a matrix with its transpose.
Matrix symmetrized(const Matrix& m);

class GaussianState {
 public:
  static GaussianState vacuum(int modes);

  /// Validates shape, symmetry and the uncertainty relation.
  /// Throws std::invalid_argument or PhysicalityError.
  static GaussianState from_covariance(const Matrix& cov);

  int modes() const { return static_cast<int>(cov_.rows() / 2); }
  const Matrix& cov() const { return cov_; }

  /// Mode-ordered direct sum: this state's modes first.
  GaussianState tensor(const GaussianState& other) const;

  /// Reduced state on the listed modes, in the listed order.
  GaussianState reduced(std::span<const int> modes) const;

 private:
  explicit GaussianState(Matrix cov) : cov_(std::move(cov)) {}

  // Operations in this module produce physical states by construction.
  friend GaussianState make_trusted_state(Matrix cov);

  Matrix cov_;
};

class SymplecticMatrix {
 public:
  /// Throws std::invalid_argument if S Omega S^T != Omega.
  explicit SymplecticMatrix(Matrix s);

  static SymplecticMatrix identity(int modes);
  /// Single-mode rotation by angle theta: [[cos, -sin], [sin, cos]].
  static SymplecticMatrix rotation(double theta);
  /// Single-mode squeezer diag(e^-r, e^r).
  static SymplecticMatrix squeezer(double r);

  int dim() const { return static_cast<int>(s_.rows()); }
  int modes() const { return dim() / 2; }
  const Matrix& matrix() const { return s_; }

 private:
  Matrix s_;
};

/// Linear combination of quadratures normalized to unit vacuum variance.
class QuadratureForm {
 public:
  /// Throws std::invalid_argument unless |coefficients| = 1 to 1e-12.
  explicit QuadratureForm(Vector coefficients);

  /// (x1 - x2) / sqrt(2) on a two-mode state.
  static QuadratureForm epr_difference();

  const Vector& coefficients() const { return coefficients_; }

 private:
  Vector coefficients_;
};

/// Two-mode squeezed vacuum. A = B = cosh(2r) I and
/// C = sinh(2r) [[cos theta, sin theta], [sin theta, -cos theta]].
GaussianState tmsv_covariance(double r, double theta = 0.0);

/// Quadrature representation of a passive n-mode unitary (a_j -> sum_k U_jk a_k).
SymplecticMatrix symplectic_from_passive(const ComplexMatrix& u);

/// Applies S to the listed modes, in order; S must be 2 * modes.size() square.
GaussianState apply_symplectic(const GaussianState& state,
                               const SymplecticMatrix& s,
                               std::span<const int> modes);
GaussianState apply_symplectic(const GaussianState& state,
                               const SymplecticMatrix& s);

struct HeraldResult {
  GaussianState state;  ///< Conditional state on the unmeasured modes.
  double probability;
};

/// Projects the measured modes onto vacuum. The conditional state keeps the
/// unmeasured modes in their original order.
HeraldResult herald_vacuum(const GaussianState& state,
                           std::span<const int> measured);

/// Uniform pure loss gamma on every mode: cov -> (1 - gamma) cov + gamma I.
GaussianState apply_uniform_loss(const GaussianState& state, double gamma);

double purity(const Matrix& cov);
inline double purity(const GaussianState& s) { return purity(s.cov()); }

/// Ascending symplectic eigenvalues (one per mode).
std::vector<double> symplectic_eigenvalues(const Matrix& cov);

/// Two-mode symplectic eigenvalues {nu_-, nu_+} from the invariants
/// Delta = det A + det B + 2 det C and det sigma.
std::vector<double> symplectic_eigenvalues_two_mode(const Matrix& cov);

struct WilliamsonForm {
  Matrix s;                 ///< Symplectic, cov = S diag(nu) S^T.
  std::vector<double> nu;   ///< One per mode, in the order of S's blocks.
};

/// Williamson normal form for a positive-definite covariance.
WilliamsonForm williamson(const Matrix& cov);

/// Raises every symplectic eigenvalue below 1 to exactly 1. Throws
/// PhysicalityError if cov is not positive definite.
Matrix clip_to_physical(const Matrix& cov);

/// 0 when cov is not positive definite.
double min_symplectic_eigenvalue(const Matrix& cov);
inline bool is_physical(const Matrix& cov) {
  return min_symplectic_eigenvalue(cov) >= 1.0 - kPhysicalityTolerance;
}

/// Flips the sign of p on the second mode of a two-mode covariance.
Matrix partial_transpose(const Matrix& cov);

/// Smallest symplectic eigenvalue of the partially transposed state, from
/// Delta~ = det A + det B - 2 det C.
double ppt_min_symplectic_eigenvalue(const Matrix& cov);

/// Entanglement of formation (bits) of a symmetric two-mode state with
/// smallest partially transposed symplectic eigenvalue nu.
double eof_from_ppt_eigenvalue(double nu);

/// Entanglement of formation in bits. Requires det A = det B.
double eof_symmetric(const Matrix& cov);

/// max(0, -log2 nu~_-).
double log_negativity(const Matrix& cov);

double quadrature_variance(const Matrix& cov, const QuadratureForm& form);
inline double quadrature_variance(const GaussianState& s,
                                  const QuadratureForm& form) {
  return quadrature_variance(s.cov(), form);
}

/// -10 log10(variance).
double squeezing_db(double variance);

/// 10 log10(e^{2r}): squeezing of a TMSV along the EPR quadrature.
double squeezing_db_from_r(double r);
double r_from_squeezing_db(double db);

}  // namespace uacv
