#pragma once

// Dense complex linear algebra for the 2- and 4-dimensional qubit spaces and
// small Fock-truncated spaces: states, Hermitian generators, unitaries,
// Pauli algebra and gate comparison.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace geopath {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

/// Normalized state. Construction checks the norm; nothing renormalizes.
class StateVector {
 public:
  explicit StateVector(Vector amplitudes, double norm_tol = 1e-12);

  static StateVector basis(int dim, int k);

  int dim() const { return static_cast<int>(amps_.size()); }
  const Vector& amplitudes() const { return amps_; }
  Complex operator[](int i) const { return amps_[i]; }

 private:
  Vector amps_;
};

/// Hermitian matrix, stored exactly Hermitian: the constructor keeps the
/// Hermitian part (M + M^dagger) / 2, which is bitwise self-adjoint.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const Matrix& m);

  static HermitianMatrix zero(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

 private:
  Matrix m_;
};

/// Max-entry norm of the anti-Hermitian part (M - M^dagger) / 2.
double anti_hermitian_residual(const Matrix& m);

/// Unitary matrix checked against U^dagger U = I at construction.
class UnitaryMatrix {
 public:
  /// Throws ErrorKind::UnitarityLost when max|U^dagger U - I| > tol.
  UnitaryMatrix(Matrix m, double tol);

  static UnitaryMatrix identity(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double unitarity_defect() const;

 private:
  Matrix m_;
};

/// Max-entry deviation of U^dagger U from the identity.
double unitarity_defect(const Matrix& u);

/// Target one-qubit rotation exp(-i gamma n.sigma): axis n and half angle
/// gamma (the rotation angle is 2 gamma). gamma is kept in (-pi, pi].
class GateSpec {
 public:
  GateSpec(const Vec3& axis, double half_angle);

  /// Normalizes `axis` first; throws InvalidArgument for a zero vector.
  static GateSpec normalized(const Vec3& axis, double half_angle);

  const Vec3& axis() const { return axis_; }
  double half_angle() const { return half_angle_; }
  /// Polar and azimuthal angle of the axis; phi0 is 0 on the z axis.
  double theta0() const;
  double phi0() const;

 private:
  Vec3 axis_;
  double half_angle_;
};

namespace pauli {
const Matrix& identity();
const Matrix& x();
const Matrix& y();
const Matrix& z();
/// h.sigma
Matrix dot(const Vec3& h);
}  // namespace pauli

/// Components (h0, h) with H = h0 I + h.sigma for a 2x2 Hermitian matrix.
struct PauliComponents {
  double h0;
  Vec3 h;
};
PauliComponents pauli_components(const Matrix& h2);

/// Angle wrapped into (-pi, pi].
double principal_angle(double angle);

Matrix kron(const Matrix& a, const Matrix& b);

/// exp(-i dt h.sigma) in closed form.
Matrix su2_exp(const Vec3& h, double dt);

/// exp(-i H dt) for Hermitian H. The sparsity pattern is split into
/// connected blocks; 1x1 and 2x2 blocks are exponentiated in closed form,
/// larger ones through an eigendecomposition.
Matrix expi_hermitian(const Matrix& h, double dt);

/// SU(2) element that rotates Bloch vectors by `angle` about `axis`:
/// W (v.sigma) W^dagger = (R v).sigma.
Matrix rotation_unitary(const Vec3& axis, double angle);

/// SU(2) lift of a proper rotation matrix.
Matrix su2_from_rotation(const Mat3& rotation);

/// cos(gamma) I - i sin(gamma) n.sigma
UnitaryMatrix gate_from_spec(const GateSpec& spec);

/// |Tr(U^dagger V)| / dim; equals 1 exactly when U and V differ by a global
/// phase.
double gate_fidelity(const Matrix& u, const Matrix& v);

/// Principal-branch phases arg<phi_k|U|phi_k> for an orthonormal basis of
/// eigenvectors of U. Throws NonCyclic when a basis vector is not mapped onto
/// itself within `eigentol`.
std::vector<double> holonomy_extract(const Matrix& u,
                                     std::span<const StateVector> basis,
                                     double eigentol = 1e-6);

}  // namespace geopath
