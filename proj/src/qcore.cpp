#include "geopath/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include "geopath/error.hpp"

namespace geopath {

StateVector::StateVector(Vector amplitudes, double norm_tol)
    : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) {
    throw Error(ErrorKind::InvalidArgument, "state vector must be non-empty");
  }
  const double defect = std::abs(amps_.norm() - 1.0);
  if (defect > norm_tol) {
    std::ostringstream msg;
    msg << "state vector not normalized (|norm - 1| = " << defect << ")";
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
}

StateVector StateVector::basis(int dim, int k) {
  if (k < 0 || k >= dim) {
    throw Error(ErrorKind::InvalidArgument, "basis index out of range");
  }
  Vector v = Vector::Zero(dim);
  v[k] = 1.0;
  return StateVector(std::move(v));
}

HermitianMatrix::HermitianMatrix(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "Hermitian matrix must be square");
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::zero(int dim) {
  return HermitianMatrix(Matrix::Zero(dim, dim));
}

double anti_hermitian_residual(const Matrix& m) {
  return (0.5 * (m - m.adjoint())).cwiseAbs().maxCoeff();
}

double unitarity_defect(const Matrix& u) {
  const Matrix g = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  return g.cwiseAbs().maxCoeff();
}

UnitaryMatrix::UnitaryMatrix(Matrix m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "unitary matrix must be square");
  }
  const double defect = geopath::unitarity_defect(m_);
  if (!(defect <= tol)) {
    std::ostringstream msg;
    msg << "unitarity lost: max|U^dag U - I| = " << defect << " > " << tol
        << "; increase the step count";
    throw Error(ErrorKind::UnitarityLost, msg.str());
  }
}

UnitaryMatrix UnitaryMatrix::identity(int dim) {
  return UnitaryMatrix(Matrix::Identity(dim, dim), 0.0);
}

double UnitaryMatrix::unitarity_defect() const {
  return geopath::unitarity_defect(m_);
}

GateSpec::GateSpec(const Vec3& axis, double half_angle)
    : axis_(axis), half_angle_(principal_angle(half_angle)) {
  if (!std::isfinite(half_angle) || !axis.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "gate spec must be finite");
  }
  if (std::abs(axis.norm() - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "gate axis must be a unit vector");
  }
}

GateSpec GateSpec::normalized(const Vec3& axis, double half_angle) {
  const double n = axis.norm();
  if (!(n > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "gate axis must be nonzero");
  }
  return GateSpec(axis / n, half_angle);
}

double GateSpec::theta0() const {
  return std::acos(std::clamp(axis_.z(), -1.0, 1.0));
}

double GateSpec::phi0() const {
  if (std::hypot(axis_.x(), axis_.y()) == 0.0) return 0.0;
  return std::atan2(axis_.y(), axis_.x());
}

namespace pauli {

const Matrix& identity() {
  static const Matrix m = Matrix::Identity(2, 2);
  return m;
}

const Matrix& x() {
  static const Matrix m = [] {
    Matrix s = Matrix::Zero(2, 2);
    s(0, 1) = 1.0;
    s(1, 0) = 1.0;
    return s;
  }();
  return m;
}

// sigma_y = -i|0><1| + i|1><0|
const Matrix& y() {
  static const Matrix m = [] {
    Matrix s = Matrix::Zero(2, 2);
    s(0, 1) = -kI;
    s(1, 0) = kI;
    return s;
  }();
  return m;
}

// sigma_z = |0><0| - |1><1|
const Matrix& z() {
  static const Matrix m = [] {
    Matrix s = Matrix::Zero(2, 2);
    s(0, 0) = 1.0;
    s(1, 1) = -1.0;
    return s;
  }();
  return m;
}

Matrix dot(const Vec3& h) {
  Matrix m(2, 2);
  m(0, 0) = h.z();
  m(1, 1) = -h.z();
  m(0, 1) = Complex(h.x(), -h.y());
  m(1, 0) = Complex(h.x(), h.y());
  return m;
}

}  // namespace pauli

PauliComponents pauli_components(const Matrix& h2) {
  if (h2.rows() != 2 || h2.cols() != 2) {
    throw Error(ErrorKind::DimensionMismatch, "Pauli decomposition needs a 2x2 matrix");
  }
  PauliComponents c;
  c.h0 = 0.5 * (h2(0, 0).real() + h2(1, 1).real());
  c.h = Vec3(0.5 * (h2(0, 1).real() + h2(1, 0).real()),
             0.5 * (h2(1, 0).imag() - h2(0, 1).imag()),
             0.5 * (h2(0, 0).real() - h2(1, 1).real()));
  return c;
}

double principal_angle(double angle) {
  double a = std::remainder(angle, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix su2_exp(const Vec3& h, double dt) {
  const double norm = h.norm();
  const double x = norm * dt;
  // sin(|h| dt) / |h|, stable as |h| -> 0
  const double s = (std::abs(x) < 1e-8) ? dt * (1.0 - x * x / 6.0) : std::sin(x) / norm;
  const double c = std::cos(x);
  Matrix u(2, 2);
  u(0, 0) = Complex(c, -s * h.z());
  u(1, 1) = Complex(c, s * h.z());
  // -i s (hx sigma_x + hy sigma_y)
  u(0, 1) = Complex(-s * h.y(), -s * h.x());
  u(1, 0) = Complex(s * h.y(), -s * h.x());
  return u;
}

namespace {

// Connected components of the nonzero pattern of a square matrix.
std::vector<std::vector<int>> coupled_blocks(const Matrix& h) {
  const int n = static_cast<int>(h.rows());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (h(i, j) != Complex(0.0) || h(j, i) != Complex(0.0)) {
        const int a = find(i);
        const int b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<int>> blocks;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[slot[r]].push_back(i);
  }
  return blocks;
}

Matrix expi_dense(const Matrix& h, double dt) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  const Eigen::VectorXd& w = eig.eigenvalues();
  const Matrix& v = eig.eigenvectors();
  Vector phases(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    phases[k] = std::exp(Complex(0.0, -w[k] * dt));
  }
  return v * phases.asDiagonal() * v.adjoint();
}

}  // namespace

Matrix expi_hermitian(const Matrix& h, double dt) {
  const int n = static_cast<int>(h.rows());
  if (n != h.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "exponent must be square");
  }
  if (n == 2) {
    const PauliComponents c = pauli_components(h);
    return std::exp(Complex(0.0, -c.h0 * dt)) * su2_exp(c.h, dt);
  }
  Matrix out = Matrix::Zero(n, n);
  for (const auto& block : coupled_blocks(h)) {
    const int m = static_cast<int>(block.size());
    if (m == 1) {
      const int i = block[0];
      out(i, i) = std::exp(Complex(0.0, -h(i, i).real() * dt));
      continue;
    }
    Matrix sub(m, m);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) sub(a, b) = h(block[a], block[b]);
    }
    Matrix e;
    if (m == 2) {
      const PauliComponents c = pauli_components(sub);
      e = std::exp(Complex(0.0, -c.h0 * dt)) * su2_exp(c.h, dt);
    } else {
      e = expi_dense(sub, dt);
    }
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) out(block[a], block[b]) = e(a, b);
    }
  }
  return out;
}

Matrix rotation_unitary(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0.0)) return pauli::identity();
  return su2_exp(axis / n, 0.5 * angle);
}

Matrix su2_from_rotation(const Mat3& rotation) {
  const Eigen::Quaterniond q(rotation);
  Matrix w = q.w() * pauli::identity();
  w -= kI * pauli::dot(q.vec());
  return w;
}

UnitaryMatrix gate_from_spec(const GateSpec& spec) {
  return UnitaryMatrix(su2_exp(spec.axis(), spec.half_angle()), 1e-12);
}

double gate_fidelity(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "gate_fidelity: dimension mismatch");
  }
  return std::abs((u.adjoint() * v).trace()) / static_cast<double>(u.rows());
}

std::vector<double> holonomy_extract(const Matrix& u,
                                     std::span<const StateVector> basis,
                                     double eigentol) {
  const auto dim = u.rows();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].dim() != dim) {
      throw Error(ErrorKind::DimensionMismatch, "holonomy basis has wrong dimension");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(basis[j].amplitudes().dot(basis[i].amplitudes())) > 1e-10) {
        throw Error(ErrorKind::InvalidArgument, "holonomy basis is not orthonormal");
      }
    }
  }
  std::vector<double> phases;
  phases.reserve(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Vector& v = basis[k].amplitudes();
    const Vector uv = u * v;
    const Complex diag = v.dot(uv);  // <v|U|v>
    const double residual = (uv - diag * v).norm();
    if (residual > eigentol) {
      std::ostringstream msg;
      msg << "basis vector " << k << " is not mapped onto itself (residual "
          << residual << " > " << eigentol << "); the evolution is not cyclic";
      throw Error(ErrorKind::NonCyclic, msg.str());
    }
    phases.push_back(principal_angle(std::arg(diag)));
  }
  return phases;
}

}  // namespace geopath
