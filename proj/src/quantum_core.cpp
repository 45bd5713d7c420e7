#include "ptsim/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace ptsim {

Matrix expm(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("expm: matrix must be square");
  return m.exp();
}

Matrix sqrt_psd(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("sqrt_psd: matrix must be square");
  if (!is_hermitian(m)) throw std::invalid_argument("sqrt_psd: matrix must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.size() > 0 && ev.minCoeff() < tol.sqrt_domain) {
    std::ostringstream msg;
    msg << "sqrt_psd: matrix is not PSD, min eigenvalue " << ev.minCoeff();
    throw std::domain_error(msg.str());
  }
  Eigen::VectorXd root = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<Complex> eigvals(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigvals: matrix must be square");
  Eigen::ComplexEigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
  std::vector<Complex> out(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

PureState::PureState(Vector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) throw std::invalid_argument("PureState: empty amplitude vector");
  double n = amps_.norm();
  if (std::abs(n - 1.0) > tol.state_norm) {
    std::ostringstream msg;
    msg << "PureState: norm " << n << " is not 1";
    throw std::invalid_argument(msg.str());
  }
}

PureState PureState::normalized(Vector amplitudes) {
  double n = amplitudes.norm();
  if (n <= 0.0) throw std::invalid_argument("PureState: cannot normalize the zero vector");
  return PureState(Vector(amplitudes / n));
}

DensityMatrix::DensityMatrix(Matrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols()) throw std::invalid_argument("DensityMatrix: matrix must be square");
  if (!is_hermitian(rho_)) throw std::invalid_argument("DensityMatrix: matrix must be Hermitian");
  double tr = rho_.trace().real();
  if (std::abs(tr - 1.0) > tol.unit_trace) {
    std::ostringstream msg;
    msg << "DensityMatrix: trace " << tr << " is not 1";
    throw std::invalid_argument(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  double min_ev = es.eigenvalues().minCoeff();
  if (min_ev < tol.psd_floor) {
    std::ostringstream msg;
    msg << "DensityMatrix: not PSD, min eigenvalue " << min_ev;
    throw std::invalid_argument(msg.str());
  }
}

Matrix partial_trace(const Matrix& rho, int dim_a, int dim_b, Subsystem keep) {
  if (dim_a < 1 || dim_b < 1 || rho.rows() != rho.cols() ||
      rho.rows() != static_cast<Eigen::Index>(dim_a) * dim_b) {
    throw std::invalid_argument("partial_trace: dimensions do not match the matrix");
  }
  if (keep == Subsystem::B) {
    Matrix out = Matrix::Zero(dim_b, dim_b);
    for (int a = 0; a < dim_a; ++a)
      out += rho.block(a * dim_b, a * dim_b, dim_b, dim_b);
    return out;
  }
  Matrix out = Matrix::Zero(dim_a, dim_a);
  for (int i = 0; i < dim_a; ++i)
    for (int j = 0; j < dim_a; ++j)
      out(i, j) = rho.block(i * dim_b, j * dim_b, dim_b, dim_b).trace();
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, int dim_a, int dim_b, Subsystem keep) {
  return DensityMatrix(partial_trace(rho.matrix(), dim_a, dim_b, keep));
}

double trace_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(a - b, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_distance(a.matrix(), b.matrix());
}

Matrix identity(int d) { return Matrix::Identity(d, d); }

Matrix sigma_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix sigma_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Matrix sigma_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix spin1_x() {
  Matrix m(3, 3);
  double r = 1.0 / std::sqrt(2.0);
  m << 0, r, 0, r, 0, r, 0, r, 0;
  return m;
}

Matrix spin1_y() {
  Matrix m(3, 3);
  Complex c(0, 1.0 / std::sqrt(2.0));
  m << 0, -c, 0, c, 0, -c, 0, c, 0;
  return m;
}

Matrix spin1_z() {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 1;
  m(2, 2) = -1;
  return m;
}

Matrix exchange(int d) {
  Matrix m = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, d - 1 - i) = 1;
  return m;
}

Vector ket0() {
  Vector v(2);
  v << 1, 0;
  return v;
}

Vector ket1() {
  Vector v(2);
  v << 0, 1;
  return v;
}

Vector ket_plus() {
  Vector v(2);
  v << 1, 1;
  return v / std::sqrt(2.0);
}

Vector ket_minus() {
  Vector v(2);
  v << 1, -1;
  return v / std::sqrt(2.0);
}

Vector ket_plus_y() {
  Vector v(2);
  v << 1, Complex(0, 1);
  return v / std::sqrt(2.0);
}

Vector ket_minus_y() {
  Vector v(2);
  v << 1, Complex(0, -1);
  return v / std::sqrt(2.0);
}

Vector phi_plus_ket(int d) {
  if (d < 2) throw std::invalid_argument("phi_plus_ket: dimension must be at least 2");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1;
  return v / std::sqrt(static_cast<double>(d));
}

}  // namespace ptsim
