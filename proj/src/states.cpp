#include "ptsim/states.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ptsim {

namespace {

std::array<Matrix, 3> qubit_basis() { return {sigma_x(), sigma_y(), sigma_z()}; }
std::array<Matrix, 3> qutrit_basis() { return {spin1_x(), spin1_y(), spin1_z()}; }

Matrix bloch_combination(const std::array<Matrix, 3>& s, int d,
                         const Eigen::Vector3d& m, const Eigen::Vector3d& mp,
                         const Eigen::Vector3d& c) {
  Matrix rho = identity(d * d);
  for (int i = 0; i < 3; ++i) {
    rho += m(i) * kron(s[i], identity(d));
    rho += mp(i) * kron(identity(d), s[i]);
    rho += c(i) * kron(s[i], s[i]);
  }
  return rho / static_cast<double>(d * d);
}

DensityMatrix validated_state(const Matrix& rho, const char* who) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  double min_ev = es.eigenvalues().minCoeff();
  if (min_ev < tol.psd_floor) {
    std::ostringstream msg;
    msg << who << ": parameters give a non-PSD state, min eigenvalue " << min_ev;
    throw std::invalid_argument(msg.str());
  }
  return DensityMatrix(rho);
}

}  // namespace

DensityMatrix non_max_entangled(double beta, double gamma) {
  double n2 = beta * beta + gamma * gamma;
  if (n2 <= 0.0)
    throw std::invalid_argument("non_max_entangled: beta and gamma cannot both vanish");
  Vector pp = kron(ket_plus(), ket_plus()).col(0);
  Vector mm = kron(ket_minus(), ket_minus()).col(0);
  PureState psi = PureState::normalized(beta * pp + gamma * mm);
  return DensityMatrix::from_pure(psi);
}

DensityMatrix werner(double p) {
  if (p < -1.0 / 3.0 - 1e-12 || p > 1.0 + 1e-12)
    throw std::invalid_argument("werner: p must lie in [-1/3, 1]");
  Vector phi = phi_plus_ket(2);
  return DensityMatrix(p * (phi * phi.adjoint()) + (1.0 - p) * identity(4) / 4.0);
}

DensityMatrix canonical_two_qubit(const CanonicalParams& params) {
  Matrix rho = bloch_combination(qubit_basis(), 2, params.m, params.m_prime, params.c);
  return validated_state(rho, "canonical_two_qubit");
}

CanonicalParams qubit_readback(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw std::invalid_argument("qubit_readback: state must be two qubits");
  auto s = qubit_basis();
  CanonicalParams out;
  for (int i = 0; i < 3; ++i) {
    out.m(i) = (kron(s[i], identity(2)) * rho.matrix()).trace().real();
    out.m_prime(i) = (kron(identity(2), s[i]) * rho.matrix()).trace().real();
    out.c(i) = (kron(s[i], s[i]) * rho.matrix()).trace().real();
  }
  return out;
}

DensityMatrix two_qutrit(const QutritParams& params) {
  Matrix rho = bloch_combination(qutrit_basis(), 3, params.m, params.m_prime, params.c);
  return validated_state(rho, "two_qutrit");
}

QutritParams qutrit_readback(const DensityMatrix& rho) {
  if (rho.dim() != 9) throw std::invalid_argument("qutrit_readback: state must be two qutrits");
  auto s = qutrit_basis();
  // Tr[(S_i (x) I) rho] = (2/3) m_i and Tr[(S_i (x) S_i) rho] = (4/9) c_i.
  QutritParams out;
  for (int i = 0; i < 3; ++i) {
    out.m(i) = 1.5 * (kron(s[i], identity(3)) * rho.matrix()).trace().real();
    out.m_prime(i) = 1.5 * (kron(identity(3), s[i]) * rho.matrix()).trace().real();
    out.c(i) = 2.25 * (kron(s[i], s[i]) * rho.matrix()).trace().real();
  }
  return out;
}

DensityMatrix werner_like(int d, double p) {
  if (d != 2 && d != 3) throw std::invalid_argument("werner_like: d must be 2 or 3");
  double lo = -1.0 / (d * d - 1);
  if (p < lo - 1e-12 || p > 1.0 + 1e-12) {
    std::ostringstream msg;
    msg << "werner_like: p must lie in [" << lo << ", 1]";
    throw std::invalid_argument(msg.str());
  }
  Vector phi = phi_plus_ket(d);
  Matrix rho = p * (phi * phi.adjoint()) + (1.0 - p) * identity(d * d) / double(d * d);
  return DensityMatrix(rho);
}

}  // namespace ptsim
