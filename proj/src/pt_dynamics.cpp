#include "ptsim/pt_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ptsim {

PTHamiltonian qubit_hamiltonian(double s, double alpha) {
  if (!std::isfinite(s) || !std::isfinite(alpha))
    throw std::invalid_argument("qubit_hamiltonian: parameters must be finite");
  Matrix m(2, 2);
  Complex ia(0, std::sin(alpha));
  m << ia, 1, 1, -ia;
  return {2, s, alpha, s * m};
}

PTHamiltonian qutrit_hamiltonian(double alpha) {
  if (!std::isfinite(alpha))
    throw std::invalid_argument("qutrit_hamiltonian: alpha must be finite");
  double r = 1.0 / std::sqrt(2.0);
  Matrix m = Matrix::Zero(3, 3);
  Complex ia(0, std::sin(alpha));
  m(0, 0) = ia;
  m(2, 2) = -ia;
  m(0, 1) = m(1, 0) = m(1, 2) = m(2, 1) = 1;
  return {3, r, alpha, r * m};
}

double pt_commutation_residual(const PTHamiltonian& h) {
  Matrix p = exchange(h.dim);
  return max_abs(p * h.matrix.conjugate() * p - h.matrix);
}

namespace {

Phase alpha_convention_label(double alpha) {
  double r = std::fmod(std::abs(alpha), M_PI);
  double d = std::abs(r - M_PI / 2);
  if (d < 1e-12) return Phase::ExceptionalPoint;
  return r < M_PI / 2 ? Phase::Unbroken : Phase::Broken;
}

}  // namespace

PhaseLabel classify_phase(const PTHamiltonian& h) {
  Eigen::ComplexEigenSolver<Matrix> es(h.matrix, /*computeEigenvectors=*/true);
  std::vector<Complex> spectrum(es.eigenvalues().data(), es.eigenvalues().data() + h.dim);
  std::sort(spectrum.begin(), spectrum.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  // Condition number of the unit-column eigenvector matrix, via a Hermitian
  // eigensolve of P^dag P.
  Matrix p = es.eigenvectors();
  for (int c = 0; c < p.cols(); ++c) {
    double n = p.col(c).norm();
    if (n > 0) p.col(c) /= n;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> gram(p.adjoint() * p, Eigen::EigenvaluesOnly);
  double lo = std::max(gram.eigenvalues().minCoeff(), 0.0);
  double hi = gram.eigenvalues().maxCoeff();
  double defect = lo > 0 ? std::sqrt(hi / lo) : std::numeric_limits<double>::infinity();

  double scale = std::max(1.0, max_abs(h.matrix));
  Phase label = Phase::Unbroken;
  for (Complex e : spectrum)
    if (std::abs(e.imag()) > tol.spectrum_imag * scale) label = Phase::Broken;
  if (label == Phase::Unbroken) {
    double min_gap = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < spectrum.size(); ++i)
      for (size_t j = i + 1; j < spectrum.size(); ++j)
        min_gap = std::min(min_gap, std::abs(spectrum[i] - spectrum[j]));
    if (min_gap <= tol.coalescence * scale && defect >= tol.defect_condition)
      label = Phase::ExceptionalPoint;
  }
  return {label, alpha_convention_label(h.alpha), std::move(spectrum), defect};
}

EvolutionTime specific_time(const PTHamiltonian& h) {
  PhaseLabel ph = classify_phase(h);
  double lo = ph.spectrum.front().real();
  double hi = ph.spectrum.back().real();
  double delta_e = hi - lo;
  if (ph.label != Phase::Unbroken || delta_e <= tol.specific_time_gap)
    throw std::domain_error("specific time undefined at deltaE -> 0");
  double t = M_PI / delta_e;
  return {t, 0.5 * delta_e * t, delta_e};
}

Matrix evolution_operator(const PTHamiltonian& h, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("evolution_operator: t must be finite");
  return expm(Complex(0, -t) * h.matrix);
}

Matrix specific_time_operator(double alpha) {
  return std::sin(alpha) * sigma_z() - Complex(0, 1) * sigma_x();
}

Matrix qubit_closed_form(double s, double alpha, double t) {
  double c = std::cos(alpha);
  if (std::abs(c) < 1e-15)
    throw std::domain_error("qubit_closed_form: undefined at cos(alpha) = 0");
  double tp = s * c * t;
  Matrix m(2, 2);
  m << std::cos(tp - alpha), Complex(0, -std::sin(tp)),
       Complex(0, -std::sin(tp)), std::cos(tp + alpha);
  return m / c;
}

DensityMatrix evolve_state(const DensityMatrix& rho, const Matrix& v) {
  if (v.rows() != v.cols() || v.rows() != rho.dim())
    throw std::invalid_argument("evolve_state: operator does not match the state dimension");
  Matrix out = v * rho.matrix() * v.adjoint();
  double tr = out.trace().real();
  if (tr <= tol.annihilation) throw std::domain_error("state annihilated by evolution");
  out /= tr;
  return DensityMatrix(0.5 * (out + Matrix(out.adjoint())));
}

}  // namespace ptsim
