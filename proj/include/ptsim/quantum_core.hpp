#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace ptsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Every numeric threshold used by the library. Tests reference these instead of
// re-declaring magic numbers.
struct Tolerances {
  double hermiticity = 1e-10;       // max |m - m^dag| entry for Hermitian inputs
  double unit_trace = 1e-10;        // |Tr(rho) - 1|
  double psd_floor = -1e-9;         // smallest admissible eigenvalue of a state
  double state_norm = 1e-10;        // | ||psi|| - 1 |
  double sqrt_domain = -1e-6;       // below this, sqrt_psd refuses the input
  double annihilation = 1e-12;      // Tr[v rho v^dag] at or below this has no post-state
  double spectrum_imag = 1e-9;      // |Im E| above this marks a broken phase
  double coalescence = 1e-5;        // eigenvalue gap (relative to scale) for EP detection
  double defect_condition = 1e5;    // eigenvector condition number for EP detection
  double specific_time_gap = 1e-9;  // deltaE at or below this has no specific time
  double closed_form = 1e-10;       // default brute-vs-formula agreement
};

inline constexpr Tolerances tol{};

template <class DerivedA, class DerivedB>
Matrix kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return Eigen::kroneckerProduct(a.derived().template cast<Complex>().eval(),
                                 b.derived().template cast<Complex>().eval());
}

template <class Derived>
Matrix dagger(const Eigen::MatrixBase<Derived>& m) {
  return m.derived().template cast<Complex>().adjoint();
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const Matrix& m, double tolerance = tol.hermiticity) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tolerance;
}

// exp(m) by scaling-and-squaring with a Pade approximant. Safe on defective input.
Matrix expm(const Matrix& m);

// Hermitian PSD square root. Eigenvalues in [sqrt_domain, 0) are clamped to zero;
// anything below sqrt_domain is a domain error.
Matrix sqrt_psd(const Matrix& m);

// Eigenvalues sorted by (real, imag). General complex input.
std::vector<Complex> eigvals(const Matrix& m);

class PureState {
 public:
  explicit PureState(Vector amplitudes);        // must already be normalized
  static PureState normalized(Vector amplitudes);

  int dim() const { return static_cast<int>(amps_.size()); }
  const Vector& amplitudes() const { return amps_; }
  Matrix projector() const { return amps_ * amps_.adjoint(); }

 private:
  Vector amps_;
};

class DensityMatrix {
 public:
  // Validates: square, Hermitian within tol.hermiticity, unit trace within
  // tol.unit_trace, smallest eigenvalue >= tol.psd_floor.
  explicit DensityMatrix(Matrix rho);
  static DensityMatrix from_pure(const PureState& psi) { return DensityMatrix(psi.projector()); }

  int dim() const { return static_cast<int>(rho_.rows()); }
  const Matrix& matrix() const { return rho_; }

 private:
  Matrix rho_;
};

enum class Subsystem { A, B };

// rho lives on A (x) B with dims (dim_a, dim_b); traces out the other subsystem.
Matrix partial_trace(const Matrix& rho, int dim_a, int dim_b, Subsystem keep);
DensityMatrix partial_trace(const DensityMatrix& rho, int dim_a, int dim_b, Subsystem keep);

// (1/2) sum |eig(a - b)| via a Hermitian eigensolve of the difference.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
double trace_distance(const Matrix& a, const Matrix& b);

Matrix identity(int d);
Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_z();
// Spin-1 operators with S_z = diag(1, 0, -1); Tr(S_i^2) = 2.
Matrix spin1_x();
Matrix spin1_y();
Matrix spin1_z();
Matrix exchange(int d);  // ones on the anti-diagonal

Vector ket0();
Vector ket1();
Vector ket_plus();     // sigma_x eigenvector, +1
Vector ket_minus();    // sigma_x eigenvector, -1
Vector ket_plus_y();   // (|0> + i|1>)/sqrt(2)
Vector ket_minus_y();  // (|0> - i|1>)/sqrt(2)
Vector phi_plus_ket(int d);

}  // namespace ptsim
