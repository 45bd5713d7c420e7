#include "ptsim/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ptsim {

DilationResult dilate(const Matrix& v) {
  if (v.rows() != v.cols() || v.rows() == 0)
    throw std::invalid_argument("dilate: operator must be square and non-empty");
  // One SVD feeds every block. Building the two defect square roots from the
  // same singular values keeps W unitary even when the top singular value of
  // the scaled operator sits exactly at 1, where independent eigensolves of
  // I - A^dag A and I - A A^dag diverge by sqrt(machine epsilon).
  Eigen::JacobiSVD<Matrix> svd(v, Eigen::ComputeFullU | Eigen::ComputeFullV);
  double sigma_max = svd.singularValues()(0);
  if (sigma_max <= 0.0) throw std::invalid_argument("dilate: operator is zero");
  double eta = 1.0 / sigma_max;

  int d = static_cast<int>(v.rows());
  Matrix a = eta * v;
  Eigen::VectorXd defect(d);
  for (int i = 0; i < d; ++i) {
    double s = std::min(eta * svd.singularValues()(i), 1.0);
    defect(i) = std::sqrt(std::max(1.0 - s * s, 0.0));
  }
  Matrix u = svd.matrixU();
  Matrix vt = svd.matrixV();
  Matrix w(2 * d, 2 * d);
  w.topLeftCorner(d, d) = a;
  w.topRightCorner(d, d) = u * defect.asDiagonal() * u.adjoint();
  w.bottomLeftCorner(d, d) = vt * defect.asDiagonal() * vt.adjoint();
  w.bottomRightCorner(d, d) = -a.adjoint();
  return {eta, std::move(a), std::move(w)};
}

namespace {

struct Branches {
  double success_prob;
  Matrix success;  // unnormalized ancilla-0 block
  Matrix failure;  // unnormalized ancilla-1 block
};

Branches run_dilation(const DensityMatrix& rho_ab, const Matrix& v_on_a) {
  int da = static_cast<int>(v_on_a.rows());
  if (v_on_a.rows() != v_on_a.cols() || da == 0 || rho_ab.dim() % da != 0)
    throw std::invalid_argument("dilation: operator does not divide the state dimension");
  int db = rho_ab.dim() / da;
  int n = rho_ab.dim();

  DilationResult dil = dilate(v_on_a);
  Matrix full = kron(dil.unitary, identity(db));  // on ancilla (x) A (x) B

  Matrix anc0 = Matrix::Zero(2, 2);
  anc0(0, 0) = 1;
  Matrix joint = kron(anc0, rho_ab.matrix());
  joint = full * joint * full.adjoint();

  Branches out;
  out.success = joint.topLeftCorner(n, n);
  out.failure = joint.bottomRightCorner(n, n);
  double p = out.success.trace().real();
  p = std::clamp(p, 0.0, 1.0);
  if (std::abs(p - 1.0) < 1e-12) p = 1.0;  // unitary v: success is certain
  out.success_prob = p;
  return out;
}

DensityMatrix normalized_branch(const Matrix& block, double weight) {
  if (weight <= tol.annihilation)
    throw std::domain_error("state annihilated by evolution");
  Matrix m = block / weight;
  return DensityMatrix(0.5 * (m + Matrix(m.adjoint())));
}

}  // namespace

Postselected apply_postselected(const DensityMatrix& rho_ab, const Matrix& v_on_a) {
  Branches br = run_dilation(rho_ab, v_on_a);
  return {br.success_prob, normalized_branch(br.success, br.success.trace().real())};
}

SampledRound sample_round(const DensityMatrix& rho_ab, const Matrix& v_on_a, double rand) {
  if (!(rand >= 0.0 && rand < 1.0))
    throw std::invalid_argument("sample_round: rand must lie in [0, 1)");
  Branches br = run_dilation(rho_ab, v_on_a);
  if (rand < br.success_prob)
    return {true, normalized_branch(br.success, br.success.trace().real())};
  return {false, normalized_branch(br.failure, br.failure.trace().real())};
}

double entangled_success_formula(double alpha) {
  double s = std::sin(alpha);
  return (1.0 + s * s) / ((1.0 + s) * (1.0 + s));
}

}  // namespace ptsim
