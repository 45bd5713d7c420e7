#include "ptsim/signaling.hpp"

#include <cmath>
#include <stdexcept>

namespace ptsim {

Matrix alice_op_matrix(AliceOp op, int dim) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("alice_op_matrix: dim must be 2 or 3");
  if (op == AliceOp::Identity) return identity(dim);
  return dim == 2 ? sigma_x() : exchange(3);
}

Vector alice_ket(const AliceMeasurement& m, int outcome) {
  if (outcome != 0 && outcome != 1) throw std::invalid_argument("alice_ket: outcome must be 0 or 1");
  Vector k(2);
  Complex phase = std::exp(Complex(0, m.v));
  if (outcome == 0)
    k << std::cos(m.y / 2), phase * std::sin(m.y / 2);
  else
    k << std::sin(m.y / 2), -phase * std::cos(m.y / 2);
  return k;
}

Vector bob_ket(const BobMeasurement& m, int outcome) {
  return alice_ket(AliceMeasurement{m.z, m.u}, outcome);
}

namespace {

// Map applied on Alice's side. Without t this is the specific-time evolution:
// the scaled qubit operator, or expm at t* for a qutrit.
Matrix side_map(int dim_a, double alpha, std::optional<double> t) {
  if (t) {
    PTHamiltonian h = dim_a == 2 ? qubit_hamiltonian(1.0, alpha) : qutrit_hamiltonian(alpha);
    return evolution_operator(h, *t);
  }
  if (dim_a == 2) return specific_time_operator(alpha);
  PTHamiltonian h = qutrit_hamiltonian(alpha);
  return evolution_operator(h, specific_time(h).t);
}

int side_dim(const DensityMatrix& rho, const char* who) {
  if (rho.dim() == 4) return 2;
  if (rho.dim() == 9) return 3;
  throw std::invalid_argument(std::string(who) + ": state must be two qubits or two qutrits");
}

DensityMatrix after_op_and_map(const DensityMatrix& rho, AliceOp op, double alpha,
                               std::optional<double> t) {
  int da = side_dim(rho, "signaling");
  Matrix m = side_map(da, alpha, t) * alice_op_matrix(op, da);
  return evolve_state(rho, kron(m, identity(da)));
}

double bob_outcome_prob(const DensityMatrix& rho_after, const Vector& ket, int dim_a, int dim_b) {
  Matrix bob = partial_trace(rho_after.matrix(), dim_a, dim_b, Subsystem::B);
  return (ket.adjoint() * bob * ket)(0).real();
}

double minus_3_cos2(double alpha) { return -3.0 + std::cos(2 * alpha); }

GapReport make_report(std::string family, double alpha, double brute,
                      std::optional<double> closed) {
  GapReport r;
  r.family = std::move(family);
  r.alpha = alpha;
  r.brute = brute;
  r.closed_form = closed;
  if (closed) r.abs_err = std::abs(brute - *closed);
  return r;
}

}  // namespace

JointDistribution joint_distribution(const DensityMatrix& rho, AliceOp op, double alpha,
                                     const AliceMeasurement& am, const BobMeasurement& bm,
                                     std::optional<double> t) {
  if (rho.dim() != 4)
    throw std::invalid_argument("joint_distribution: state must be two qubits");
  DensityMatrix after = after_op_and_map(rho, op, alpha, t);
  JointDistribution table{};
  for (int a = 0; a < 2; ++a) {
    Vector ka = alice_ket(am, a);
    for (int b = 0; b < 2; ++b) {
      Vector kb = bob_ket(bm, b);
      Vector joint = kron(ka, kb).col(0);
      double p = (joint.adjoint() * after.matrix() * joint)(0).real();
      table[a][b] = std::max(p, 0.0);
    }
  }
  return table;
}

GapReport gap_sigma_y(const DensityMatrix& rho, double alpha) {
  if (rho.dim() != 4) throw std::invalid_argument("gap_sigma_y: state must be two qubits");
  BobMeasurement bm = sigma_y_measurement();
  Vector plus_y = bob_ket(bm, 0);
  double p_id = bob_outcome_prob(after_op_and_map(rho, AliceOp::Identity, alpha, {}), plus_y, 2, 2);
  double p_fl = bob_outcome_prob(after_op_and_map(rho, AliceOp::Flip, alpha, {}), plus_y, 2, 2);
  CanonicalParams params = qubit_readback(rho);
  double closed = canonical_gap_formula(params.m(1), params.m_prime(1), params.c(1), alpha);
  return make_report("two-qubit", alpha, p_id - p_fl, closed);
}

GapReport gap_canonical(const CanonicalParams& params, double alpha) {
  GapReport r = gap_sigma_y(canonical_two_qubit(params), alpha);
  r.family = "canonical";
  return r;
}

GapReport gap_arbitrary(const DensityMatrix& rho, double alpha, const BobMeasurement& bm) {
  if (rho.dim() != 4) throw std::invalid_argument("gap_arbitrary: state must be two qubits");
  Vector phi = bob_ket(bm, 0);
  double p_id = bob_outcome_prob(after_op_and_map(rho, AliceOp::Identity, alpha, {}), phi, 2, 2);
  double p_fl = bob_outcome_prob(after_op_and_map(rho, AliceOp::Flip, alpha, {}), phi, 2, 2);
  double closed = arbitrary_gap_formula(qubit_readback(rho), bm, alpha);
  return make_report("arbitrary-measurement", alpha, p_id - p_fl, closed);
}

DensityMatrix bob_state_after(const DensityMatrix& rho, AliceOp op, double alpha,
                              std::optional<double> t) {
  int da = side_dim(rho, "bob_state_after");
  DensityMatrix after = after_op_and_map(rho, op, alpha, t);
  return partial_trace(after, da, da, Subsystem::B);
}

GapReport distinguishability(const DensityMatrix& rho, double alpha) {
  if (rho.dim() != 4) throw std::invalid_argument("distinguishability: state must be two qubits");
  double brute = trace_distance(bob_state_after(rho, AliceOp::Identity, alpha),
                                bob_state_after(rho, AliceOp::Flip, alpha));
  double closed = distinguishability_formula(qubit_readback(rho), alpha);
  GapReport r = make_report("two-qubit", alpha, brute, closed);
  return r;
}

double perturbation_distance(const DensityMatrix& rho, double alpha, double t, Scope scope) {
  int da = side_dim(rho, "perturbation_distance");
  PTHamiltonian h = da == 2 ? qubit_hamiltonian(1.0, alpha) : qutrit_hamiltonian(alpha);
  Matrix v = kron(evolution_operator(h, t), identity(da));
  DensityMatrix after = evolve_state(rho, v);
  if (scope == Scope::Full) return trace_distance(rho, after);
  return trace_distance(partial_trace(rho, da, da, Subsystem::B),
                        partial_trace(after, da, da, Subsystem::B));
}

double perturbation_distance(const DensityMatrix& rho, double alpha, Scope scope) {
  int da = side_dim(rho, "perturbation_distance");
  Matrix v = kron(side_map(da, alpha, {}), identity(da));
  DensityMatrix after = evolve_state(rho, v);
  if (scope == Scope::Full) return trace_distance(rho, after);
  return trace_distance(partial_trace(rho, da, da, Subsystem::B),
                        partial_trace(after, da, da, Subsystem::B));
}

GapReport qutrit_signaling_check(const QutritParams& params, double alpha, double t) {
  DensityMatrix rho = two_qutrit(params);
  double brute = perturbation_distance(rho, alpha, t, Scope::BobReduced);
  bool vanishes = params.m(1) == 0.0 && params.c(1) == 0.0 &&
                  params.m(2) == 0.0 && params.c(2) == 0.0;
  std::optional<double> closed;
  if (vanishes) closed = 0.0;
  GapReport r = make_report("two-qutrit", alpha, brute, closed);
  return r;
}

double werner_gap_formula(double p, double alpha) {
  return 4.0 * p * std::sin(alpha) / minus_3_cos2(alpha);
}

double non_max_gap_formula(double beta, double gamma, double alpha) {
  double n2 = beta * beta + gamma * gamma;
  return 8.0 * beta * gamma * std::sin(alpha) / (n2 * minus_3_cos2(alpha));
}

double canonical_gap_formula(double m_y, double m_prime_y, double c_yy, double alpha) {
  double s = std::sin(alpha);
  double k = minus_3_cos2(alpha);
  double num = 2.0 * (c_yy - m_y * m_prime_y) * k * s;
  double den = (k + 4.0 * m_y * s) * (1.0 + 2.0 * m_y * s + s * s);
  return num / den;
}

double arbitrary_gap_formula(const CanonicalParams& params, const BobMeasurement& bm,
                             double alpha) {
  double s = std::sin(alpha), z = bm.z, u = bm.u;
  double m_y = params.m(1);
  double num = -2.0 * (7.0 * std::sin(alpha) - std::sin(3.0 * alpha)) *
               (m_y * params.m_prime(0) * std::cos(u) * std::sin(z) +
                std::sin(u) * std::sin(z) * (-params.c(1) + m_y * params.m_prime(1)) +
                m_y * params.m_prime(2) * std::cos(z));
  double k = minus_3_cos2(alpha);
  double den = k * k - 16.0 * m_y * m_y * s * s;
  return num / den;
}

double werner_perturbation_formula(double p, double alpha) {
  double s = std::sin(alpha);
  return p * s / (1.0 + s * s);
}

double distinguishability_formula(const CanonicalParams& params, double alpha) {
  double s = std::sin(alpha);
  double m_y = params.m(1), c_yy = params.c(1);
  double mpx = params.m_prime(0), mpy = params.m_prime(1), mpz = params.m_prime(2);
  double rad = c_yy * c_yy + mpx * mpx * m_y * m_y - 2.0 * c_yy * m_y * mpy +
               m_y * m_y * mpy * mpy + m_y * m_y * mpz * mpz;
  double den = (-1.0 + 2.0 * m_y * s - s * s) * (1.0 + 2.0 * m_y * s + s * s);
  return std::abs(std::sqrt(rad) / den) * std::abs(s + s * s * s);
}

Matrix bob_after_werner_formula(double p, double alpha) {
  double s = std::sin(alpha);
  Complex off(0, p * s / (1.0 + s * s));
  Matrix m(2, 2);
  m << 0.5, off, -off, 0.5;
  return m;
}

Matrix bob_after_canonical_formula(const CanonicalParams& params, double alpha) {
  double s = std::sin(alpha);
  double s2 = s * s;
  double n = 1.0 + 2.0 * params.m(1) * s + s2;
  double r_plus = 0.5 * (1.0 + (1.0 + s2) * params.m_prime(2) / n);
  double r_minus = 0.5 * (1.0 - (1.0 + s2) * params.m_prime(2) / n);
  Complex upper((1.0 + s2) * params.m_prime(0) / (2.0 * n),
                -(2.0 * params.c(1) * s + (1.0 + s2) * params.m_prime(1)) / (2.0 * n));
  Matrix m(2, 2);
  m << r_plus, upper, std::conj(upper), r_minus;
  return m;
}

}  // namespace ptsim
