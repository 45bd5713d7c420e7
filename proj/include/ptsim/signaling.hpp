#pragma once

#include <array>
#include <optional>
#include <string>

#include "ptsim/pt_dynamics.hpp"
#include "ptsim/quantum_core.hpp"
#include "ptsim/states.hpp"

namespace ptsim {

enum class AliceOp { Identity, Flip };  // Flip: sigma_x on a qubit, exchange on a qutrit

Matrix alice_op_matrix(AliceOp op, int dim);

// Projective qubit bases used on the two wings. Outcome 0 is |phi>, outcome 1
// its orthogonal completion.
struct AliceMeasurement {
  double y = 0.0;
  double v = 0.0;
};

struct BobMeasurement {
  double z = 0.0;
  double u = 0.0;
};

Vector alice_ket(const AliceMeasurement& m, int outcome);
Vector bob_ket(const BobMeasurement& m, int outcome);
inline BobMeasurement sigma_y_measurement() { return {M_PI / 2, M_PI / 2}; }

// p[a][b] = P(Alice outcome a, Bob outcome b) after Alice applies op and the
// normalized non-unitary map acts on her side. Entries are non-negative and sum
// to 1. By default the specific-time map is used; passing t switches to
// expm evolution for that duration.
using JointDistribution = std::array<std::array<double, 2>, 2>;
JointDistribution joint_distribution(const DensityMatrix& rho, AliceOp op, double alpha,
                                     const AliceMeasurement& am, const BobMeasurement& bm,
                                     std::optional<double> t = std::nullopt);

// Brute-force result next to the matching closed form (when one applies).
struct GapReport {
  std::string family;
  double alpha = 0.0;
  double brute = 0.0;
  std::optional<double> closed_form;
  std::optional<double> abs_err;
};

// Gap = P(Bob sees +y | Alice op Identity) - P(Bob sees +y | Alice op Flip).
GapReport gap_sigma_y(const DensityMatrix& rho, double alpha);
GapReport gap_canonical(const CanonicalParams& params, double alpha);
GapReport gap_arbitrary(const DensityMatrix& rho, double alpha, const BobMeasurement& bm);

// Bob's reduced state after Alice's op and the map on her side.
DensityMatrix bob_state_after(const DensityMatrix& rho, AliceOp op, double alpha,
                              std::optional<double> t = std::nullopt);

// Trace distance between Bob's two conditional states (op Identity vs Flip).
GapReport distinguishability(const DensityMatrix& rho, double alpha);

enum class Scope { Full, BobReduced };

// Trace distance between the state before and after evolution for duration t
// on Alice's side (no encoding op). Dimension 4 or 9 decides the Hamiltonian.
double perturbation_distance(const DensityMatrix& rho, double alpha, double t, Scope scope);
// Specific-time variant: the scaled map for qubits, t* = pi/deltaE for qutrits.
double perturbation_distance(const DensityMatrix& rho, double alpha, Scope scope);

// Bob perturbation of a two-qutrit state after evolution for duration t.
// Zero whenever m_y, c_yy, m_z, c_zz all vanish.
GapReport qutrit_signaling_check(const QutritParams& params, double alpha, double t);

// Closed forms for the specific-time map.
double werner_gap_formula(double p, double alpha);
double non_max_gap_formula(double beta, double gamma, double alpha);
double canonical_gap_formula(double m_y, double m_prime_y, double c_yy, double alpha);
double arbitrary_gap_formula(const CanonicalParams& params, const BobMeasurement& bm, double alpha);
double werner_perturbation_formula(double p, double alpha);  // p sin a / (1 + sin^2 a)
// Documented closed form for the conditional-state trace distance; disagrees
// with the definitional value by a factor of 2 (see distinguishability report).
double distinguishability_formula(const CanonicalParams& params, double alpha);

// Appendix matrices for Bob's state after the map with op Identity.
Matrix bob_after_werner_formula(double p, double alpha);
Matrix bob_after_canonical_formula(const CanonicalParams& params, double alpha);

}  // namespace ptsim
