#pragma once

#include "ptsim/quantum_core.hpp"

namespace ptsim {

// (beta |++> + gamma |-->) / sqrt(beta^2 + gamma^2) in the sigma_x eigenbasis.
// beta = gamma recovers the maximally entangled state.
DensityMatrix non_max_entangled(double beta, double gamma);

// p |phi+><phi+| + (1 - p) I/4, valid for p in [-1/3, 1].
DensityMatrix werner(double p);

// Bloch-diagonal two-qubit parametrization: local vectors m (Alice), m' (Bob)
// and diagonal correlators c. Off-diagonal correlators are intentionally absent.
struct CanonicalParams {
  Eigen::Vector3d m = Eigen::Vector3d::Zero();
  Eigen::Vector3d m_prime = Eigen::Vector3d::Zero();
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
};

// (1/4)(I + sum m_i s_i(x)I + m'_i I(x)s_i + c_i s_i(x)s_i). Rejects non-PSD
// parameter sets, reporting the offending eigenvalue.
DensityMatrix canonical_two_qubit(const CanonicalParams& params);
CanonicalParams qubit_readback(const DensityMatrix& rho);

// Same shape over spin-1 operators, normalization 1/9. Because Tr(S_i^2) = 2,
// the readback scales differ from the qubit case; see qutrit_readback.
struct QutritParams {
  Eigen::Vector3d m = Eigen::Vector3d::Zero();
  Eigen::Vector3d m_prime = Eigen::Vector3d::Zero();
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
};

DensityMatrix two_qutrit(const QutritParams& params);
QutritParams qutrit_readback(const DensityMatrix& rho);

// p |phi+_d><phi+_d| + (1 - p) I/d^2 for d in {2, 3}; p in [-1/(d^2-1), 1].
DensityMatrix werner_like(int d, double p);

}  // namespace ptsim
