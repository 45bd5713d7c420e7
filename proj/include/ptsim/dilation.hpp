#pragma once

#include "ptsim/pt_dynamics.hpp"
#include "ptsim/quantum_core.hpp"

namespace ptsim {

// Unitary dilation of a contraction built from v:
//   A = eta v with eta = 1/sigma_max(v),
//   W = [[A, sqrt(I - A A^dag)], [sqrt(I - A^dag A), -A^dag]].
// W acts on ancilla (x) system; ancilla outcome 0 realizes A.
struct DilationResult {
  double eta;
  Matrix contraction;
  Matrix unitary;
};

DilationResult dilate(const Matrix& v);

struct Postselected {
  double success_prob;  // eta^2 Tr[(v^dag v (x) I) rho]; snapped to 1 when within 1e-12
  DensityMatrix state;  // joint A(x)B state conditioned on ancilla outcome 0
};

// Prepares ancilla |0>, applies W (x) I_B, projects the ancilla on |0>.
// The success branch equals evolve_state(rho, v (x) I_B).
Postselected apply_postselected(const DensityMatrix& rho_ab, const Matrix& v_on_a);

struct SampledRound {
  bool success;
  DensityMatrix state;  // the branch actually sampled
};

// One dilation round driven by a uniform draw in [0, 1): success iff
// rand < success_prob.
SampledRound sample_round(const DensityMatrix& rho_ab, const Matrix& v_on_a, double rand);

// Success probability on the maximally entangled two-qubit state with the
// specific-time map: (1 + sin^2 a) / (1 + sin a)^2 for sin a >= 0.
double entangled_success_formula(double alpha);

}  // namespace ptsim
