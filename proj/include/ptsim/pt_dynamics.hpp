#pragma once

#include <optional>
#include <vector>

#include "ptsim/quantum_core.hpp"

namespace ptsim {

// Non-Hermitian Hamiltonian commuting with the PT operation (parity = exchange,
// time reversal = complex conjugation). Only dims 2 and 3 are constructed.
struct PTHamiltonian {
  int dim;
  double s;      // overall energy scale
  double alpha;  // non-Hermiticity parameter
  Matrix matrix;
};

PTHamiltonian qubit_hamiltonian(double s, double alpha);
PTHamiltonian qutrit_hamiltonian(double alpha);

// ||P conj(H) P - H||_max; zero for PT-symmetric H.
double pt_commutation_residual(const PTHamiltonian& h);

enum class Phase { Unbroken, ExceptionalPoint, Broken };

struct PhaseLabel {
  Phase label;                    // decided by the spectrum; authoritative
  Phase alpha_convention;         // label implied by alpha alone (mod pi vs pi/2)
  std::vector<Complex> spectrum;
  double defect;                  // eigenvector-matrix condition number
};

// Unbroken: real spectrum, diagonalizable. ExceptionalPoint: coalescing
// eigenvalues with a defective eigenbasis. Broken: complex conjugate pairs.
PhaseLabel classify_phase(const PTHamiltonian& h);

struct EvolutionTime {
  double t;        // pi / deltaE
  double t_prime;  // (deltaE / 2) * t
  double delta_e;  // spread of the real spectrum
};

// Domain error when deltaE vanishes (exceptional point).
EvolutionTime specific_time(const PTHamiltonian& h);

// expm(-i h t). Valid in every phase, including the defective point.
Matrix evolution_operator(const PTHamiltonian& h, double t);

// Qubit evolution at the specific time, up to a positive scale:
// sin(alpha) sigma_z - i sigma_x.
Matrix specific_time_operator(double alpha);

// Closed form of the qubit evolution operator for |cos alpha| > 0:
// (1/cos a) [[cos(t'-a), -i sin t'], [-i sin t', cos(t'+a)]], t' = s t cos a.
Matrix qubit_closed_form(double s, double alpha, double t);

// v rho v^dag / Tr[v rho v^dag]. Invariant under rescaling of v. Domain error
// when the trace falls at or below tol.annihilation.
DensityMatrix evolve_state(const DensityMatrix& rho, const Matrix& v);

}  // namespace ptsim
