#include "ptsim/verify.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <utility>

#include "ptsim/dilation.hpp"
#include "ptsim/pt_dynamics.hpp"
#include "ptsim/quantum_core.hpp"
#include "ptsim/rng.hpp"
#include "ptsim/signaling.hpp"
#include "ptsim/states.hpp"

namespace ptsim {

namespace {

double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.next_double();
}

double min_eig(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver((m + dagger(m)) / 2.0);
  return solver.eigenvalues().minCoeff();
}

// Built directly from the operator basis, independently of the states module.
Matrix canonical_matrix(const CanonicalParams& p) {
  Matrix sig[3] = {sigma_x(), sigma_y(), sigma_z()};
  Matrix i2 = identity(2);
  Matrix rho = kron(i2, i2);
  for (int k = 0; k < 3; ++k)
    rho += p.m(k) * kron(sig[k], i2) + p.m_prime(k) * kron(i2, sig[k]) +
           p.c(k) * kron(sig[k], sig[k]);
  return rho / 4.0;
}

Matrix qutrit_matrix(const QutritParams& p) {
  Matrix spin[3] = {spin1_x(), spin1_y(), spin1_z()};
  Matrix i3 = identity(3);
  Matrix rho = kron(i3, i3);
  for (int k = 0; k < 3; ++k)
    rho += p.m(k) * kron(spin[k], i3) + p.m_prime(k) * kron(i3, spin[k]) +
           p.c(k) * kron(spin[k], spin[k]);
  return rho / 9.0;
}

template <typename Params, typename Build>
void shrink_to_psd(Params& p, Build build) {
  while (min_eig(build(p)) < 1e-8) {
    p.m *= 0.8;
    p.m_prime *= 0.8;
    p.c *= 0.8;
  }
}

CanonicalParams random_canonical(Rng& rng, bool zero_y) {
  CanonicalParams p;
  for (int k = 0; k < 3; ++k) {
    p.m(k) = uniform(rng, -1, 1);
    p.m_prime(k) = uniform(rng, -1, 1);
    p.c(k) = uniform(rng, -1, 1);
  }
  if (zero_y) {
    p.m(1) = 0;
    p.c(1) = 0;
  }
  shrink_to_psd(p, canonical_matrix);
  return p;
}

QutritParams random_qutrit_quiet(Rng& rng) {
  QutritParams p;
  for (int k = 0; k < 3; ++k) {
    p.m(k) = uniform(rng, -1, 1);
    p.m_prime(k) = uniform(rng, -1, 1);
    p.c(k) = uniform(rng, -1, 1);
  }
  p.m(1) = p.c(1) = p.m(2) = p.c(2) = 0;
  shrink_to_psd(p, qutrit_matrix);
  return p;
}

BobMeasurement random_bob_measurement(Rng& rng) {
  return {uniform(rng, 0, M_PI), uniform(rng, 0, 2 * M_PI)};
}

FormulaCheck gated(std::string name, int grid, double err, double tol) {
  FormulaCheck c;
  c.formula = std::move(name);
  c.grid_size = grid;
  c.max_abs_error = err;
  c.tolerance = tol;
  c.passed = err <= tol;
  return c;
}

FormulaCheck flagged(std::string name, int grid, double spread, double ratio) {
  FormulaCheck c;
  c.formula = std::move(name);
  c.grid_size = grid;
  c.max_abs_error = spread;
  c.tolerance = 1e-6;
  c.known_discrepancy = true;
  c.measured_ratio = ratio;
  c.passed = true;
  return c;
}

DensityMatrix phi_plus_state() {
  return DensityMatrix::from_pure(PureState(phi_plus_ket(2)));
}

}  // namespace

VerificationReport run_verification(std::uint64_t seed) {
  VerificationReport report;
  Rng rng(substream_seed(seed, 7, 0));

  {  // entangled-fraction gap against its closed form
    double err = 0;
    int grid = 0;
    for (int ip = 0; ip <= 10; ++ip)
      for (int ia = 1; ia <= 14; ++ia) {
        double p = 0.1 * ip, alpha = 0.1 * ia;
        GapReport r = gap_sigma_y(werner(p), alpha);
        err = std::max(err, std::abs(r.brute - werner_gap_formula(p, alpha)));
        ++grid;
      }
    report.checks.push_back(gated("werner-gap", grid, err, 1e-9));
  }

  {  // partially entangled pure family
    double err = 0;
    int grid = 0;
    for (int ib = 0; ib <= 10; ++ib)
      for (int ig = 0; ig <= 10; ++ig) {
        if (ib == 0 && ig == 0) continue;
        double beta = 0.1 * ib, gamma = 0.1 * ig;
        for (int ia = 1; ia <= 14; ++ia) {
          double alpha = 0.1 * ia;
          GapReport r = gap_sigma_y(non_max_entangled(beta, gamma), alpha);
          err = std::max(err, std::abs(r.brute - non_max_gap_formula(beta, gamma, alpha)));
          ++grid;
        }
      }
    report.checks.push_back(gated("non-max-gap", grid, err, 1e-9));
  }

  {  // general mixed states, fixed sigma_y readout
    double err = 0;
    const int n = 200;
    for (int i = 0; i < n; ++i) {
      CanonicalParams p = random_canonical(rng, false);
      double alpha = uniform(rng, 0.05, 1.5);
      GapReport r = gap_canonical(p, alpha);
      err = std::max(err, std::abs(r.brute - canonical_gap_formula(p.m(1), p.m_prime(1),
                                                                   p.c(1), alpha)));
    }
    report.checks.push_back(gated("canonical-gap", n, err, 1e-9));
  }

  {  // general mixed states, arbitrary projective readout
    double err = 0;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
      CanonicalParams p = random_canonical(rng, false);
      BobMeasurement bm = random_bob_measurement(rng);
      double alpha = uniform(rng, 0.05, 1.5);
      GapReport r = gap_arbitrary(canonical_two_qubit(p), alpha, bm);
      err = std::max(err, std::abs(r.brute - arbitrary_gap_formula(p, bm, alpha)));
    }
    report.checks.push_back(gated("arbitrary-measurement-gap", n, err, 1e-8));
  }

  {  // degenerate-evolution limit: maximally entangled input signals perfectly
    DensityMatrix phi = phi_plus_state();
    double alpha = M_PI / 2;
    GapReport r = gap_sigma_y(phi, alpha);
    double err = std::abs(std::abs(r.brute) - 1.0);
    Matrix want_id = ket_minus_y() * ket_minus_y().adjoint();
    Matrix want_flip = ket_plus_y() * ket_plus_y().adjoint();
    err = std::max(err, max_abs(bob_state_after(phi, AliceOp::Identity, alpha).matrix() - want_id));
    err = std::max(err, max_abs(bob_state_after(phi, AliceOp::Flip, alpha).matrix() - want_flip));
    report.checks.push_back(gated("ep-perfect-signaling", 1, err, 1e-9));
  }

  {  // states with no y-correlations carry no signal
    double err = 0;
    const int n = 300;
    for (int i = 0; i < n; ++i) {
      CanonicalParams p = random_canonical(rng, true);
      DensityMatrix rho = canonical_two_qubit(p);
      double alpha = uniform(rng, 0.05, 1.5);
      err = std::max(err, std::abs(gap_sigma_y(rho, alpha).brute));
      err = std::max(err, std::abs(gap_arbitrary(rho, alpha, random_bob_measurement(rng)).brute));
      err = std::max(err, distinguishability(rho, alpha).brute);
    }
    report.checks.push_back(gated("real-family-no-signaling", n, err, 1e-10));
  }

  {  // conditional receiver state, isotropic family
    double err = 0;
    int grid = 0;
    for (int ip = 0; ip <= 10; ++ip)
      for (int ia = 1; ia <= 14; ++ia) {
        double p = 0.1 * ip, alpha = 0.1 * ia;
        Matrix got = bob_state_after(werner(p), AliceOp::Identity, alpha).matrix();
        err = std::max(err, max_abs(got - bob_after_werner_formula(p, alpha)));
        ++grid;
      }
    report.checks.push_back(gated("werner-bob-matrix", grid, err, 1e-10));
  }

  {  // conditional receiver state, general family
    double err = 0;
    const int n = 300;
    for (int i = 0; i < n; ++i) {
      CanonicalParams p = random_canonical(rng, false);
      double alpha = uniform(rng, 0.05, 1.5);
      Matrix got = bob_state_after(canonical_two_qubit(p), AliceOp::Identity, alpha).matrix();
      err = std::max(err, max_abs(got - bob_after_canonical_formula(p, alpha)));
    }
    report.checks.push_back(gated("canonical-bob-matrix", n, err, 1e-10));
  }

  {  // operation-free disturbance of the receiver marginal
    double err = 0;
    int grid = 0;
    for (int ip = 0; ip <= 10; ++ip)
      for (int ia = 1; ia <= 14; ++ia) {
        double p = 0.1 * ip, alpha = 0.1 * ia;
        double brute = perturbation_distance(werner(p), alpha, Scope::BobReduced);
        err = std::max(err, std::abs(brute - werner_perturbation_formula(p, alpha)));
        ++grid;
      }
    report.checks.push_back(gated("werner-perturbation", grid, err, 1e-10));
  }

  {  // distinguishability closed form disagrees by a constant factor; record it
    double spread = 0;
    double sum = 0;
    int grid = 0;
    for (int ip = 1; ip <= 10; ++ip)
      for (int ia = 1; ia <= 14; ++ia) {
        double p = 0.1 * ip, alpha = 0.1 * ia;
        GapReport r = distinguishability(werner(p), alpha);
        double ratio = r.brute / *r.closed_form;
        spread = std::max(spread, std::abs(ratio - 2.0));
        sum += ratio;
        ++grid;
      }
    for (int i = 0; i < 100; ++i) {
      CanonicalParams p = random_canonical(rng, false);
      p.m(1) = 0;
      shrink_to_psd(p, canonical_matrix);
      double alpha = uniform(rng, 0.05, 1.5);
      GapReport r = distinguishability(canonical_two_qubit(p), alpha);
      if (*r.closed_form < 1e-12) continue;
      double ratio = r.brute / *r.closed_form;
      spread = std::max(spread, std::abs(ratio - 2.0));
      sum += ratio;
      ++grid;
    }
    report.checks.push_back(flagged("trace-distance-ratio", grid, spread, sum / grid));
  }

  {  // receiver marginal before evolution: off-diagonal sign/scale convention
    double spread = 0;
    double sum = 0;
    int grid = 0;
    for (int ib = 1; ib <= 5; ++ib)
      for (int ig = 1; ig <= 5; ++ig) {
        double beta = 0.2 * ib, gamma = 0.2 * ig;
        if (beta == gamma) continue;
        DensityMatrix rho = non_max_entangled(beta, gamma);
        Matrix bob = partial_trace(rho.matrix(), 2, 2, Subsystem::B);
        double brute = bob(0, 1).real();
        double n2 = beta * beta + gamma * gamma;
        double alternate = (gamma * gamma - beta * beta) / n2;
        double ratio = alternate / brute;
        spread = std::max(spread, std::abs(ratio + 2.0));
        sum += ratio;
        ++grid;
      }
    report.checks.push_back(flagged("preparation-off-diagonal-ratio", grid, spread, sum / grid));
  }

  {  // two-qutrit states with quiet y and z sectors never disturb the receiver
    double err = 0;
    const int n = 100;
    for (int i = 0; i < n; ++i) {
      QutritParams p = random_qutrit_quiet(rng);
      double alpha = uniform(rng, 0.05, 1.5);
      double t = uniform(rng, 0.2, 5.0);
      err = std::max(err, qutrit_signaling_check(p, alpha, t).brute);
    }
    report.checks.push_back(gated("qutrit-no-signaling", n, err, 1e-10));
  }

  {  // heralding probability on the maximally entangled state
    double err = 0;
    int grid = 0;
    for (int ia = 1; ia <= 15; ++ia) {
      double alpha = 0.1 * ia;
      Postselected post = apply_postselected(phi_plus_state(), specific_time_operator(alpha));
      err = std::max(err, std::abs(post.success_prob - entangled_success_formula(alpha)));
      ++grid;
    }
    Postselected at_ep = apply_postselected(phi_plus_state(), specific_time_operator(M_PI / 2));
    err = std::max(err, std::abs(at_ep.success_prob - 0.5));
    ++grid;
    report.checks.push_back(gated("entangled-success-probability", grid, err, 1e-9));
  }

  report.pass = true;
  for (const FormulaCheck& c : report.checks)
    if (!c.known_discrepancy && !c.passed) report.pass = false;
  return report;
}

DilationCheckReport run_dilation_check(int samples, std::uint64_t seed) {
  DilationCheckReport report;
  report.samples = samples;
  Rng rng(substream_seed(seed, 11, 0));

  for (int i = 0; i < samples; ++i) {
    int n = i % 2 == 0 ? 2 : 3;
    Matrix v(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        v(r, c) = Complex(uniform(rng, -1, 1), uniform(rng, -1, 1));
    DilationResult d = dilate(v);
    Matrix w = d.unitary;
    double defect = max_abs(Matrix(dagger(w) * w - identity(2 * n)));
    report.max_unitarity_defect = std::max(report.max_unitarity_defect, defect);
  }

  // Post-selected branch must reproduce the direct normalized evolution.
  for (int i = 0; i < 200; ++i) {
    CanonicalParams p = random_canonical(rng, false);
    DensityMatrix rho = canonical_two_qubit(p);
    double alpha = uniform(rng, 0.05, 1.55);
    Matrix v = specific_time_operator(alpha);
    Postselected post = apply_postselected(rho, v);
    DensityMatrix direct = evolve_state(rho, kron(v, identity(2)));
    double dev = max_abs(post.state.matrix() - direct.matrix());
    report.max_channel_deviation = std::max(report.max_channel_deviation, dev);
  }

  DensityMatrix phi = DensityMatrix::from_pure(PureState(phi_plus_ket(2)));
  for (int ia = 1; ia <= 15; ++ia) {
    double alpha = 0.1 * ia;
    Postselected post = apply_postselected(phi, specific_time_operator(alpha));
    double err = std::abs(post.success_prob - entangled_success_formula(alpha));
    report.max_success_formula_error = std::max(report.max_success_formula_error, err);
  }

  // Empirical heralding rate at the degenerate point: analytic value 1/2.
  const int trials = 100000;
  report.empirical_trials = trials;
  Matrix v_ep = specific_time_operator(M_PI / 2);
  int hits = 0;
  Rng mc(substream_seed(seed, 12, 0));
  for (int i = 0; i < trials; ++i)
    if (sample_round(phi, v_ep, mc.next_double()).success) ++hits;
  double p_hat = static_cast<double>(hits) / trials;
  double sigma = std::sqrt(0.5 * 0.5 / trials);
  report.empirical_deviation_sigma = std::abs(p_hat - 0.5) / sigma;

  report.pass = report.max_unitarity_defect <= 1e-10 &&
                report.max_channel_deviation <= 1e-10 &&
                report.max_success_formula_error <= 1e-9 &&
                report.empirical_deviation_sigma <= 3.0;
  return report;
}

}  // namespace ptsim
