// End-to-end acceptance gate. Each criterion prints exactly one line and the
// process exits with the number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ptsim/dilation.hpp"
#include "ptsim/pt_dynamics.hpp"
#include "ptsim/quantum_core.hpp"
#include "ptsim/randamp.hpp"
#include "ptsim/rng.hpp"
#include "ptsim/signaling.hpp"
#include "ptsim/states.hpp"
#include "ptsim/verify.hpp"

using namespace ptsim;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kSeed = 20240817;

bool report(int idx, bool ok, const char* fmt, ...) {
  char detail[256];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(detail, sizeof detail, fmt, ap);
  va_end(ap);
  std::printf("[%s] %2d. %s\n", ok ? "PASS" : "FAIL", idx, detail);
  return ok;
}

double gauss(Rng& rng) {
  double u1 = 1.0 - rng.next_double();
  double u2 = rng.next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

Matrix random_complex(Rng& rng, int d) {
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  return m;
}

DensityMatrix random_density(Rng& rng, int d) {
  Matrix g = random_complex(rng, d);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  return DensityMatrix(rho);
}

double min_eig(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  return es.eigenvalues().minCoeff();
}

// Random Bloch-diagonal parameter set, shrunk toward the maximally mixed
// state until comfortably positive.
CanonicalParams random_canonical(Rng& rng, bool zero_y) {
  CanonicalParams p;
  for (int i = 0; i < 3; ++i) {
    p.m(i) = 2 * rng.next_double() - 1;
    p.m_prime(i) = 2 * rng.next_double() - 1;
    p.c(i) = 2 * rng.next_double() - 1;
  }
  if (zero_y) {
    p.m(1) = 0;
    p.c(1) = 0;
  }
  auto build = [](const CanonicalParams& q) {
    Matrix rho = 0.25 * identity(4);
    Matrix sig[3] = {sigma_x(), sigma_y(), sigma_z()};
    for (int i = 0; i < 3; ++i)
      rho += 0.25 * (q.m(i) * kron(sig[i], identity(2)) +
                     q.m_prime(i) * kron(identity(2), sig[i]) +
                     q.c(i) * kron(sig[i], sig[i]));
    return rho;
  };
  while (min_eig(build(p)) < 1e-8) {
    p.m *= 0.8;
    p.m_prime *= 0.8;
    p.c *= 0.8;
  }
  return p;
}

std::vector<double> alpha_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 14; ++i) g.push_back(0.1 * i);
  return g;
}

bool criterion_werner_gap() {
  double worst = 0;
  for (int ip = 0; ip <= 10; ++ip)
    for (double alpha : alpha_grid()) {
      GapReport r = gap_sigma_y(werner(0.1 * ip), alpha);
      worst = std::max(worst, *r.abs_err);
    }
  return report(1, worst <= 1e-9,
                "isotropic-family gap vs closed form: max err %.2e (tol 1e-9)", worst);
}

bool criterion_non_max_gap() {
  double worst = 0;
  for (int ib = 0; ib <= 10; ++ib)
    for (int ig = 0; ig <= 10; ++ig) {
      if (ib == 0 && ig == 0) continue;
      double beta = 0.1 * ib, gamma = 0.1 * ig;
      DensityMatrix rho = non_max_entangled(beta, gamma);
      for (double alpha : alpha_grid()) {
        double brute = gap_sigma_y(rho, alpha).brute;
        worst = std::max(worst, std::abs(brute - non_max_gap_formula(beta, gamma, alpha)));
      }
    }
  return report(2, worst <= 1e-9,
                "partially entangled gap vs closed form: max err %.2e (tol 1e-9)", worst);
}

bool criterion_arbitrary_gap() {
  Rng rng(substream_seed(kSeed, 3, 0));
  std::vector<double> grid = alpha_grid();

  // One-time sign calibration of the closed form against the isotropic family.
  double cal_brute = gap_sigma_y(werner(0.7), 0.8).brute;
  double cal_closed = arbitrary_gap_formula(qubit_readback(werner(0.7)), sigma_y_measurement(), 0.8);
  double sign = (cal_brute * cal_closed >= 0) ? 1.0 : -1.0;

  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    CanonicalParams p = random_canonical(rng, false);
    DensityMatrix rho = canonical_two_qubit(p);
    AliceMeasurement am{kPi * rng.next_double(), 2 * kPi * rng.next_double()};
    BobMeasurement bm{kPi * rng.next_double(), 2 * kPi * rng.next_double()};
    double alpha = grid[i % grid.size()];

    JointDistribution with_id = joint_distribution(rho, AliceOp::Identity, alpha, am, bm);
    JointDistribution with_flip = joint_distribution(rho, AliceOp::Flip, alpha, am, bm);
    double brute = (with_id[0][0] + with_id[1][0]) - (with_flip[0][0] + with_flip[1][0]);
    double closed = sign * arbitrary_gap_formula(p, bm, alpha);
    worst = std::max(worst, std::abs(brute - closed));
  }
  return report(3, worst <= 1e-8,
                "arbitrary-readout gap vs closed form, 10^3 random states: max err %.2e (tol 1e-8)",
                worst);
}

bool criterion_perfect_signaling() {
  DensityMatrix phi = DensityMatrix::from_pure(PureState(phi_plus_ket(2)));
  double gap = gap_sigma_y(phi, kPi / 2).brute;
  Matrix bob_id = bob_state_after(phi, AliceOp::Identity, kPi / 2).matrix();
  Matrix bob_flip = bob_state_after(phi, AliceOp::Flip, kPi / 2).matrix();
  double dev = std::max(
      max_abs(bob_id - ket_minus_y() * ket_minus_y().adjoint()),
      max_abs(bob_flip - ket_plus_y() * ket_plus_y().adjoint()));
  bool ok = std::abs(std::abs(gap) - 1.0) <= 1e-9 && dev <= 1e-10;
  return report(4, ok,
                "perfect signaling at the degeneracy: |gap|-1 = %.2e, state dev %.2e",
                std::abs(gap) - 1.0, dev);
}

bool criterion_quiet_states() {
  Rng rng(substream_seed(kSeed, 5, 0));
  std::vector<double> grid = alpha_grid();
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    CanonicalParams p = random_canonical(rng, true);
    DensityMatrix rho = canonical_two_qubit(p);
    double alpha = grid[i % grid.size()];
    BobMeasurement bm{kPi * rng.next_double(), 2 * kPi * rng.next_double()};
    worst = std::max(worst, std::abs(gap_arbitrary(rho, alpha, bm).brute));
    worst = std::max(worst, distinguishability(rho, alpha).brute);
  }
  return report(5, worst <= 1e-10,
                "y-quiet states stay silent, 10^3 random states: max leak %.2e (tol 1e-10)",
                worst);
}

bool criterion_dilation() {
  DilationCheckReport r = run_dilation_check(1000, kSeed);
  bool ok = r.pass && r.max_unitarity_defect <= 1e-10 && r.max_channel_deviation <= 1e-10 &&
            r.max_success_formula_error <= 1e-9 && std::abs(r.empirical_deviation_sigma) <= 3;
  return report(6, ok,
                "embedding: unitarity %.2e, channel %.2e, success formula %.2e, empirical %.2f sigma",
                r.max_unitarity_defect, r.max_channel_deviation, r.max_success_formula_error,
                r.empirical_deviation_sigma);
}

bool criterion_randamp() {
  auto start = std::chrono::steady_clock::now();
  DensityMatrix phi = DensityMatrix::from_pure(PureState(phi_plus_ket(2)));

  ProtocolConfig cfg{phi, kPi / 2, 100000, {SourceKind::IIDBiased, 0.2}, 42, std::nullopt};
  ProtocolStats stats = run_protocol(cfg).stats;
  double three_sigma = 3 * std::sqrt(100000 * 0.25);
  bool sifted_ok = std::abs(stats.sifted_length - 50000.0) <= three_sigma;
  bool agreement_ok = stats.agreement_rate.has_value() && *stats.agreement_rate == 1.0;

  ProtocolConfig control{phi, 0.0, 100000, {SourceKind::IIDBiased, 0.2}, 42, std::nullopt};
  ProtocolStats control_stats = run_protocol(control).stats;
  bool control_ok = control_stats.success_rate == 1.0 &&
                    std::abs(*control_stats.agreement_rate - 0.5) <= 3 * std::sqrt(0.25 / 100000);

  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool ok = sifted_ok && agreement_ok && control_ok && elapsed <= 10.0;
  return report(7, ok,
                "amplification run: sifted %d, agreement %s, control agreement %.4f, %.2f s",
                stats.sifted_length, agreement_ok ? "exact" : "broken",
                *control_stats.agreement_rate, elapsed);
}

bool criterion_receiver_matrices() {
  double worst_matrix = 0, worst_pert = 0;
  for (int ip = 0; ip <= 10; ++ip) {
    double p = 0.1 * ip;
    for (double alpha : alpha_grid()) {
      Matrix got = bob_state_after(werner(p), AliceOp::Identity, alpha).matrix();
      worst_matrix = std::max(worst_matrix, max_abs(got - bob_after_werner_formula(p, alpha)));
      double s = std::sin(alpha);
      double pert = perturbation_distance(werner(p), alpha, Scope::BobReduced);
      worst_pert = std::max(worst_pert, std::abs(pert - p * s / (1 + s * s)));
    }
  }

  // Peak at the degeneracy, vanishing only for the maximally mixed input.
  bool shape_ok = true;
  for (int ip = 0; ip <= 10; ++ip) {
    double p = 0.1 * ip;
    double peak = perturbation_distance(werner(p), kPi / 2, Scope::BobReduced);
    shape_ok = shape_ok && std::abs(peak - p / 2) <= 1e-12;
    for (double alpha : alpha_grid())
      shape_ok = shape_ok && perturbation_distance(werner(p), alpha, Scope::BobReduced) <= peak + 1e-12;
    if (ip > 0)
      shape_ok = shape_ok && perturbation_distance(werner(p), 0.7, Scope::BobReduced) > 1e-6;
  }
  bool zero_ok = true;
  for (double alpha : alpha_grid())
    zero_ok = zero_ok && perturbation_distance(werner(0.0), alpha, Scope::BobReduced) <= 1e-12;

  bool ok = worst_matrix <= 1e-10 && worst_pert <= 1e-10 && shape_ok && zero_ok;
  return report(8, ok,
                "conditional receiver matrices %.2e, disturbance law %.2e, peak/zero shape %s",
                worst_matrix, worst_pert, (shape_ok && zero_ok) ? "ok" : "broken");
}

bool criterion_discrepancy_ratios() {
  VerificationReport vr = run_verification(kSeed);
  const FormulaCheck* trace_ratio = nullptr;
  const FormulaCheck* prep_ratio = nullptr;
  for (const FormulaCheck& c : vr.checks) {
    if (c.formula == "trace-distance-ratio") trace_ratio = &c;
    if (c.formula == "preparation-off-diagonal-ratio") prep_ratio = &c;
  }
  bool ok = vr.pass && trace_ratio != nullptr && prep_ratio != nullptr &&
            trace_ratio->known_discrepancy && trace_ratio->measured_ratio.has_value() &&
            std::abs(*trace_ratio->measured_ratio - 2.0) <= 1e-6 &&
            prep_ratio->known_discrepancy && prep_ratio->measured_ratio.has_value() &&
            std::abs(*prep_ratio->measured_ratio + 2.0) <= 1e-6;
  return report(9, ok,
                "documented discrepancies pinned: trace-distance ratio %.9f, preparation ratio %.9f",
                trace_ratio && trace_ratio->measured_ratio ? *trace_ratio->measured_ratio : 0.0,
                prep_ratio && prep_ratio->measured_ratio ? *prep_ratio->measured_ratio : 0.0);
}

bool criterion_dimension_ordering() {
  double alpha = 0.45 * kPi;
  double t2 = specific_time(qubit_hamiltonian(1.0, alpha)).t;
  double t3 = specific_time(qutrit_hamiltonian(alpha)).t;

  bool ordering = true, monotone = true, vanish = true;
  double prev2 = -1, prev3 = -1;
  for (int ip = 0; ip <= 20; ++ip) {
    double p = 0.05 * ip;
    double d2 = perturbation_distance(werner_like(2, p), alpha, t2, Scope::BobReduced);
    double d3 = perturbation_distance(werner_like(3, p), alpha, t3, Scope::BobReduced);
    if (p >= 0.1 - 1e-12) ordering = ordering && d3 >= d2 - 1e-12;
    if (ip == 0) vanish = d2 <= 1e-10 && d3 <= 1e-10;
    monotone = monotone && d2 >= prev2 - 1e-12 && d3 >= prev3 - 1e-12;
    prev2 = d2;
    prev3 = d3;
  }
  bool ok = ordering && monotone && vanish;
  return report(10, ok, "dimension scan: d=3 dominates d=2 %s, vanishes at p=0 %s, monotone %s",
                ordering ? "yes" : "no", vanish ? "yes" : "no", monotone ? "yes" : "no");
}

int suite_expm_unitarity() {
  Rng rng(substream_seed(kSeed, 11, 0));
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    int d = (i % 2 == 0) ? 2 : 3;
    Matrix g = random_complex(rng, d);
    Matrix h = 0.5 * (g + g.adjoint());
    double t = 10 * rng.next_double();
    Matrix u = expm(Complex(0, -1) * h * t);
    if (max_abs(Matrix(u.adjoint() * u - identity(d))) > 1e-10) ++violations;
  }
  return violations;
}

int suite_partial_trace() {
  Rng rng(substream_seed(kSeed, 12, 0));
  int violations = 0;
  for (int i = 0; i < 10000; ++i) {
    DensityMatrix rho = random_density(rng, 4);
    for (Subsystem keep : {Subsystem::A, Subsystem::B}) {
      Matrix red = partial_trace(rho.matrix(), 2, 2, keep);
      if (std::abs(red.trace().real() - 1.0) > 1e-12) ++violations;
      if (min_eig(red) < -1e-12) ++violations;
    }
  }
  return violations;
}

int suite_trace_distance_measurements() {
  Rng rng(substream_seed(kSeed, 13, 0));
  int violations = 0;
  for (int pair = 0; pair < 50; ++pair) {
    DensityMatrix rho = random_density(rng, 2);
    DensityMatrix sig = random_density(rng, 2);
    double t = trace_distance(rho, sig);

    double best = 0;
    auto measurement_value = [&](const Vector& k) {
      double pr = ((k.adjoint() * rho.matrix() * k)(0).real());
      double ps = ((k.adjoint() * sig.matrix() * k)(0).real());
      return std::abs(pr - ps);  // half the l1 distance of a binary outcome pair
    };
    for (int m = 0; m < 1000; ++m) {
      double z = std::acos(2 * rng.next_double() - 1);
      double u = 2 * kPi * rng.next_double();
      Vector k(2);
      k << std::cos(z / 2), std::exp(Complex(0, u)) * std::sin(z / 2);
      double v = measurement_value(k);
      if (v > t + 1e-12) ++violations;
      best = std::max(best, v);
    }
    // The optimal discriminating measurement is the eigenbasis of rho - sigma.
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix() - sig.matrix());
    Vector opt = es.eigenvectors().col(1);
    double v = measurement_value(opt);
    if (v > t + 1e-12) ++violations;
    best = std::max(best, v);
    if (t - best > 1e-6) ++violations;
  }
  return violations;
}

int suite_probability_normalization() {
  Rng rng(substream_seed(kSeed, 14, 0));
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    DensityMatrix rho = random_density(rng, 4);
    AliceMeasurement am{kPi * rng.next_double(), 2 * kPi * rng.next_double()};
    BobMeasurement bm{kPi * rng.next_double(), 2 * kPi * rng.next_double()};
    double alpha = 0.05 + 1.5 * rng.next_double();
    AliceOp op = (i % 2 == 0) ? AliceOp::Identity : AliceOp::Flip;
    JointDistribution table = joint_distribution(rho, op, alpha, am, bm);
    double total = 0;
    for (auto& row : table)
      for (double p : row) {
        if (p < 0 || p > 1) ++violations;
        total += p;
      }
    if (std::abs(total - 1.0) > 1e-12) ++violations;
  }
  return violations;
}

int suite_scale_invariance() {
  Rng rng(substream_seed(kSeed, 15, 0));
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    DensityMatrix rho = random_density(rng, 2);
    Matrix v = random_complex(rng, 2);
    Complex scale(0.5 + 3 * rng.next_double(), 2 * rng.next_double() - 1);
    Matrix a = evolve_state(rho, v).matrix();
    Matrix b = evolve_state(rho, scale * v).matrix();
    if (max_abs(a - b) > 1e-12) ++violations;
  }
  return violations;
}

int suite_determinism() {
  int violations = 0;
  SourceModel src{SourceKind::MarkovAdversary, 0.25};
  if (draw_bits(src, 5000, 123) != draw_bits(src, 5000, 123)) ++violations;

  ProtocolConfig cfg{werner(0.7), 1.2, 3000, {SourceKind::IIDBiased, 0.15}, 31, std::nullopt};
  ProtocolResult a = run_protocol(cfg);
  ProtocolResult b = run_protocol(cfg);
  if (a.stats.sifted_length != b.stats.sifted_length) ++violations;
  if (a.stats.success_rate != b.stats.success_rate) ++violations;
  if (a.stats.agreement_rate != b.stats.agreement_rate) ++violations;
  for (size_t i = 0; i < a.records.size(); ++i)
    if (a.records[i].input_bit != b.records[i].input_bit ||
        a.records[i].bob_outcome != b.records[i].bob_outcome)
      ++violations;

  VerificationReport va = run_verification(kSeed);
  VerificationReport vb = run_verification(kSeed);
  if (va.checks.size() != vb.checks.size()) ++violations;
  for (size_t i = 0; i < va.checks.size(); ++i)
    if (va.checks[i].max_abs_error != vb.checks[i].max_abs_error) ++violations;
  return violations;
}

bool criterion_property_suites() {
  int unitarity = suite_expm_unitarity();
  int psd = suite_partial_trace();
  int tdist = suite_trace_distance_measurements();
  int norm = suite_probability_normalization();
  int scale = suite_scale_invariance();
  int determinism = suite_determinism();
  int total = unitarity + psd + tdist + norm + scale + determinism;
  return report(11, total == 0,
                "property suites: unitarity %d, psd %d, discrimination %d, normalization %d, "
                "scale %d, determinism %d violations",
                unitarity, psd, tdist, norm, scale, determinism);
}

}  // namespace

int main() {
  int failures = 0;
  failures += !criterion_werner_gap();
  failures += !criterion_non_max_gap();
  failures += !criterion_arbitrary_gap();
  failures += !criterion_perfect_signaling();
  failures += !criterion_quiet_states();
  failures += !criterion_dilation();
  failures += !criterion_randamp();
  failures += !criterion_receiver_matrices();
  failures += !criterion_discrepancy_ratios();
  failures += !criterion_dimension_ordering();
  failures += !criterion_property_suites();
  std::printf("%d of 11 criteria passed\n", 11 - failures);
  return failures;
}
