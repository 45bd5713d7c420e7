#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ptsim/quantum_core.hpp"
#include "ptsim/randamp.hpp"
#include "ptsim/states.hpp"

using namespace ptsim;

namespace {

constexpr double kPi = 3.14159265358979323846;

DensityMatrix phi_plus_state() {
  return DensityMatrix::from_pure(PureState(phi_plus_ket(2)));
}

double freq_of_one(const std::vector<int>& bits) {
  double total = 0;
  for (int b : bits) total += b;
  return total / static_cast<double>(bits.size());
}

RoundRecord kept_round(int input_bit, int bob_outcome) {
  RoundRecord r;
  r.input_bit = input_bit;
  r.alice_op = input_bit == 0 ? AliceOp::Flip : AliceOp::Identity;
  r.success = true;
  r.bob_outcome = bob_outcome;
  r.kept = true;
  return r;
}

RoundRecord failed_round(int input_bit) {
  RoundRecord r;
  r.input_bit = input_bit;
  r.alice_op = input_bit == 0 ? AliceOp::Flip : AliceOp::Identity;
  return r;
}

}  // namespace

TEST_CASE("bit sources are deterministic in the seed") {
  SourceModel src{SourceKind::MarkovAdversary, 0.3};
  CHECK(draw_bits(src, 500, 7) == draw_bits(src, 500, 7));
  CHECK(draw_bits(src, 500, 7) != draw_bits(src, 500, 8));
}

TEST_CASE("source frequencies match their models") {
  const int n = 20000;
  double sigma = 3 * std::sqrt(0.25 / n);

  CHECK(std::abs(freq_of_one(draw_bits({SourceKind::Fair, 0.0}, n, 11)) - 0.5) < sigma);

  std::vector<int> biased = draw_bits({SourceKind::IIDBiased, 0.2}, n, 13);
  CHECK(std::abs(freq_of_one(biased) - 0.7) < 3 * std::sqrt(0.21 / n));

  for (int b : draw_bits({SourceKind::IIDBiased, 0.5}, 200, 17)) CHECK(b == 1);

  std::vector<int> markov = draw_bits({SourceKind::MarkovAdversary, 0.2}, n, 19);
  double repeats = 0;
  for (int i = 1; i < n; ++i) repeats += markov[i] == markov[i - 1];
  CHECK(std::abs(repeats / (n - 1) - 0.7) < 3 * std::sqrt(0.21 / (n - 1)));
}

TEST_CASE("source models validate their parameters") {
  CHECK_THROWS_AS(draw_bits({SourceKind::IIDBiased, 0.6}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(draw_bits({SourceKind::Fair, -0.1}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(draw_bits({SourceKind::Fair, 0.0}, 0, 1), std::invalid_argument);
}

TEST_CASE("the probe calibration fixes the outcome decoding") {
  std::array<int, 2> m = calibrate_decode_map();
  CHECK(m[0] == 0);  // +y announces the flip
  CHECK(m[1] == 1);
}

TEST_CASE("maximally entangled state at the degeneracy amplifies a biased source") {
  ProtocolConfig cfg{phi_plus_state(), kPi / 2, 100000,
                     {SourceKind::IIDBiased, 0.2}, 42, std::nullopt};
  ProtocolResult res = run_protocol(cfg);

  CHECK(res.stats.rounds == 100000);
  CHECK(res.records.size() == 100000);
  CHECK(res.decode_map == std::array<int, 2>{0, 1});

  // Post-selection keeps half the rounds and is blind to the input bit.
  double sigma = 3 * std::sqrt(0.25 / 100000);
  CHECK(std::abs(res.stats.success_rate - 0.5) < sigma);
  CHECK(res.stats.sifted_length == 50181);  // seeded determinism

  // Every kept outcome decodes to the sent bit, so the bias survives intact.
  CHECK(res.stats.agreement_rate.has_value());
  CHECK(*res.stats.agreement_rate == 1.0);
  CHECK(res.stats.equality_certified);
  CHECK(std::abs(*res.stats.output_bias - 0.19966720471891752) < 1e-12);
  CHECK(std::abs(*res.stats.min_entropy_per_bit - 0.5152592246413287) < 1e-12);
}

TEST_CASE("hermitian control point carries no signal") {
  ProtocolConfig cfg{phi_plus_state(), 0.0, 100000,
                     {SourceKind::IIDBiased, 0.2}, 42, std::nullopt};
  ProtocolResult res = run_protocol(cfg);

  CHECK(res.stats.success_rate == 1.0);  // unitary map, nothing to discard
  CHECK(res.stats.sifted_length == 100000);
  double sigma = 3 * std::sqrt(0.25 / 100000);
  CHECK(std::abs(*res.stats.agreement_rate - 0.5) < sigma);
  CHECK_FALSE(res.stats.equality_certified);
}

TEST_CASE("partially mixed states agree at the analytic rate") {
  double alpha = 0.45 * kPi;
  ProtocolConfig cfg{werner(0.8), alpha, 100000,
                     {SourceKind::Fair, 0.0}, 99, std::nullopt};
  ProtocolResult res = run_protocol(cfg);

  double s = std::sin(alpha);
  double expected = 0.5 + 0.8 * s / (1 + s * s);
  double sigma = 3 * std::sqrt(expected * (1 - expected) / res.stats.sifted_length);
  CHECK(std::abs(*res.stats.agreement_rate - expected) < sigma);
  CHECK_FALSE(res.stats.equality_certified);
}

TEST_CASE("identical configurations reproduce identical runs") {
  ProtocolConfig cfg{werner(0.6), 1.1, 2000, {SourceKind::MarkovAdversary, 0.15}, 7,
                     std::nullopt};
  ProtocolResult a = run_protocol(cfg);
  ProtocolResult b = run_protocol(cfg);
  CHECK(a.stats.sifted_length == b.stats.sifted_length);
  CHECK(a.stats.success_rate == b.stats.success_rate);
  CHECK(a.records.size() == b.records.size());
  for (size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].input_bit == b.records[i].input_bit);
    CHECK(a.records[i].success == b.records[i].success);
    CHECK(a.records[i].bob_outcome == b.records[i].bob_outcome);
  }
}

TEST_CASE("estimators over handcrafted logs") {
  SUBCASE("perfect agreement certifies the run") {
    std::vector<RoundRecord> log{kept_round(0, 0), kept_round(1, 1), kept_round(0, 0)};
    ProtocolStats st = analyze(log);
    CHECK(st.rounds == 3);
    CHECK(st.sifted_length == 3);
    CHECK(*st.agreement_rate == 1.0);
    CHECK(st.equality_certified);
    CHECK(std::abs(*st.output_bias - (0.5 - 1.0 / 3.0)) < 1e-15);
  }

  SUBCASE("balanced output has a full bit of min-entropy") {
    std::vector<RoundRecord> log{kept_round(0, 0), kept_round(1, 1)};
    ProtocolStats st = analyze(log);
    CHECK(*st.output_bias == 0.0);
    CHECK(*st.min_entropy_per_bit == 1.0);
  }

  SUBCASE("three-quarters bias costs most of the entropy") {
    std::vector<RoundRecord> log{kept_round(1, 1), kept_round(1, 1), kept_round(1, 1),
                                 kept_round(0, 0)};
    ProtocolStats st = analyze(log);
    CHECK(std::abs(*st.output_bias - 0.25) < 1e-15);
    CHECK(std::abs(*st.min_entropy_per_bit - (-std::log2(0.75))) < 1e-15);
  }

  SUBCASE("disagreements break certification") {
    std::vector<RoundRecord> log{kept_round(0, 0), kept_round(1, 0)};
    ProtocolStats st = analyze(log);
    CHECK(*st.agreement_rate == 0.5);
    CHECK_FALSE(st.equality_certified);
  }

  SUBCASE("an entirely discarded run has no rate estimates") {
    std::vector<RoundRecord> log{failed_round(0), failed_round(1)};
    ProtocolStats st = analyze(log);
    CHECK(st.rounds == 2);
    CHECK(st.sifted_length == 0);
    CHECK(st.success_rate == 0.0);
    CHECK_FALSE(st.agreement_rate.has_value());
    CHECK_FALSE(st.output_bias.has_value());
    CHECK_FALSE(st.min_entropy_per_bit.has_value());
    CHECK_FALSE(st.equality_certified);
  }

  SUBCASE("swapped decoding flips agreement") {
    std::vector<RoundRecord> log{kept_round(0, 0), kept_round(1, 1)};
    ProtocolStats st = analyze(log, {1, 0});
    CHECK(*st.agreement_rate == 0.0);
  }

  SUBCASE("malformed input is rejected") {
    CHECK_THROWS_AS(analyze({}), std::invalid_argument);

    RoundRecord bad = kept_round(0, 0);
    bad.bob_outcome.reset();  // success without an outcome
    CHECK_THROWS_AS(analyze({bad}), std::invalid_argument);

    RoundRecord unkept = kept_round(0, 0);
    unkept.kept = false;
    CHECK_THROWS_AS(analyze({unkept}), std::invalid_argument);

    CHECK_THROWS_AS(analyze({kept_round(0, 0)}, {0, 2}), std::invalid_argument);
  }
}

TEST_CASE("certification separates clean and noisy runs") {
  ProtocolConfig clean{phi_plus_state(), kPi / 2, 2000, {SourceKind::IIDBiased, 0.1}, 5,
                       std::nullopt};
  CHECK(certify_source(clean));

  ProtocolConfig noisy{werner(0.9), kPi / 2, 10000, {SourceKind::IIDBiased, 0.1}, 5,
                       std::nullopt};
  CHECK_FALSE(certify_source(noisy));

  ProtocolConfig blank{werner(0.0), kPi / 2, 10000, {SourceKind::Fair, 0.0}, 5,
                       std::nullopt};
  CHECK_FALSE(certify_source(blank));
}

TEST_CASE("protocol rejects malformed configurations") {
  ProtocolConfig bad_rounds{phi_plus_state(), 0.5, 0, {SourceKind::Fair, 0.0}, 1,
                            std::nullopt};
  CHECK_THROWS_AS(run_protocol(bad_rounds), std::invalid_argument);

  ProtocolConfig qutrits{two_qutrit(QutritParams{}), 0.5, 10, {SourceKind::Fair, 0.0}, 1,
                         std::nullopt};
  CHECK_THROWS_AS(run_protocol(qutrits), std::invalid_argument);
}
