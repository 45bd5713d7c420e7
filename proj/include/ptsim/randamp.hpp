#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "ptsim/quantum_core.hpp"
#include "ptsim/signaling.hpp"

namespace ptsim {

// Weak randomness source: every emitted bit has conditional probability of 1
// in [1/2 - epsilon, 1/2 + epsilon] given the history.
enum class SourceKind { Fair, IIDBiased, MarkovAdversary };

struct SourceModel {
  SourceKind kind = SourceKind::Fair;
  double epsilon = 0.0;
};

// Deterministic given (source, seed). IIDBiased leans toward 1 with
// probability 1/2 + epsilon; MarkovAdversary repeats the previous bit with
// probability 1/2 + epsilon, first bit fair.
std::vector<int> draw_bits(const SourceModel& source, int n, std::uint64_t seed);

struct ProtocolConfig {
  DensityMatrix state;
  double alpha = 0.0;
  int rounds = 1;
  SourceModel source;
  std::uint64_t seed = 0;
  // Bob outcome index -> decoded input bit. Calibrated from a noiseless probe
  // at the exceptional point when absent, so a sign-convention change upstream
  // cannot silently corrupt agreement statistics.
  std::optional<std::array<int, 2>> decode_map;
};

struct RoundRecord {
  int input_bit = 0;
  AliceOp alice_op = AliceOp::Identity;
  bool success = false;
  std::optional<int> bob_outcome;  // present iff success; 0 = +y, 1 = -y
  bool kept = false;               // kept iff success
};

struct ProtocolStats {
  int rounds = 0;
  int sifted_length = 0;
  double success_rate = 0.0;
  // Absent when the sifted string is empty.
  std::optional<double> agreement_rate;
  std::optional<double> output_bias;
  std::optional<double> min_entropy_per_bit;
  bool equality_certified = false;
};

struct ProtocolResult {
  ProtocolStats stats;
  std::vector<RoundRecord> records;
  std::array<int, 2> decode_map{0, 1};
};

// Probe run on the maximally entangled state at the exceptional point; maps
// each Bob outcome to the Alice bit that makes it most likely.
std::array<int, 2> calibrate_decode_map();

ProtocolResult run_protocol(const ProtocolConfig& cfg);

// Estimators over the record log. min_entropy_per_bit is the plug-in
// -log2 max(p0, p1) of the decoded sifted string.
ProtocolStats analyze(const std::vector<RoundRecord>& records,
                      const std::array<int, 2>& decode_map = {0, 1});

// True iff every kept round decoded to Alice's input bit.
bool certify_source(const ProtocolConfig& cfg);

}  // namespace ptsim
