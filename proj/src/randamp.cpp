#include "ptsim/randamp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ptsim/dilation.hpp"
#include "ptsim/pt_dynamics.hpp"
#include "ptsim/rng.hpp"
#include "ptsim/states.hpp"

namespace ptsim {

namespace {

constexpr std::uint64_t kSourceStream = 0;
constexpr std::uint64_t kQuantumStream = 1;

void check_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 0.5))
    throw std::invalid_argument("SourceModel: epsilon must lie in [0, 1/2]");
}

struct OpChannel {
  double success_prob = 0.0;
  double prob_plus_y = 0.0;  // conditional on success
};

// Postselection statistics are round-independent, so compute them once per op.
OpChannel channel_for(const DensityMatrix& rho, double alpha, AliceOp op) {
  Matrix m = specific_time_operator(alpha) * alice_op_matrix(op, 2);
  Postselected post = apply_postselected(rho, m);
  Matrix bob = partial_trace(post.state.matrix(), 2, 2, Subsystem::B);
  Vector plus_y = ket_plus_y();
  double p = (plus_y.adjoint() * bob * plus_y)(0).real();
  return {post.success_prob, std::clamp(p, 0.0, 1.0)};
}

}  // namespace

std::vector<int> draw_bits(const SourceModel& source, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("draw_bits: n must be >= 1");
  check_epsilon(source.epsilon);
  Rng rng(seed);
  std::vector<int> bits(n);
  for (int i = 0; i < n; ++i) {
    double p_one = 0.5;
    switch (source.kind) {
      case SourceKind::Fair:
        break;
      case SourceKind::IIDBiased:
        p_one = 0.5 + source.epsilon;
        break;
      case SourceKind::MarkovAdversary:
        if (i > 0) p_one = bits[i - 1] == 1 ? 0.5 + source.epsilon : 0.5 - source.epsilon;
        break;
    }
    bits[i] = rng.next_double() < p_one ? 1 : 0;
  }
  return bits;
}

std::array<int, 2> calibrate_decode_map() {
  DensityMatrix probe = DensityMatrix::from_pure(PureState(phi_plus_ket(2)));
  double alpha = M_PI / 2;
  double plus_given_flip = channel_for(probe, alpha, AliceOp::Flip).prob_plus_y;
  double plus_given_id = channel_for(probe, alpha, AliceOp::Identity).prob_plus_y;
  // Outcome 0 (+y) decodes to whichever bit makes it more likely; bit 0 is Flip.
  int decode_plus = plus_given_flip >= plus_given_id ? 0 : 1;
  return {decode_plus, 1 - decode_plus};
}

ProtocolResult run_protocol(const ProtocolConfig& cfg) {
  if (cfg.rounds < 1) throw std::invalid_argument("run_protocol: rounds must be >= 1");
  if (cfg.state.dim() != 4)
    throw std::invalid_argument("run_protocol: state must be two qubits");
  check_epsilon(cfg.source.epsilon);

  std::array<int, 2> decode = cfg.decode_map ? *cfg.decode_map : calibrate_decode_map();
  OpChannel by_bit[2] = {channel_for(cfg.state, cfg.alpha, AliceOp::Flip),
                         channel_for(cfg.state, cfg.alpha, AliceOp::Identity)};

  std::vector<int> bits =
      draw_bits(cfg.source, cfg.rounds, substream_seed(cfg.seed, kSourceStream, 0));

  ProtocolResult result;
  result.decode_map = decode;
  result.records.reserve(cfg.rounds);
  for (int i = 0; i < cfg.rounds; ++i) {
    RoundRecord rec;
    rec.input_bit = bits[i];
    rec.alice_op = bits[i] == 0 ? AliceOp::Flip : AliceOp::Identity;
    const OpChannel& ch = by_bit[bits[i]];
    Rng round_rng(substream_seed(cfg.seed, kQuantumStream, static_cast<std::uint64_t>(i)));
    rec.success = round_rng.next_double() < ch.success_prob;
    rec.kept = rec.success;
    if (rec.success)
      rec.bob_outcome = round_rng.next_double() < ch.prob_plus_y ? 0 : 1;
    result.records.push_back(rec);
  }
  result.stats = analyze(result.records, decode);
  return result;
}

ProtocolStats analyze(const std::vector<RoundRecord>& records,
                      const std::array<int, 2>& decode_map) {
  if (records.empty()) throw std::invalid_argument("analyze: empty record list");
  for (int b : decode_map)
    if (b != 0 && b != 1) throw std::invalid_argument("analyze: decode map entries must be bits");

  ProtocolStats stats;
  stats.rounds = static_cast<int>(records.size());
  int agree = 0, ones = 0;
  for (const RoundRecord& rec : records) {
    if (rec.kept != rec.success || rec.bob_outcome.has_value() != rec.success)
      throw std::invalid_argument("analyze: inconsistent round record");
    if (!rec.kept) continue;
    ++stats.sifted_length;
    int decoded = decode_map[*rec.bob_outcome];
    if (decoded == rec.input_bit) ++agree;
    if (decoded == 1) ++ones;
  }
  stats.success_rate = static_cast<double>(stats.sifted_length) / stats.rounds;
  if (stats.sifted_length == 0) return stats;

  double n = stats.sifted_length;
  stats.agreement_rate = agree / n;
  double p_one = ones / n;
  stats.output_bias = std::abs(p_one - 0.5);
  stats.min_entropy_per_bit = -std::log2(std::max(p_one, 1.0 - p_one));
  stats.equality_certified = agree == stats.sifted_length;
  return stats;
}

bool certify_source(const ProtocolConfig& cfg) {
  return run_protocol(cfg).stats.equality_certified;
}

}  // namespace ptsim
