#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "commflow/fixed_point.hpp"
#include "commflow/rng.hpp"
#include "commflow/sparse.hpp"
#include "commflow/transcript.hpp"
#include "commflow/types.hpp"

namespace commflow {

// Simulated channel between Alice, Bob and the coordinator. Every payload
// crossing the channel is quantized to L fractional bits and costs
// 2L+1 bits per scalar (sign + L integer + L fraction). Shared randomness is
// free; each tag draws from its own substream so phases never reuse draws.
class Channel {
 public:
  Channel(int frac_bits, std::uint64_t seed,
          bool fold_alice_coordinator = false)
      : frac_bits_(frac_bits),
        seed_(seed),
        fold_alice_coordinator_(fold_alice_coordinator) {}

  int frac_bits() const { return frac_bits_; }
  std::uint64_t seed() const { return seed_; }

  // Quantizes, logs, and returns the payload as delivered.
  FixedPointVector send(PartyId from, PartyId to, const std::string& phase,
                        const Eigen::VectorXd& payload);

  // Sends the given rows of a sparse matrix (values quantized); costs
  // k_row * (ceil(log2 cols) + 2L + 1) bits per row.
  SparseMatrix send_sparse_rows(PartyId from, PartyId to,
                                const std::string& phase,
                                const SparseMatrix& a,
                                const std::vector<int>& rows,
                                const Eigen::VectorXd* row_scale = nullptr);

  // Accounting-only event for protocol steps whose internals are out of
  // scope. No payload.
  void charge_protocol_cost(const std::string& phase, std::int64_t bits);

  // Shared randomness: both parties obtain identical draws, zero bits.
  Eigen::VectorXd shared_uniform(const std::string& tag, int count);
  std::vector<std::int64_t> shared_uniform_int(const std::string& tag,
                                               int count, std::int64_t lo,
                                               std::int64_t hi);
  // Fresh substream for the tag (advances that tag's counter).
  Rng shared_rng(const std::string& tag);

  Transcript& transcript() { return transcript_; }
  const Transcript& transcript() const { return transcript_; }

  // Test instrumentation: when enabled, keeps a copy of every delivered
  // payload so tests can check quantization locality.
  void set_record_payloads(bool on) { record_payloads_ = on; }
  const std::vector<Eigen::VectorXd>& recorded_payloads() const {
    return recorded_;
  }

 private:
  bool folded(PartyId a, PartyId b) const {
    return fold_alice_coordinator_ &&
           ((a == PartyId::kAlice && b == PartyId::kCoordinator) ||
            (a == PartyId::kCoordinator && b == PartyId::kAlice));
  }
  Rng tag_stream(const std::string& tag);

  int frac_bits_;
  std::uint64_t seed_;
  bool fold_alice_coordinator_;
  Transcript transcript_;
  std::map<std::string, std::uint64_t> tag_counters_;
  bool record_payloads_ = false;
  std::vector<Eigen::VectorXd> recorded_;
};

// Configured accounting formula for the leverage-score / Lewis-weight
// subprotocols: n*k*L + n*L*ceil(log2 kappa_hat).
std::int64_t lewis_protocol_bits(int n, int k, int L, double kappa_hat);

// Sketch-phase formula per the O(nkL + n(L + log kappa)) sampling bound.
std::int64_t sketch_protocol_bits(int n, int k, int L, double kappa_hat);

}  // namespace commflow
