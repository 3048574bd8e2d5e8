#pragma once

#include <cstdint>
#include <vector>

#include "qkd/quantum.hpp"
#include "qkd/rng.hpp"
#include "qkd/security.hpp"
#include "qkd/toeplitz.hpp"

namespace qkd {

enum class Flag : std::uint8_t { Pass, Abort, Skipped };

inline bool passed(Flag f) { return f == Flag::Pass; }

enum class ChannelKind : std::uint8_t { Ideal, Depolarizing, AmplitudeDamping, InterceptResend };

struct ChannelModel {
  ChannelKind kind = ChannelKind::Ideal;
  double parameter = 0.0;  // p, gamma or interception fraction

  static ChannelModel ideal() { return {ChannelKind::Ideal, 0.0}; }
  static ChannelModel depolarizing(double p);
  static ChannelModel amplitude_damping(double gamma);
  static ChannelModel intercept_resend(double fraction);
};

struct ProtocolConfig {
  std::int64_t signals = 0;       // M
  double delta = 0.0;             // estimation abort threshold
  std::int64_t k = 0;             // estimation sample size
  int t = 16;                     // verification-hash bits
  int cascade_passes = 4;
  double loss_prob = 0.0;
  std::uint64_t seed = 1;
  std::int64_t m_required = 0;    // 0: keep every matching index

  void validate() const;
};

// Outcome alphabet {0, 1, inconclusive}.
constexpr std::uint8_t kInconclusive = 2;

struct PrepareResult {
  Bits r;
  Bits phi_a;
  std::vector<PureState> states;
};

// Uniform bits r and bases phi; qubit i is |0>,|1>,|+>,|-> according to
// (r_i, phi_i), computational basis for phi = 0.
PrepareResult prepare_states(const ProtocolConfig& config, Rng& rng);

// Per-signal channel action. Randomness is consumed only by the
// intercept-resend model (one substream per signal).
std::vector<DensityMatrix> transmit(const ChannelModel& channel,
                                    const std::vector<PureState>& states, Rng& rng);

struct MeasureResult {
  Bits phi_b;
  std::vector<std::uint8_t> outcomes;  // values 0, 1 or kInconclusive
  std::vector<std::int64_t> omega;     // conclusive indices
};

MeasureResult measure(const std::vector<DensityMatrix>& states, const ProtocolConfig& config,
                      Rng& rng);

struct SiftResult {
  std::vector<std::int64_t> sigma;
  Flag flag = Flag::Abort;
};

// First m_required conclusive indices with matching bases, ascending;
// m_required = 0 keeps them all. Aborts when not enough matches exist.
SiftResult sift(const Bits& phi_a, const Bits& phi_b, const std::vector<std::int64_t>& omega,
                std::int64_t m_required);

struct EstimateResult {
  double qber = 0.0;
  Flag flag = Flag::Abort;
  std::vector<std::int64_t> sample;  // sacrificed positions, ascending
};

// Compares a random k-subset of the sifted strings; the sampled bits
// are consumed by the caller (removed from the key material).
EstimateResult estimate_parameters(const Bits& x_a, const Bits& x_b, std::int64_t k, double delta,
                                   Rng& rng);

struct ReconcileResult {
  Bits corrected;
  std::int64_t leak_bits = 0;
};

// Interactive Cascade: first-pass blocks of ceil(0.73/qber), doubling
// each pass, shared seeded shuffles, binary search on odd-parity blocks
// with back-propagation. leak_bits counts every announced parity.
// Degenerate qber (<= 0 or >= 0.5) returns the input untouched with
// leak 0; the verification hash then catches any mismatch.
ReconcileResult reconcile_cascade(const Bits& x_a, const Bits& x_b, double qber, int passes,
                                  Rng& rng);

// Fresh shared Toeplitz seed, n_out = t; abort iff the hashes differ.
Flag verify_hash(const Bits& x_a, const Bits& x_b, int t, Rng& rng);

Bits privacy_amplification(const Bits& x, std::int64_t l, Rng& rng);
Bits privacy_amplification(const Bits& x, const ToeplitzHash& hash);

struct ProtocolRun {
  std::int64_t signals = 0;
  Bits r;
  Bits phi_a;
  Bits phi_b;
  std::vector<std::uint8_t> outcomes;
  std::vector<std::int64_t> omega;
  std::vector<std::int64_t> sigma;
  double qber_estimate = 0.0;
  Flag f_sift = Flag::Skipped;
  Flag f_pe = Flag::Skipped;
  Flag f_ec = Flag::Skipped;
  std::int64_t raw_key_length = 0;  // n after estimation bits are removed
  std::int64_t leak_ec_bits = 0;
  std::int64_t transcript_bits = 0;
  std::int64_t key_length = 0;
  bool keys_present = false;
  Bits key_a;
  Bits key_b;

  bool aborted() const { return !passed(f_sift) || !passed(f_pe) || !passed(f_ec); }
};

// Full pipeline: prepare, transmit, measure, sift, estimate, reconcile,
// verify, amplify. The key length comes from the self-consistent
// finite-key bound with c_bar = 1/2. Aborts are flags, not errors.
ProtocolRun run_protocol(const ProtocolConfig& config, const ChannelModel& channel,
                         const SecurityBudget& budget);

}  // namespace qkd
