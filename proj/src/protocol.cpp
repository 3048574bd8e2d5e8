#include "qkd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qkd {

namespace {

// Substream tags, one per source of randomness in the pipeline.
constexpr std::uint64_t kTagAliceBits = 0x51;
constexpr std::uint64_t kTagAliceBases = 0x52;
constexpr std::uint64_t kTagChannel = 0x53;
constexpr std::uint64_t kTagLoss = 0x54;
constexpr std::uint64_t kTagBobBases = 0x55;
constexpr std::uint64_t kTagBorn = 0x56;
constexpr std::uint64_t kTagEstimation = 0x57;
constexpr std::uint64_t kTagCascade = 0x58;
constexpr std::uint64_t kTagVerify = 0x59;
constexpr std::uint64_t kTagAmplify = 0x5A;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

PureState bb84_state(int bit, int basis) {
  PureState s;
  if (basis == 0) {
    s.amplitudes = bit == 0 ? std::vector<complexd>{1.0, 0.0} : std::vector<complexd>{0.0, 1.0};
  } else {
    s.amplitudes = bit == 0 ? std::vector<complexd>{kInvSqrt2, kInvSqrt2}
                            : std::vector<complexd>{kInvSqrt2, -kInvSqrt2};
  }
  return s;
}

// <b|rho|b> for the BB84 basis vector (basis, outcome 0).
double born_prob_zero(const Matrix& rho, int basis) {
  if (basis == 0) return rho(0, 0).real();
  return 0.5 * (rho(0, 0) + rho(0, 1) + rho(1, 0) + rho(1, 1)).real();
}

double pure_prob_zero(const PureState& psi, int basis) {
  if (basis == 0) return std::norm(psi.amplitudes[0]);
  return std::norm(kInvSqrt2 * (psi.amplitudes[0] + psi.amplitudes[1]));
}

}  // namespace

ChannelModel ChannelModel::depolarizing(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("channel: p outside [0,1]");
  return {ChannelKind::Depolarizing, p};
}

ChannelModel ChannelModel::amplitude_damping(double gamma) {
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("channel: gamma outside [0,1]");
  return {ChannelKind::AmplitudeDamping, gamma};
}

ChannelModel ChannelModel::intercept_resend(double fraction) {
  if (fraction < 0.0 || fraction > 1.0)
    throw std::invalid_argument("channel: fraction outside [0,1]");
  return {ChannelKind::InterceptResend, fraction};
}

void ProtocolConfig::validate() const {
  if (signals < 2) throw std::invalid_argument("config: M must be at least 2");
  if (k <= 0 || k >= signals) throw std::invalid_argument("config: need 0 < k < M");
  if (delta < 0.0 || delta > 0.5) throw std::invalid_argument("config: delta outside [0, 0.5]");
  if (t < 1) throw std::invalid_argument("config: t must be at least 1");
  if (cascade_passes < 2 || cascade_passes > 32)
    throw std::invalid_argument("config: cascade passes outside [2, 32]");
  if (loss_prob < 0.0 || loss_prob > 1.0)
    throw std::invalid_argument("config: loss probability outside [0,1]");
  if (m_required < 0 || m_required > signals)
    throw std::invalid_argument("config: m_required outside [0, M]");
}

PrepareResult prepare_states(const ProtocolConfig& config, Rng& rng) {
  const std::size_t m = static_cast<std::size_t>(config.signals);
  PrepareResult out;
  out.r.resize(m);
  out.phi_a.resize(m);
  out.states.reserve(m);
  const Rng bits = rng.fork(kTagAliceBits);
  const Rng bases = rng.fork(kTagAliceBases);
  for (std::size_t i = 0; i < m; ++i) {
    Rng bi = bits.fork(i);
    Rng pi = bases.fork(i);
    out.r[i] = static_cast<std::uint8_t>(bi.bit());
    out.phi_a[i] = static_cast<std::uint8_t>(pi.bit());
    out.states.push_back(bb84_state(out.r[i], out.phi_a[i]));
  }
  return out;
}

std::vector<DensityMatrix> transmit(const ChannelModel& channel,
                                    const std::vector<PureState>& states, Rng& rng) {
  std::vector<DensityMatrix> out;
  out.reserve(states.size());
  const Rng stream = rng.fork(kTagChannel);

  switch (channel.kind) {
    case ChannelKind::Ideal:
      for (const auto& psi : states) out.push_back(psi.to_density());
      break;
    case ChannelKind::Depolarizing: {
      const double p = channel.parameter;
      for (const auto& psi : states) {
        Matrix m = psi.to_density().matrix();
        m *= complexd(1.0 - p, 0.0);
        m(0, 0) += p / 2.0;
        m(1, 1) += p / 2.0;
        out.push_back(DensityMatrix::trusted(std::move(m)));
      }
      break;
    }
    case ChannelKind::AmplitudeDamping: {
      const KrausChannel ad = KrausChannel::amplitude_damping(channel.parameter);
      for (const auto& psi : states) out.push_back(apply_channel(ad, psi.to_density()));
      break;
    }
    case ChannelKind::InterceptResend: {
      const double f = channel.parameter;
      for (std::size_t i = 0; i < states.size(); ++i) {
        Rng s = stream.fork(i);
        if (s.uniform01() < f) {
          const int basis = s.bit();
          const double p0 = std::clamp(pure_prob_zero(states[i], basis), 0.0, 1.0);
          const int outcome = s.uniform01() < p0 ? 0 : 1;
          out.push_back(bb84_state(outcome, basis).to_density());
        } else {
          out.push_back(states[i].to_density());
        }
      }
      break;
    }
  }
  return out;
}

MeasureResult measure(const std::vector<DensityMatrix>& states, const ProtocolConfig& config,
                      Rng& rng) {
  MeasureResult out;
  const std::size_t m = states.size();
  out.phi_b.resize(m);
  out.outcomes.resize(m);
  const Rng loss = rng.fork(kTagLoss);
  const Rng bases = rng.fork(kTagBobBases);
  const Rng born = rng.fork(kTagBorn);
  for (std::size_t i = 0; i < m; ++i) {
    Rng li = loss.fork(i);
    Rng bi = bases.fork(i);
    Rng mi = born.fork(i);
    out.phi_b[i] = static_cast<std::uint8_t>(bi.bit());
    if (li.uniform01() < config.loss_prob) {
      out.outcomes[i] = kInconclusive;
      continue;
    }
    const double p0 = std::clamp(born_prob_zero(states[i].matrix(), out.phi_b[i]), 0.0, 1.0);
    out.outcomes[i] = static_cast<std::uint8_t>(mi.uniform01() < p0 ? 0 : 1);
    out.omega.push_back(static_cast<std::int64_t>(i));
  }
  return out;
}

SiftResult sift(const Bits& phi_a, const Bits& phi_b, const std::vector<std::int64_t>& omega,
                std::int64_t m_required) {
  SiftResult out;
  for (std::int64_t i : omega) {
    if (phi_a[static_cast<std::size_t>(i)] == phi_b[static_cast<std::size_t>(i)])
      out.sigma.push_back(i);
    if (m_required > 0 && static_cast<std::int64_t>(out.sigma.size()) == m_required) break;
  }
  if (m_required > 0 && static_cast<std::int64_t>(out.sigma.size()) < m_required) {
    out.sigma.clear();
    out.flag = Flag::Abort;
    return out;
  }
  out.flag = Flag::Pass;
  return out;
}

EstimateResult estimate_parameters(const Bits& x_a, const Bits& x_b, std::int64_t k, double delta,
                                   Rng& rng) {
  if (x_a.size() != x_b.size()) throw std::invalid_argument("estimation: length mismatch");
  const std::int64_t m = static_cast<std::int64_t>(x_a.size());
  if (k > m) throw std::invalid_argument("estimation: sample larger than the sifted key");
  if (k <= 0) throw std::invalid_argument("estimation: sample must be positive");

  Rng stream = rng.fork(kTagEstimation);
  // Partial Fisher-Yates: only the first k slots are needed.
  std::vector<std::int64_t> idx(static_cast<std::size_t>(m));
  std::iota(idx.begin(), idx.end(), std::int64_t{0});
  for (std::int64_t i = 0; i < k; ++i) {
    const std::int64_t j = i + static_cast<std::int64_t>(stream.below(m - i));
    std::swap(idx[i], idx[j]);
  }
  EstimateResult out;
  out.sample.assign(idx.begin(), idx.begin() + k);
  std::sort(out.sample.begin(), out.sample.end());

  std::int64_t errors = 0;
  for (std::int64_t i : out.sample)
    if (x_a[static_cast<std::size_t>(i)] != x_b[static_cast<std::size_t>(i)]) ++errors;
  out.qber = static_cast<double>(errors) / static_cast<double>(k);
  out.flag = out.qber > delta ? Flag::Abort : Flag::Pass;
  return out;
}

Flag verify_hash(const Bits& x_a, const Bits& x_b, int t, Rng& rng) {
  if (x_a.size() != x_b.size()) throw std::invalid_argument("verification: length mismatch");
  if (x_a.empty()) return Flag::Pass;
  Rng stream = rng.fork(kTagVerify);
  const ToeplitzHash hash = ToeplitzHash::random(x_a.size(), static_cast<std::size_t>(t), stream);
  return hash.apply(x_a) == hash.apply(x_b) ? Flag::Pass : Flag::Abort;
}

Bits privacy_amplification(const Bits& x, std::int64_t l, Rng& rng) {
  if (l > static_cast<std::int64_t>(x.size()))
    throw std::invalid_argument("amplification: output longer than input");
  if (l <= 0) return {};
  Rng stream = rng.fork(kTagAmplify);
  const ToeplitzHash hash =
      ToeplitzHash::random(x.size(), static_cast<std::size_t>(l), stream);
  return hash.apply(x);
}

Bits privacy_amplification(const Bits& x, const ToeplitzHash& hash) { return hash.apply(x); }

ProtocolRun run_protocol(const ProtocolConfig& config, const ChannelModel& channel,
                         const SecurityBudget& budget) {
  config.validate();
  budget.validate();
  if (budget.slack() <= 0.0)
    throw std::invalid_argument("config: eps - eps_bar - eps_ec must be positive");

  Rng rng(config.seed);
  ProtocolRun run;
  run.signals = config.signals;

  PrepareResult prep = prepare_states(config, rng);
  run.r = std::move(prep.r);
  run.phi_a = std::move(prep.phi_a);

  const std::vector<DensityMatrix> received = transmit(channel, prep.states, rng);
  MeasureResult meas = measure(received, config, rng);
  run.phi_b = std::move(meas.phi_b);
  run.outcomes = std::move(meas.outcomes);
  run.omega = std::move(meas.omega);

  // Bob announces bases and the conclusive set, Alice answers with her
  // bases; every classically communicated bit lands in the transcript.
  run.transcript_bits += 3 * config.signals;

  SiftResult sifted = sift(run.phi_a, run.phi_b, run.omega, config.m_required);
  run.f_sift = sifted.flag;
  // The estimation sample and the t-bit verification hash both need raw
  // material left over; too little is a sifting failure, not an error.
  if (passed(run.f_sift) &&
      static_cast<std::int64_t>(sifted.sigma.size()) < config.k + config.t)
    run.f_sift = Flag::Abort;
  if (!passed(run.f_sift)) return run;
  run.sigma = std::move(sifted.sigma);

  Bits sift_a, sift_b;
  sift_a.reserve(run.sigma.size());
  sift_b.reserve(run.sigma.size());
  for (std::int64_t i : run.sigma) {
    sift_a.push_back(run.r[static_cast<std::size_t>(i)]);
    sift_b.push_back(run.outcomes[static_cast<std::size_t>(i)]);
  }

  EstimateResult est = estimate_parameters(sift_a, sift_b, config.k, config.delta, rng);
  run.qber_estimate = est.qber;
  run.f_pe = est.flag;
  // Sample positions (bitmask over the sifted string) plus both parties'
  // sample values.
  run.transcript_bits += static_cast<std::int64_t>(sift_a.size()) + 2 * config.k;
  if (!passed(run.f_pe)) return run;

  Bits x_a, x_b;
  x_a.reserve(sift_a.size() - est.sample.size());
  x_b.reserve(sift_a.size() - est.sample.size());
  std::size_t next_sample = 0;
  for (std::size_t i = 0; i < sift_a.size(); ++i) {
    if (next_sample < est.sample.size() &&
        static_cast<std::int64_t>(i) == est.sample[next_sample]) {
      ++next_sample;
      continue;
    }
    x_a.push_back(sift_a[i]);
    x_b.push_back(sift_b[i]);
  }
  run.raw_key_length = static_cast<std::int64_t>(x_a.size());

  ReconcileResult rec = reconcile_cascade(x_a, x_b, est.qber, config.cascade_passes, rng);
  run.leak_ec_bits = rec.leak_bits;
  if (rec.leak_bits > 0) run.transcript_bits += 64;  // shared shuffle seed
  run.transcript_bits += rec.leak_bits;

  run.f_ec = verify_hash(x_a, rec.corrected, config.t, rng);
  run.transcript_bits += static_cast<std::int64_t>(x_a.size()) + config.t - 1;  // hash seed
  run.transcript_bits += config.t + 1;  // announced hash value and the accept bit
  if (!passed(run.f_ec)) return run;

  RateParams params;
  params.big_m = config.signals;
  params.n = run.raw_key_length;
  params.k = config.k;
  params.m = static_cast<std::int64_t>(run.sigma.size());
  params.t = config.t;
  params.delta = config.delta;
  params.c_bar = 0.5;
  params.leak_ec = static_cast<double>(run.leak_ec_bits);
  params.s = run.leak_ec_bits;
  run.key_length = choose_key_length(params, budget);

  Rng pa_stream = rng.fork(kTagAmplify);
  if (run.key_length > 0) {
    const ToeplitzHash hash = ToeplitzHash::random(
        x_a.size(), static_cast<std::size_t>(run.key_length), pa_stream);
    run.key_a = hash.apply(x_a);
    run.key_b = hash.apply(rec.corrected);
    run.transcript_bits +=
        static_cast<std::int64_t>(hash.seed_bits());  // extractor seed is public
  }
  run.keys_present = true;
  return run;
}

}  // namespace qkd
