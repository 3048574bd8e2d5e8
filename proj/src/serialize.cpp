#include "qkd/serialize.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qkd {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

void require_known_fields(const nlohmann::json& j, const std::set<std::string>& allowed,
                          const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw std::invalid_argument("config: unknown field '" + it.key() + "' in " + where);
}

}  // namespace

std::string bits_to_hex(const Bits& bits) {
  std::string out;
  out.reserve((bits.size() + 3) / 4);
  std::uint8_t nibble = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    nibble = static_cast<std::uint8_t>((nibble << 1) | (bits[i] & 1));
    if (i % 4 == 3) {
      out.push_back(kHexDigits[nibble]);
      nibble = 0;
    }
  }
  if (bits.size() % 4 != 0) {
    nibble = static_cast<std::uint8_t>(nibble << (4 - bits.size() % 4));
    out.push_back(kHexDigits[nibble]);
  }
  return out;
}

Bits hex_to_bits(const std::string& hex, std::size_t nbits) {
  if (hex.size() != (nbits + 3) / 4) throw std::invalid_argument("hex string length mismatch");
  Bits bits(nbits);
  for (std::size_t i = 0; i < nbits; ++i) {
    const char c = hex[i / 4];
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else throw std::invalid_argument("invalid hex digit");
    bits[i] = static_cast<std::uint8_t>((v >> (3 - i % 4)) & 1);
  }
  return bits;
}

std::string outcomes_to_string(const std::vector<std::uint8_t>& outcomes) {
  std::string out;
  out.reserve(outcomes.size());
  for (std::uint8_t t : outcomes) out.push_back(t == kInconclusive ? '-' : char('0' + t));
  return out;
}

std::string indices_to_hex(const std::vector<std::int64_t>& indices, std::size_t universe) {
  Bits mask(universe, 0);
  for (std::int64_t i : indices) mask[static_cast<std::size_t>(i)] = 1;
  return bits_to_hex(mask);
}

std::string flag_name(Flag f) {
  switch (f) {
    case Flag::Pass: return "pass";
    case Flag::Abort: return "abort";
    case Flag::Skipped: return "skipped";
  }
  return "unknown";
}

nlohmann::json to_json(const ProtocolRun& run) {
  nlohmann::json j;
  j["signals"] = run.signals;
  j["alice_bits"] = bits_to_hex(run.r);
  j["alice_bases"] = bits_to_hex(run.phi_a);
  j["bob_bases"] = bits_to_hex(run.phi_b);
  j["outcomes"] = outcomes_to_string(run.outcomes);
  j["conclusive_mask"] = indices_to_hex(run.omega, static_cast<std::size_t>(run.signals));
  j["sifted_mask"] = indices_to_hex(run.sigma, static_cast<std::size_t>(run.signals));
  j["sifted_count"] = run.sigma.size();
  j["qber_estimate"] = run.qber_estimate;
  j["flags"] = {{"sift", flag_name(run.f_sift)},
                {"parameter_estimation", flag_name(run.f_pe)},
                {"error_correction", flag_name(run.f_ec)}};
  j["raw_key_length"] = run.raw_key_length;
  j["leak_ec_bits"] = run.leak_ec_bits;
  j["transcript_bits"] = run.transcript_bits;
  j["key_length"] = run.key_length;
  if (run.keys_present) {
    j["key_a"] = bits_to_hex(run.key_a);
    j["key_b"] = bits_to_hex(run.key_b);
  } else {
    j["key_a"] = nullptr;
    j["key_b"] = nullptr;
  }
  return j;
}

nlohmann::json to_json(const RateReport& report) {
  nlohmann::json j;
  j["feasible"] = report.feasible;
  j["pa_condition_ok"] = report.pa_condition_ok;
  j["r_sifted"] = report.r_sifted;
  j["r_per_signal"] = report.r_per_signal;
  j["l_max"] = report.l_max;
  j["nu_star"] = report.nu_star;
  j["log2_eps_pa"] = report.log2_eps_pa;
  j["n"] = report.n;
  j["k"] = report.k;
  j["m"] = report.m;
  j["eps_bar"] = report.eps_bar;
  j["eps_bar_prime"] = report.eps_bar_prime;
  return j;
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix: expected non-empty array");
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().size();
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j[i].size() != cols) throw std::invalid_argument("matrix: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& cell = j[i][c];
      if (!cell.is_array() || cell.size() != 2)
        throw std::invalid_argument("matrix: entries must be [re, im] pairs");
      m(i, c) = complexd(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return m;
}

SimulationInput parse_simulation_config(const nlohmann::json& j) {
  require_known_fields(j,
                       {"M", "delta", "k", "t", "cascade_passes", "loss_prob", "seed",
                        "m_required", "channel", "epsilons", "output"},
                       "run configuration");
  SimulationInput input;
  input.config.signals = j.at("M").get<std::int64_t>();
  input.config.delta = j.at("delta").get<double>();
  input.config.k = j.at("k").get<std::int64_t>();
  input.config.t = j.value("t", 16);
  input.config.cascade_passes = j.value("cascade_passes", 4);
  input.config.loss_prob = j.value("loss_prob", 0.0);
  input.config.seed = j.value("seed", std::uint64_t{1});
  input.config.m_required = j.value("m_required", std::int64_t{0});

  const auto& ch = j.at("channel");
  require_known_fields(ch, {"kind", "p", "gamma", "fraction"}, "channel");
  const std::string kind = ch.at("kind").get<std::string>();
  if (kind == "ideal") input.channel = ChannelModel::ideal();
  else if (kind == "depolarizing")
    input.channel = ChannelModel::depolarizing(ch.at("p").get<double>());
  else if (kind == "amplitude_damping")
    input.channel = ChannelModel::amplitude_damping(ch.at("gamma").get<double>());
  else if (kind == "intercept_resend")
    input.channel = ChannelModel::intercept_resend(ch.at("fraction").get<double>());
  else throw std::invalid_argument("config: unknown channel kind '" + kind + "'");

  if (j.contains("epsilons")) {
    const auto& e = j.at("epsilons");
    require_known_fields(e, {"eps", "eps_ec", "eps_bar", "eps_bar_prime"}, "epsilons");
    input.budget.eps = e.value("eps", input.budget.eps);
    input.budget.eps_ec = e.value("eps_ec", std::exp2(-double(input.config.t)));
    input.budget.eps_bar = e.value("eps_bar", input.budget.eps_bar);
    input.budget.eps_bar_prime = e.value("eps_bar_prime", input.budget.eps_bar_prime);
  } else {
    input.budget.eps_ec = std::exp2(-double(input.config.t));
  }

  input.config.validate();
  input.budget.validate();
  return input;
}

std::string summary_line(const ProtocolRun& run) {
  std::ostringstream os;
  os << "flags=" << flag_name(run.f_sift) << "," << flag_name(run.f_pe) << ","
     << flag_name(run.f_ec) << " qber=" << run.qber_estimate << " leak=" << run.leak_ec_bits
     << " l=" << run.key_length << " M=" << run.signals;
  return os.str();
}

}  // namespace qkd
