#pragma once

#include <string>

#include <json.hpp>

#include "qkd/entropy.hpp"
#include "qkd/protocol.hpp"
#include "qkd/security.hpp"

namespace qkd {

// Bit strings travel as hex, packed MSB-first within each nibble; a
// separate length field disambiguates trailing padding.
std::string bits_to_hex(const Bits& bits);
Bits hex_to_bits(const std::string& hex, std::size_t nbits);

// Outcome strings use one character per signal: '0', '1' or '-'.
std::string outcomes_to_string(const std::vector<std::uint8_t>& outcomes);

// Index sets serialize as hex bitmasks over [0, universe).
std::string indices_to_hex(const std::vector<std::int64_t>& indices, std::size_t universe);

std::string flag_name(Flag f);

nlohmann::json to_json(const ProtocolRun& run);
nlohmann::json to_json(const RateReport& report);

// Matrices as nested arrays of [re, im] pairs.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

struct SimulationInput {
  ProtocolConfig config;
  ChannelModel channel;
  SecurityBudget budget;
};

// Parses the run-configuration document; unknown fields are rejected.
SimulationInput parse_simulation_config(const nlohmann::json& j);

std::string summary_line(const ProtocolRun& run);

}  // namespace qkd
