#pragma once

#include <cstdint>
#include <vector>

#include "qkd/rng.hpp"

namespace qkd {

// Bit strings are plain 0/1 bytes; packing happens only inside the hash.
using Bits = std::vector<std::uint8_t>;

// Two-universal GF(2) hash from a Toeplitz matrix T[i][j] = d[i - j + n_in - 1]
// over a diagonal seed d of n_in + n_out - 1 bits: distinct inputs
// collide with probability exactly 2^-n_out over the seed choice.
class ToeplitzHash {
 public:
  ToeplitzHash(std::size_t n_in, std::size_t n_out, Bits diagonal_seed);

  static ToeplitzHash random(std::size_t n_in, std::size_t n_out, Rng& rng);

  std::size_t n_in() const { return n_in_; }
  std::size_t n_out() const { return n_out_; }
  std::size_t seed_bits() const { return n_in_ + n_out_ - 1; }
  const Bits& diagonal_seed() const { return seed_; }

  Bits apply(const Bits& input) const;

 private:
  std::size_t n_in_;
  std::size_t n_out_;
  Bits seed_;
  // Seed reversed and packed 64 bits per word, so row i of T is the
  // window starting at bit offset n_out - 1 - i.
  std::vector<std::uint64_t> packed_;
};

}  // namespace qkd
