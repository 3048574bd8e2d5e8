#include "qkd/toeplitz.hpp"

#include <bit>
#include <stdexcept>

namespace qkd {

namespace {

std::vector<std::uint64_t> pack_bits(const Bits& bits) {
  std::vector<std::uint64_t> words((bits.size() + 63) / 64 + 1, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) words[i / 64] |= std::uint64_t{1} << (i % 64);
  return words;
}

// 64 bits of `words` starting at bit offset `off`.
inline std::uint64_t window(const std::vector<std::uint64_t>& words, std::size_t off) {
  const std::size_t w = off / 64;
  const std::size_t r = off % 64;
  std::uint64_t lo = words[w] >> r;
  if (r != 0 && w + 1 < words.size()) lo |= words[w + 1] << (64 - r);
  return lo;
}

}  // namespace

ToeplitzHash::ToeplitzHash(std::size_t n_in, std::size_t n_out, Bits diagonal_seed)
    : n_in_(n_in), n_out_(n_out), seed_(std::move(diagonal_seed)) {
  if (n_out_ > n_in_) throw std::invalid_argument("toeplitz: n_out above n_in");
  if (n_in_ == 0) throw std::invalid_argument("toeplitz: empty input length");
  if (seed_.size() != n_in_ + n_out_ - 1)
    throw std::invalid_argument("toeplitz: seed length must be n_in + n_out - 1");
  Bits reversed(seed_.rbegin(), seed_.rend());
  packed_ = pack_bits(reversed);
}

ToeplitzHash ToeplitzHash::random(std::size_t n_in, std::size_t n_out, Rng& rng) {
  Bits seed(n_in + n_out - 1);
  for (auto& b : seed) b = static_cast<std::uint8_t>(rng.bit());
  return ToeplitzHash(n_in, n_out, std::move(seed));
}

Bits ToeplitzHash::apply(const Bits& input) const {
  if (input.size() != n_in_) throw std::invalid_argument("toeplitz: input length mismatch");
  const std::vector<std::uint64_t> x = pack_bits(input);
  const std::size_t nwords = (n_in_ + 63) / 64;
  const std::uint64_t tail_mask =
      (n_in_ % 64 == 0) ? ~std::uint64_t{0} : ((std::uint64_t{1} << (n_in_ % 64)) - 1);

  Bits out(n_out_);
  for (std::size_t i = 0; i < n_out_; ++i) {
    const std::size_t off = n_out_ - 1 - i;
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < nwords; ++w) {
      std::uint64_t row = window(packed_, off + 64 * w);
      if (w + 1 == nwords) row &= tail_mask;
      acc ^= row & x[w];
    }
    out[i] = static_cast<std::uint8_t>(std::popcount(acc) & 1);
  }
  return out;
}

}  // namespace qkd
