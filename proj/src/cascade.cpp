#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "qkd/protocol.hpp"

namespace qkd {

namespace {

constexpr std::uint64_t kTagCascadeShuffle = 0x58;

struct Pass {
  std::vector<std::int64_t> perm;      // position in pass order -> string index
  std::vector<std::int64_t> slot_of;   // string index -> position in pass order
  std::int64_t block_size = 0;
  std::vector<std::uint8_t> alice_parity;
  std::vector<std::uint8_t> bob_parity;

  std::int64_t num_blocks() const {
    return (static_cast<std::int64_t>(perm.size()) + block_size - 1) / block_size;
  }
  std::pair<std::int64_t, std::int64_t> block_range(std::int64_t blk) const {
    const std::int64_t lo = blk * block_size;
    const std::int64_t hi = std::min(lo + block_size, static_cast<std::int64_t>(perm.size()));
    return {lo, hi};
  }
};

std::uint8_t range_parity(const Bits& s, const Pass& pass, std::int64_t lo, std::int64_t hi) {
  std::uint8_t p = 0;
  for (std::int64_t i = lo; i < hi; ++i)
    p ^= s[static_cast<std::size_t>(pass.perm[static_cast<std::size_t>(i)])];
  return p;
}

}  // namespace

ReconcileResult reconcile_cascade(const Bits& x_a, const Bits& x_b, double qber, int passes,
                                  Rng& rng) {
  if (x_a.size() != x_b.size()) throw std::invalid_argument("reconciliation: length mismatch");
  ReconcileResult out;
  out.corrected = x_b;
  const std::int64_t n = static_cast<std::int64_t>(x_a.size());
  if (n == 0 || qber <= 0.0 || qber >= 0.5) return out;

  const std::int64_t first_block =
      std::min<std::int64_t>(n, static_cast<std::int64_t>(std::ceil(0.73 / qber)));

  Rng shuffles = rng.fork(kTagCascadeShuffle);
  std::vector<Pass> built;
  built.reserve(static_cast<std::size_t>(passes));
  std::deque<std::pair<std::size_t, std::int64_t>> odd_blocks;

  // Binary search inside a mismatched block: Alice announces the parity
  // of the left half at each level, one bit per level, until a single
  // differing position remains.
  auto locate_and_fix = [&](std::size_t pass_idx, std::int64_t blk) {
    const Pass& pass = built[pass_idx];
    auto [lo, hi] = pass.block_range(blk);
    while (hi - lo > 1) {
      const std::int64_t mid = lo + (hi - lo + 1) / 2;
      out.leak_bits += 1;
      const std::uint8_t alice_left = range_parity(x_a, pass, lo, mid);
      const std::uint8_t bob_left = range_parity(out.corrected, pass, lo, mid);
      if (alice_left != bob_left) hi = mid;
      else lo = mid;
    }
    const std::int64_t fixed = pass.perm[static_cast<std::size_t>(lo)];
    out.corrected[static_cast<std::size_t>(fixed)] ^= 1;

    // The flip toggles the parity of the containing block in every pass
    // built so far; freshly mismatched blocks join the queue.
    for (std::size_t p = 0; p < built.size(); ++p) {
      Pass& other = built[p];
      const std::int64_t b = other.slot_of[static_cast<std::size_t>(fixed)] / other.block_size;
      other.bob_parity[static_cast<std::size_t>(b)] ^= 1;
      if (other.bob_parity[static_cast<std::size_t>(b)] !=
          other.alice_parity[static_cast<std::size_t>(b)])
        odd_blocks.emplace_back(p, b);
    }
  };

  auto drain = [&]() {
    while (!odd_blocks.empty()) {
      auto [p, b] = odd_blocks.front();
      odd_blocks.pop_front();
      if (built[p].alice_parity[static_cast<std::size_t>(b)] ==
          built[p].bob_parity[static_cast<std::size_t>(b)])
        continue;  // already fixed by an earlier cascade step
      locate_and_fix(p, b);
    }
  };

  std::int64_t block_size = first_block;
  for (int p = 0; p < passes; ++p) {
    Pass pass;
    pass.block_size = block_size;
    if (block_size < n) block_size = std::min<std::int64_t>(n, block_size * 2);
    pass.perm.resize(static_cast<std::size_t>(n));
    std::iota(pass.perm.begin(), pass.perm.end(), std::int64_t{0});
    for (std::size_t i = static_cast<std::size_t>(n); i > 1; --i)
      std::swap(pass.perm[i - 1], pass.perm[shuffles.below(i)]);
    pass.slot_of.resize(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
      pass.slot_of[static_cast<std::size_t>(pass.perm[static_cast<std::size_t>(i)])] = i;

    const std::int64_t blocks = (n + pass.block_size - 1) / pass.block_size;
    pass.alice_parity.resize(static_cast<std::size_t>(blocks));
    pass.bob_parity.resize(static_cast<std::size_t>(blocks));
    built.push_back(std::move(pass));
    Pass& cur = built.back();

    // Alice announces one parity per top-level block.
    out.leak_bits += blocks;
    for (std::int64_t b = 0; b < blocks; ++b) {
      auto [lo, hi] = cur.block_range(b);
      cur.alice_parity[static_cast<std::size_t>(b)] = range_parity(x_a, cur, lo, hi);
      cur.bob_parity[static_cast<std::size_t>(b)] = range_parity(out.corrected, cur, lo, hi);
      if (cur.alice_parity[static_cast<std::size_t>(b)] !=
          cur.bob_parity[static_cast<std::size_t>(b)])
        odd_blocks.emplace_back(built.size() - 1, b);
    }
    drain();
  }
  return out;
}

}  // namespace qkd
