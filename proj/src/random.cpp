#include "imp2/random.hpp"

#include "imp2/error.hpp"

namespace imp2 {

std::uint64_t uniform_below(std::uint64_t bound, Rng& rng) {
  if (bound == 0)
    throw InvalidArgument("uniform_below needs a positive bound");
  // Reject the low residue class so every result is equally likely.
  const std::uint64_t floor = (0 - bound) % bound;
  for (;;) {
    std::uint64_t r = rng();
    if (r >= floor)
      return r % bound;
  }
}

BigInt uniform_below(const BigInt& bound, Rng& rng) {
  if (bound <= 0)
    throw InvalidArgument("uniform_below needs a positive bound");
  if (fits_u64(bound))
    return uniform_below(static_cast<std::uint64_t>(bound), rng);
  const std::size_t bits = bit_length(bound - 1);
  for (;;) {
    BigInt r = 0;
    for (std::size_t have = 0; have < bits; have += 64)
      r = (r << 64) | BigInt(rng());
    r >>= ((bits + 63) / 64) * 64 - bits;
    if (r < bound)
      return r;
  }
}

} // namespace imp2
