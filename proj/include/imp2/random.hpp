#pragma once

// Portable bounded draws. std::uniform_int_distribution and std::shuffle are
// implementation-defined, so seeded results would differ across standard
// libraries; these do not.

#include "imp2/bigint.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace imp2 {

using Rng = std::mt19937_64;

/// Uniform in [0, bound); bound must be positive.
std::uint64_t uniform_below(std::uint64_t bound, Rng& rng);
BigInt uniform_below(const BigInt& bound, Rng& rng);

template <class T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    auto j = static_cast<std::size_t>(uniform_below(std::uint64_t{i}, rng));
    std::swap(items[i - 1], items[j]);
  }
}

} // namespace imp2
