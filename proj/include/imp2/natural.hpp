#pragma once

#include "imp2/bigint.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>

namespace imp2 {

class BitString;

/// Non-negative integer with an inline 64-bit representation that promotes
/// to BigInt on overflow and demotes again when the value fits.
class Natural {
public:
  Natural() noexcept = default;
  Natural(std::uint64_t v) noexcept : small_(v) {} // NOLINT(implicit)
  explicit Natural(const BigInt& v);

  Natural(const Natural& other);
  Natural& operator=(const Natural& other);
  Natural(Natural&&) noexcept = default;
  Natural& operator=(Natural&&) noexcept = default;

  bool is_small() const noexcept { return !big_; }
  std::uint64_t small() const noexcept { return small_; }
  bool is_zero() const noexcept { return !big_ && small_ == 0; }

  BigInt to_big() const;
  std::size_t bit_length() const noexcept;
  std::uint64_t hash() const noexcept;

  friend Natural operator+(const Natural& a, const Natural& b);
  /// Truncated subtraction: max(0, a - b).
  friend Natural monus(const Natural& a, const Natural& b);
  friend Natural operator*(const Natural& a, const Natural& b);

  friend bool operator==(const Natural& a, const Natural& b) noexcept;
  friend std::strong_ordering operator<=>(const Natural& a,
                                          const Natural& b) noexcept;

private:
  static Natural from_big(BigInt v);

  std::uint64_t small_ = 0;
  std::unique_ptr<BigInt> big_; // set only when the value exceeds 64 bits
};

/// Appends B_v, the v-th string of the length-increasing enumeration.
void append_binstring(const Natural& v, BitString& out);

} // namespace imp2
