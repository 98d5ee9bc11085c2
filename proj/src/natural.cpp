#include "imp2/natural.hpp"

#include "imp2/codec.hpp"

#include <bit>

namespace imp2 {

Natural::Natural(const BigInt& v) {
  if (fits_u64(v))
    small_ = static_cast<std::uint64_t>(v);
  else
    big_ = std::make_unique<BigInt>(v);
}

Natural::Natural(const Natural& other) : small_(other.small_) {
  if (other.big_)
    big_ = std::make_unique<BigInt>(*other.big_);
}

Natural& Natural::operator=(const Natural& other) {
  if (this != &other) {
    small_ = other.small_;
    big_ = other.big_ ? std::make_unique<BigInt>(*other.big_) : nullptr;
  }
  return *this;
}

Natural Natural::from_big(BigInt v) {
  Natural n;
  if (fits_u64(v))
    n.small_ = static_cast<std::uint64_t>(v);
  else
    n.big_ = std::make_unique<BigInt>(std::move(v));
  return n;
}

BigInt Natural::to_big() const { return big_ ? *big_ : BigInt(small_); }

std::size_t Natural::bit_length() const noexcept {
  if (big_)
    return imp2::bit_length(*big_);
  return static_cast<std::size_t>(std::bit_width(small_));
}

std::uint64_t Natural::hash() const noexcept {
  if (!big_)
    return small_ * 0x9E3779B97F4A7C15ULL;
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (auto it = big_->backend().limbs(),
            end = it + big_->backend().size();
       it != end; ++it) {
    h ^= static_cast<std::uint64_t>(*it);
    h *= 0x100000001B3ULL;
  }
  return h;
}

Natural operator+(const Natural& a, const Natural& b) {
  if (a.is_small() && b.is_small()) {
    std::uint64_t r;
    if (!__builtin_add_overflow(a.small_, b.small_, &r))
      return Natural(r);
  }
  return Natural::from_big(a.to_big() + b.to_big());
}

Natural monus(const Natural& a, const Natural& b) {
  if (a.is_small() && b.is_small())
    return Natural(a.small_ > b.small_ ? a.small_ - b.small_ : 0);
  if (a <= b)
    return Natural();
  return Natural::from_big(a.to_big() - b.to_big());
}

Natural operator*(const Natural& a, const Natural& b) {
  if (a.is_small() && b.is_small()) {
    std::uint64_t r;
    if (!__builtin_mul_overflow(a.small_, b.small_, &r))
      return Natural(r);
  }
  return Natural::from_big(a.to_big() * b.to_big());
}

bool operator==(const Natural& a, const Natural& b) noexcept {
  if (a.is_small() != b.is_small())
    return false; // representations are normalised
  if (a.is_small())
    return a.small_ == b.small_;
  return *a.big_ == *b.big_;
}

std::strong_ordering operator<=>(const Natural& a, const Natural& b) noexcept {
  if (a.is_small() && b.is_small())
    return a.small_ <=> b.small_;
  if (a.is_small())
    return std::strong_ordering::less;
  if (b.is_small())
    return std::strong_ordering::greater;
  int c = a.big_->compare(*b.big_);
  return c < 0 ? std::strong_ordering::less
               : c > 0 ? std::strong_ordering::greater
                       : std::strong_ordering::equal;
}

void append_binstring(const Natural& v, BitString& out) {
  // B_v is the binary numeral of v + 1 without its leading one.
  if (v.is_small() && v.small() != ~std::uint64_t{0}) {
    std::uint64_t w = v.small() + 1;
    int width = std::bit_width(w) - 1;
    for (int i = width - 1; i >= 0; --i)
      out.push_back((w >> i) & 1U);
    return;
  }
  BigInt w = v.to_big() + 1;
  std::size_t width = bit_length(w) - 1;
  for (std::size_t i = width; i-- > 0;)
    out.push_back(boost::multiprecision::bit_test(w, static_cast<unsigned>(i)));
}

} // namespace imp2
