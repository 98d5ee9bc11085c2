#include "imp2/bigint.hpp"

#include "imp2/error.hpp"

#include <boost/multiprecision/integer.hpp>

#include <limits>

namespace imp2 {

BigInt parse_decimal(std::string_view text) {
  if (text.empty())
    throw InvalidArgument("expected a decimal numeral, got an empty string");
  BigInt value = 0;
  for (char c : text) {
    if (c < '0' || c > '9')
      throw InvalidArgument("not a decimal numeral: '" + std::string(text) +
                            "'");
    value = value * 10 + (c - '0');
  }
  return value;
}

std::string to_decimal(const BigInt& value) { return value.str(); }

BigInt isqrt(const BigInt& value) {
  if (value < 0)
    throw InvalidArgument("isqrt of a negative number");
  return boost::multiprecision::sqrt(value);
}

BigInt binomial(const BigInt& n, unsigned k) {
  if (n < 0 || n < k)
    return 0;
  BigInt result = 1;
  for (unsigned i = 0; i < k; ++i) {
    result *= n - i;
    result /= i + 1;
  }
  return result;
}

std::size_t bit_length(const BigInt& value) {
  if (value == 0)
    return 0;
  return boost::multiprecision::msb(value) + 1;
}

bool fits_u64(const BigInt& value) {
  return value >= 0 && value <= std::numeric_limits<std::uint64_t>::max();
}

} // namespace imp2
