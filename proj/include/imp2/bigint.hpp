#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace imp2 {

using BigInt = boost::multiprecision::cpp_int;

/// Parses a non-negative decimal numeral. Throws InvalidArgument.
BigInt parse_decimal(std::string_view text);

std::string to_decimal(const BigInt& value);

/// floor(sqrt(value)) for value >= 0.
BigInt isqrt(const BigInt& value);

/// Binomial coefficient C(n, k); zero when k > n.
BigInt binomial(const BigInt& n, unsigned k);

/// Number of significant bits; 0 for zero.
std::size_t bit_length(const BigInt& value);

bool fits_u64(const BigInt& value);

} // namespace imp2
