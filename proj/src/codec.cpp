#include "imp2/codec.hpp"

#include "imp2/error.hpp"

#include <bit>

namespace imp2 {

namespace {

void append_low_bits(const BigInt& value, std::size_t width, BitString& out) {
  for (std::size_t i = width; i-- > 0;)
    out.push_back(boost::multiprecision::bit_test(value, static_cast<unsigned>(i)));
}

BigInt pow2(unsigned e) { return BigInt(1) << e; }

} // namespace

BitString BitString::from_text(std::string_view text) {
  BitString s;
  for (char c : text) {
    if (c != '0' && c != '1')
      throw InvalidArgument("not a bit string: '" + std::string(text) + "'");
    s.bits_.push_back(c);
  }
  return s;
}

BitString BitString::from_bits(std::uint64_t value, std::size_t width) {
  BitString s;
  s.bits_.resize(width);
  for (std::size_t i = 0; i < width; ++i)
    s.bits_[width - 1 - i] = (i < 64 && ((value >> i) & 1U)) ? '1' : '0';
  return s;
}

BitString BitString::substr(std::size_t pos, std::size_t len) const {
  BitString s;
  s.bits_ = bits_.substr(pos, len);
  return s;
}

bool BitString::starts_with(const BitString& prefix) const noexcept {
  return bits_.starts_with(prefix.bits_);
}

BitString binstring_unrank(const EnumIndex& n) {
  if (n < 0)
    throw InvalidArgument("negative index");
  BigInt w = n + 1;
  BitString out;
  append_low_bits(w, bit_length(w) - 1, out);
  return out;
}

BitString binstring_unrank(std::uint64_t n) {
  if (n == ~std::uint64_t{0})
    return binstring_unrank(EnumIndex(n));
  std::uint64_t w = n + 1;
  return BitString::from_bits(w, static_cast<std::size_t>(std::bit_width(w) - 1));
}

EnumIndex binstring_rank(const BitString& s) {
  BigInt w = 1;
  for (std::size_t i = 0; i < s.size(); ++i)
    w = (w << 1) | (s[i] ? 1 : 0);
  return w - 1;
}

BitString encode_program(const ProgramCode& p) {
  BitString index = binstring_unrank(p.sentence_index);
  BitString out;
  for (std::size_t i = 0; i < index.size(); ++i)
    out.push_back(true);
  out.push_back(false);
  out.append(index);
  out.append(p.input);
  return out;
}

DecodedProgram decode_program(const BitString& bits) {
  std::size_t ones = 0;
  while (ones < bits.size() && bits[ones])
    ++ones;
  if (ones == bits.size())
    throw DecodeError("malformed program prefix: input ended after " +
                      std::to_string(ones) + " leading ones, before the '0'");
  const std::size_t prefix = 2 * ones + 1;
  if (bits.size() < prefix)
    throw DecodeError("malformed program prefix: needs " +
                      std::to_string(prefix) + " bits, input has " +
                      std::to_string(bits.size()));
  DecodedProgram out;
  out.program.sentence_index = binstring_rank(bits.substr(ones + 1, ones));
  out.program.input = bits.substr(prefix);
  out.prefix_length = prefix;
  return out;
}

Stratum make_stratum(unsigned m, unsigned k) {
  if (k % 2 == 0 || k < 1 || k > m)
    throw InvalidArgument("no stratum with code length " + std::to_string(m) +
                          " and prefix length " + std::to_string(k));
  return Stratum{m, k, pow2((k - 1) / 2), pow2(m - k)};
}

std::vector<Stratum> strata(unsigned max_len) {
  std::vector<Stratum> out;
  for (unsigned m = 1; m <= max_len; ++m)
    for (unsigned k = 1; k <= m; k += 2)
      out.push_back(make_stratum(m, k));
  return out;
}

BigInt count_programs(unsigned max_len) {
  BigInt total = 0;
  for (const auto& s : strata(max_len))
    total += s.size();
  return total;
}

StratumIterator::StratumIterator(unsigned m, unsigned k, const BigInt& lo,
                                 const BigInt& hi)
    : stratum_(make_stratum(m, k)), cursor_(lo), end_(hi) {
  if (lo < 0 || lo > hi || hi > stratum_.size())
    throw InvalidArgument("range [" + to_decimal(lo) + ", " + to_decimal(hi) +
                          ") exceeds the stratum of size " +
                          to_decimal(stratum_.size()));
}

bool StratumIterator::next(ProgramCode& out) {
  if (cursor_ >= end_)
    return false;
  BigInt sentence, input;
  boost::multiprecision::divide_qr(cursor_, stratum_.input_count, sentence,
                                   input);
  out.sentence_index = stratum_.first_sentence() + sentence;
  out.input = BitString();
  append_low_bits(input, stratum_.code_length - stratum_.prefix_length,
                  out.input);
  ++cursor_;
  return true;
}

ProgramCode sample_program(unsigned max_len, Rng& rng) {
  if (max_len < 1)
    throw InvalidArgument("sampling needs a maximum length of at least 1");
  BigInt u = uniform_below(count_programs(max_len), rng);
  for (const auto& s : strata(max_len)) {
    BigInt size = s.size();
    if (u < size) {
      StratumIterator it(s.code_length, s.prefix_length, u, u + 1);
      ProgramCode p;
      it.next(p);
      return p;
    }
    u -= size;
  }
  throw InvalidArgument("sample outside the program space"); // unreachable
}

} // namespace imp2
