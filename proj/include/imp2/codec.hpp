#pragma once

// Binary strings, the self-delimiting sentence code and the length-stratified
// program space.
//
// Strings are enumerated length-increasing, lexicographic inside a length:
// (eps, 0), (0, 1), (1, 2), (00, 3), ... A program is the two-part code
// <n, y> = 1^|B_n| 0 B_n y.

#include "imp2/bigint.hpp"
#include "imp2/enumeration.hpp"
#include "imp2/random.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace imp2 {

/// Finite sequence of bits, stored as ASCII '0'/'1'.
class BitString {
public:
  BitString() = default;

  /// Throws InvalidArgument on characters other than '0' and '1'.
  static BitString from_text(std::string_view text);
  /// The `width` low bits of `value`, most significant first.
  static BitString from_bits(std::uint64_t value, std::size_t width);

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  bool operator[](std::size_t i) const noexcept { return bits_[i] == '1'; }

  void push_back(bool bit) { bits_.push_back(bit ? '1' : '0'); }
  void append(const BitString& other) { bits_ += other.bits_; }
  void pop_back() { bits_.pop_back(); }

  BitString substr(std::size_t pos, std::size_t len = std::string::npos) const;
  bool starts_with(const BitString& prefix) const noexcept;

  const std::string& str() const noexcept { return bits_; }

  friend bool operator==(const BitString&, const BitString&) = default;
  friend std::strong_ordering operator<=>(const BitString&,
                                          const BitString&) = default;

private:
  std::string bits_;
};

/// Length first, then lexicographic: the order of binstring_rank.
struct ShortLex {
  bool operator()(const BitString& a, const BitString& b) const noexcept {
    if (a.size() != b.size())
      return a.size() < b.size();
    return a < b;
  }
};

BitString binstring_unrank(const EnumIndex& n);
BitString binstring_unrank(std::uint64_t n);
EnumIndex binstring_rank(const BitString& s);

struct ProgramCode {
  EnumIndex sentence_index;
  BitString input;

  friend bool operator==(const ProgramCode&, const ProgramCode&) = default;
};

struct DecodedProgram {
  ProgramCode program;
  std::size_t prefix_length = 0; // bits taken by the sentence code
};

BitString encode_program(const ProgramCode& p);

/// Parses the self-delimiting prefix; every remaining bit is input.
/// Throws DecodeError when the input ends inside the prefix.
DecodedProgram decode_program(const BitString& bits);

/// All programs with code length m whose sentence code takes k bits.
struct Stratum {
  unsigned code_length = 0;
  unsigned prefix_length = 0;
  BigInt sentence_count; // 2^((k-1)/2)
  BigInt input_count;    // 2^(m-k)

  BigInt size() const { return sentence_count * input_count; }
  /// Smallest sentence index whose code takes prefix_length bits.
  EnumIndex first_sentence() const { return sentence_count - 1; }
};

/// Throws InvalidArgument unless k is odd and 1 <= k <= m.
Stratum make_stratum(unsigned m, unsigned k);

/// Strata of lengths 1..max_len, m ascending then k ascending.
std::vector<Stratum> strata(unsigned max_len);

/// Number of programs with code length 1..max_len, exactly.
BigInt count_programs(unsigned max_len);

/// Walks the flattened index range [lo, hi) of one stratum:
/// i -> (first_sentence + i / input_count, i-th input of length m-k).
class StratumIterator {
public:
  /// Throws InvalidArgument when the range exceeds the stratum.
  StratumIterator(unsigned m, unsigned k, const BigInt& lo, const BigInt& hi);

  /// Writes the next program into `out`; false once the range is exhausted.
  bool next(ProgramCode& out);

private:
  Stratum stratum_;
  BigInt cursor_;
  BigInt end_;
};

/// Uniform over all programs of length <= max_len (max_len >= 1).
ProgramCode sample_program(unsigned max_len, Rng& rng);

} // namespace imp2
