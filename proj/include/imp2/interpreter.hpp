#pragma once

// Resource-bounded IMP2 interpreter.
//
// Memory starts all zero. readbit consumes the next input bit; reading an
// exhausted input ends the run as ReadPastEnd. Subtraction truncates at zero.
// Operands evaluate strictly left to right with no short-circuiting. Each
// statement dispatch and each expression node costs one step; a run that
// needs more than `threshold` steps, or builds a value wider than
// `max_value_bits`, is ThresholdSurpassed. Every time a while guard is about
// to be tested the triple (guard, memory, input cursor) is recorded; an exact
// repeat is LoopDetected.

#include "imp2/codec.hpp"
#include "imp2/natural.hpp"
#include "imp2/syntax.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace imp2 {

enum class Status {
  Halted,
  Extension,
  ReadPastEnd,
  LoopDetected,
  ThresholdSurpassed,
};

inline constexpr Status kAllStatuses[] = {
    Status::Halted, Status::Extension, Status::ReadPastEnd,
    Status::LoopDetected, Status::ThresholdSurpassed};

std::string_view status_name(Status s);
std::optional<Status> parse_status(std::string_view name);

struct ExecLimits {
  std::uint64_t threshold = 1'000'000;
  std::size_t max_value_bits = 65'536;
};

/// Nonzero locations only.
using Memory = std::map<BigInt, BigInt>;

struct ExecOutcome {
  Status status = Status::Halted;
  std::uint64_t steps_used = 0;
  std::uint64_t bits_consumed = 0;
  std::optional<BitString> output; // Halted only
  std::optional<Memory> memory;    // Halted and Extension
};

/// Concatenation of B_value over locations in increasing index order.
BitString extract_output(const Memory& memory);

/// A sentence lowered to a flat node array with dense memory slots. Only
/// literal locations exist in IMP2, so the slot set is static.
class Program {
public:
  explicit Program(const Sentence& s);

  std::size_t slot_count() const noexcept { return locations_.size(); }
  const std::vector<BigInt>& locations() const noexcept { return locations_; }

  enum class Op : std::uint8_t {
    Skip, Assign, While, Seq, If,
    True, False, Eq, Lt, And, Or, Not,
    ReadBit, Lit, Loc, Add, Sub, Mul,
  };

  struct Node {
    Op op;
    std::uint32_t a = 0; // child, slot or constant index
    std::uint32_t b = 0;
    std::uint32_t c = 0;
  };

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Natural>& constants() const noexcept { return constants_; }
  std::uint32_t root() const noexcept { return root_; }

private:
  std::uint32_t lower(const Sentence& s);
  std::uint32_t lower(const BoolExpr& e);
  std::uint32_t lower(const ArithExpr& e);
  std::uint32_t slot_of(const BigInt& location);

  std::vector<Node> nodes_;
  std::vector<Natural> constants_;
  std::vector<BigInt> locations_; // ascending; slot i holds locations_[i]
  std::map<BigInt, std::uint32_t> slot_index_;
  std::uint32_t root_ = 0;
};

ExecOutcome execute(const Program& p, const BitString& input,
                    const ExecLimits& limits);
ExecOutcome execute(const Sentence& s, const BitString& input,
                    const ExecLimits& limits);
ExecOutcome execute(const ProgramCode& code, const ExecLimits& limits);

/// How a run over a partially known input stream ended.
enum class Event {
  Terminated,
  NeedInput, // wanted a bit beyond the known prefix
  ReadPastEnd,
  LoopDetected,
  ThresholdSurpassed,
};

struct PartialRun {
  Event event = Event::Terminated;
  std::uint64_t steps_used = 0;
  std::uint64_t bits_consumed = 0;
  BitString output; // Terminated only
};

/// Runs `p` with `known` as the first input bits. When `input_length` is set
/// the stream has exactly that many bits and reading past it is ReadPastEnd;
/// a read beyond `known` but inside the stream reports NeedInput. Every
/// input sharing the known prefix behaves identically up to that event.
PartialRun run_prefix(const Program& p, const BitString& known,
                      std::optional<std::size_t> input_length,
                      const ExecLimits& limits);

} // namespace imp2
