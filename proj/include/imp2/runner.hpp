#pragma once

// Exhaustive sweeps of the program space and their mergeable aggregates.

#include "imp2/codec.hpp"
#include "imp2/interpreter.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace imp2 {

inline constexpr std::string_view kToolVersion = "1.0.0";

/// Sweeps use 64-bit counters and indices; 2^60 programs is far beyond any
/// feasible run.
inline constexpr unsigned kMaxSweepLength = 60;

struct PartitionSpec {
  std::uint32_t index = 0;
  std::uint32_t count = 1;
};

/// Parses "i/k"; throws InvalidArgument.
PartitionSpec parse_partition(std::string_view text);

/// [lo, hi) of the flattened index space of a stratum with `size` programs
/// owned by `part`. Contiguous; the last range takes the remainder.
std::pair<std::uint64_t, std::uint64_t>
partition_range(std::uint64_t size, const PartitionSpec& part);

struct OutputStats {
  std::uint64_t halt_count = 0;
  unsigned spf_length = 0;
  BitString first_program;

  friend bool operator==(const OutputStats&, const OutputStats&) = default;
};

struct RunMetadata {
  unsigned max_len = 0;
  std::uint64_t threshold = 0;
  std::size_t max_value_bits = ExecLimits{}.max_value_bits;
  std::uint32_t num_partitions = 1;
  std::vector<std::uint32_t> partitions{0}; // covered, ascending
  std::string seed = "none";
  std::string version{kToolVersion};
  std::string invocation;

  friend bool operator==(const RunMetadata&, const RunMetadata&) = default;
};

class RunAggregate {
public:
  RunMetadata metadata;
  std::map<BitString, OutputStats, ShortLex> outputs;
  std::array<std::uint64_t, std::size(kAllStatuses)> status_tallies{};

  std::uint64_t total_programs() const noexcept;
  std::uint64_t tally(Status s) const noexcept {
    return status_tallies[static_cast<std::size_t>(s)];
  }

  void add_status(Status s, std::uint64_t count) {
    status_tallies[static_cast<std::size_t>(s)] += count;
  }
  /// Counts one Halted program. Programs compare in enumeration order,
  /// which for code bit strings is ShortLex.
  void add_halted(const BitString& output, const BitString& program);

  /// Adds counts of `other` without checking metadata.
  void absorb(const RunAggregate& other);

  friend bool operator==(const RunAggregate&, const RunAggregate&) = default;
};

struct SweepOptions {
  unsigned max_len = 0;
  ExecLimits limits;
  PartitionSpec partition;
  unsigned threads = 1;
  std::string seed = "none";
  std::string invocation;
  /// Completed blocks are persisted here and skipped on a rerun.
  std::optional<std::filesystem::path> checkpoint_dir;
  /// Called once per Halted program with (program bits, output); serialized.
  std::function<void(const BitString&, const BitString&)> on_halted;
  /// Percent-complete lines go here when set.
  std::ostream* progress = nullptr;
};

/// Sweeps every program of code length 1..max_len in the partition.
/// Programs sharing a sentence are explored as a tree over the input bits
/// they actually read, so each distinct behaviour executes once.
RunAggregate sweep(const SweepOptions& options);

/// Executes every program of the partition one by one. Same result as
/// sweep(); kept as the independent reference.
RunAggregate sweep_reference(const SweepOptions& options);

/// Combines disjoint partial sweeps covering every partition. Throws
/// MergeError on metadata mismatch, overlap or missing partitions.
RunAggregate merge(std::span<const RunAggregate> parts);

void write_results(const RunAggregate& agg, std::ostream& out);
/// The CSV body only (outputs and statuses), without metadata.
void write_results_body(const RunAggregate& agg, std::ostream& out);
/// Throws IoError on malformed input.
RunAggregate read_results(std::istream& in);

void save_results(const RunAggregate& agg, const std::filesystem::path& path);
RunAggregate load_results(const std::filesystem::path& path);

} // namespace imp2
