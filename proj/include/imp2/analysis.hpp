#pragma once

// Output-frequency distribution, CTM and SPF tables, rank correlations with
// permutation significance, and report files.

#include "imp2/codec.hpp"
#include "imp2/runner.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace imp2 {

struct TableRow {
  BitString output;
  std::uint64_t halt_count = 0;
  double frequency = 0.0; // halt_count / denominator
  double ctm = 0.0;       // -log2 frequency
  unsigned spf = 0;
};

struct ComplexityTable {
  std::vector<TableRow> rows; // ShortLex by output
  std::uint64_t denominator = 0;

  const TableRow* find(const BitString& s) const;
};

/// Throws InvalidArgument when the aggregate has no Halted program.
ComplexityTable build_table(const RunAggregate& agg);

/// Largest L such that every string of length <= L was produced; nullopt
/// when the empty string itself is missing.
std::optional<unsigned> complete_output_length(const ComplexityTable& t);
unsigned largest_output_length(const ComplexityTable& t);

enum class ValueKind { Frequency, Ctm };

struct ExternalDistribution {
  std::string name;
  ValueKind kind = ValueKind::Frequency;
  std::vector<std::pair<BitString, double>> rows;
};

/// CSV with header `string,frequency` or `string,ctm`. Throws IoError.
ExternalDistribution read_external(std::istream& in, std::string name);
ExternalDistribution load_external(const std::filesystem::path& path,
                                   std::string name);

/// Per-string complexity values keyed by string.
using Column = std::map<BitString, double, ShortLex>;

Column ctm_column(const ComplexityTable& t);
Column spf_column(const ComplexityTable& t);
/// Frequencies are normalised over all rows and mapped to -log2.
Column ctm_column(const ExternalDistribution& d);

/// Ranks 1..n; tied values share the mean of their rank block.
std::vector<double> average_ranks(std::span<const double> values);

/// Throw UndefinedCorrelation for n < 2 or zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);
double spearman(std::span<const double> xs, std::span<const double> ys);

enum class Method { Spearman, Pearson };
std::string_view method_name(Method m);

struct Scope {
  enum class Kind { Global, Length, UpTo };
  Kind kind = Kind::Global;
  unsigned length = 0;

  bool admits(const BitString& s) const noexcept;
  std::string label() const;

  static Scope global() { return {}; }
  static Scope exactly(unsigned l) { return {Kind::Length, l}; }
  static Scope up_to(unsigned l) { return {Kind::UpTo, l}; }
};

struct CorrelationReport {
  std::string name; // e.g. "ctm_vs_spf", "imp2_vs_d42"
  Method method = Method::Spearman;
  Scope scope;
  std::size_t n = 0;
  std::optional<double> coefficient; // nullopt: undefined
  std::optional<double> p_value;
  std::uint32_t permutations = 0;
  std::uint64_t rng_seed = 0;
  std::string note; // why the coefficient is undefined
};

/// One-sided: p = (1 + #{permuted >= observed}) / (permutations + 1).
/// Throws UndefinedCorrelation.
CorrelationReport permutation_test(std::span<const double> xs,
                                   std::span<const double> ys, Method method,
                                   std::uint32_t permutations,
                                   std::uint64_t seed);

struct JoinedPairs {
  std::vector<BitString> strings;
  std::vector<double> a;
  std::vector<double> b;
};

JoinedPairs join(const Column& a, const Column& b, const Scope& scope);

/// Correlation over the joined columns. Throws UndefinedCorrelation when
/// fewer than two strings are shared or a side is constant.
CorrelationReport correlate(const Column& a, const Column& b,
                            const Scope& scope, Method method,
                            std::uint32_t permutations, std::uint64_t seed);

/// Like correlate() but records an undefined result instead of throwing.
CorrelationReport try_correlate(std::string name, const Column& a,
                                const Column& b, const Scope& scope,
                                Method method, std::uint32_t permutations,
                                std::uint64_t seed);

/// "very high" [0,0.001), "high" [0.001,0.01), "low" [0.01,0.1),
/// "very low" otherwise.
std::string_view significance_band(double p_value);

struct Scatter {
  std::string name;
  JoinedPairs pairs;
};

struct Report {
  const RunAggregate* aggregate = nullptr;
  std::optional<ComplexityTable> table;
  std::vector<CorrelationReport> correlations;
  std::vector<Scatter> scatters;
};

struct AnalysisOptions {
  std::uint32_t permutations = 20'000;
  std::uint64_t seed = 0;
  std::vector<ExternalDistribution> externals;
};

/// Builds the table and the standard correlation set: CTM vs SPF (global,
/// per length, up to the complete output length) and the table against each
/// external distribution.
Report analyze(const RunAggregate& agg, const AnalysisOptions& options);

/// Writes summary.csv, statuses.csv, correlations.csv, ctm_spf.csv and
/// scatter_<name>.csv for whatever the report holds, plus manifest.txt
/// listing them. Throws IoError.
void write_report(const Report& report, const std::filesystem::path& dir);

} // namespace imp2
