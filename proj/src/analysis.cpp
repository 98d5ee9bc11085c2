#include "imp2/analysis.hpp"

#include "imp2/error.hpp"
#include "imp2/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

namespace imp2 {

const TableRow* ComplexityTable::find(const BitString& s) const {
  auto it = std::lower_bound(
      rows.begin(), rows.end(), s,
      [](const TableRow& r, const BitString& key) { return ShortLex{}(r.output, key); });
  return it != rows.end() && it->output == s ? &*it : nullptr;
}

ComplexityTable build_table(const RunAggregate& agg) {
  ComplexityTable t;
  t.denominator = agg.tally(Status::Halted);
  if (t.denominator == 0)
    throw InvalidArgument("the aggregate has no Halted program");
  const double log_den = std::log2(static_cast<double>(t.denominator));
  for (const auto& [output, st] : agg.outputs) {
    TableRow row;
    row.output = output;
    row.halt_count = st.halt_count;
    row.frequency = static_cast<double>(st.halt_count) /
                    static_cast<double>(t.denominator);
    row.ctm = log_den - std::log2(static_cast<double>(st.halt_count));
    row.spf = st.spf_length;
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::optional<unsigned> complete_output_length(const ComplexityTable& t) {
  std::vector<std::uint64_t> per_length;
  for (const auto& r : t.rows) {
    if (r.output.size() >= per_length.size())
      per_length.resize(r.output.size() + 1);
    ++per_length[r.output.size()];
  }
  if (per_length.empty() || per_length[0] == 0)
    return std::nullopt;
  unsigned l = 0;
  while (l + 1 < per_length.size() && l + 1 < 64 &&
         per_length[l + 1] == (std::uint64_t{1} << (l + 1)))
    ++l;
  return l;
}

unsigned largest_output_length(const ComplexityTable& t) {
  unsigned l = 0;
  for (const auto& r : t.rows)
    l = std::max(l, static_cast<unsigned>(r.output.size()));
  return l;
}

ExternalDistribution read_external(std::istream& in, std::string name) {
  ExternalDistribution d;
  d.name = std::move(name);
  std::string line;
  std::size_t no = 1;
  auto trim = [](std::string& s) {
    if (!s.empty() && s.back() == '\r')
      s.pop_back();
  };
  if (!std::getline(in, line))
    throw IoError("external distribution is empty");
  trim(line);
  if (line == "string,frequency")
    d.kind = ValueKind::Frequency;
  else if (line == "string,ctm")
    d.kind = ValueKind::Ctm;
  else
    throw IoError("external distribution header must be string,frequency or "
                  "string,ctm");
  std::set<BitString> seen;
  while (std::getline(in, line)) {
    ++no;
    trim(line);
    if (line.empty())
      continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw IoError("external distribution line " + std::to_string(no) +
                    ": expected string,value");
    BitString s;
    double v = 0;
    try {
      s = BitString::from_text(std::string_view(line).substr(0, comma));
      std::size_t used = 0;
      v = std::stod(line.substr(comma + 1), &used);
      if (used != line.size() - comma - 1)
        throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw IoError("external distribution line " + std::to_string(no) +
                    ": cannot parse '" + line + "'");
    }
    if (!std::isfinite(v) || (d.kind == ValueKind::Frequency && v <= 0))
      throw IoError("external distribution line " + std::to_string(no) +
                    ": value out of range");
    if (!seen.insert(s).second)
      throw IoError("external distribution line " + std::to_string(no) +
                    ": duplicate string");
    d.rows.emplace_back(std::move(s), v);
  }
  return d;
}

ExternalDistribution load_external(const std::filesystem::path& path,
                                   std::string name) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open " + path.string());
  return read_external(in, std::move(name));
}

Column ctm_column(const ComplexityTable& t) {
  Column c;
  for (const auto& r : t.rows)
    c.emplace(r.output, r.ctm);
  return c;
}

Column spf_column(const ComplexityTable& t) {
  Column c;
  for (const auto& r : t.rows)
    c.emplace(r.output, static_cast<double>(r.spf));
  return c;
}

Column ctm_column(const ExternalDistribution& d) {
  Column c;
  if (d.kind == ValueKind::Ctm) {
    for (const auto& [s, v] : d.rows)
      c.emplace(s, v);
    return c;
  }
  double total = 0;
  for (const auto& [s, v] : d.rows)
    total += v;
  for (const auto& [s, v] : d.rows)
    c.emplace(s, std::log2(total) - std::log2(v));
  return c;
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]])
      ++j;
    const double mean = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2;
    for (std::size_t t = i; t <= j; ++t)
      ranks[order[t]] = mean;
    i = j + 1;
  }
  return ranks;
}

namespace {

// Centred copy of a sample and its Euclidean norm.
struct Centred {
  std::vector<double> values;
  double norm = 0;
};

Centred centre(std::span<const double> v, const char* side) {
  if (std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end())
    throw UndefinedCorrelation(std::string("zero variance in ") + side);
  const double mean =
      std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  Centred c;
  c.values.reserve(v.size());
  double ss = 0;
  for (double x : v) {
    c.values.push_back(x - mean);
    ss += (x - mean) * (x - mean);
  }
  c.norm = std::sqrt(ss);
  return c;
}

void check_sizes(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw InvalidArgument("samples differ in length");
  if (xs.size() < 2)
    throw UndefinedCorrelation("correlation needs at least two pairs");
}

double correlation(const Centred& x, const Centred& y) {
  double dot = 0;
  for (std::size_t i = 0; i < x.values.size(); ++i)
    dot += x.values[i] * y.values[i];
  return std::clamp(dot / (x.norm * y.norm), -1.0, 1.0);
}

} // namespace

double pearson(std::span<const double> xs, std::span<const double> ys) {
  check_sizes(xs, ys);
  return correlation(centre(xs, "xs"), centre(ys, "ys"));
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  check_sizes(xs, ys);
  auto rx = average_ranks(xs);
  auto ry = average_ranks(ys);
  return pearson(rx, ry);
}

std::string_view method_name(Method m) {
  return m == Method::Spearman ? "spearman" : "pearson";
}

bool Scope::admits(const BitString& s) const noexcept {
  switch (kind) {
  case Kind::Global: return true;
  case Kind::Length: return s.size() == length;
  case Kind::UpTo: return s.size() <= length;
  }
  return false;
}

std::string Scope::label() const {
  switch (kind) {
  case Kind::Global: return "global";
  case Kind::Length: return "length=" + std::to_string(length);
  case Kind::UpTo: return "length<=" + std::to_string(length);
  }
  return "?";
}

CorrelationReport permutation_test(std::span<const double> xs,
                                   std::span<const double> ys, Method method,
                                   std::uint32_t permutations,
                                   std::uint64_t seed) {
  check_sizes(xs, ys);
  std::vector<double> a(xs.begin(), xs.end()), b(ys.begin(), ys.end());
  if (method == Method::Spearman) {
    a = average_ranks(a);
    b = average_ranks(b);
  }
  const Centred cx = centre(a, "xs");
  Centred cy = centre(b, "ys");
  const double observed = correlation(cx, cy);

  // Permutations only reorder ys, so the centred values and norms carry over.
  constexpr double kTolerance = 1e-12;
  Rng rng(seed);
  std::uint64_t at_least = 0;
  for (std::uint32_t i = 0; i < permutations; ++i) {
    shuffle(std::span<double>(cy.values), rng);
    if (correlation(cx, cy) >= observed - kTolerance)
      ++at_least;
  }

  CorrelationReport r;
  r.method = method;
  r.n = xs.size();
  r.coefficient = observed;
  r.p_value = static_cast<double>(1 + at_least) /
              static_cast<double>(permutations + 1);
  r.permutations = permutations;
  r.rng_seed = seed;
  return r;
}

JoinedPairs join(const Column& a, const Column& b, const Scope& scope) {
  JoinedPairs out;
  for (const auto& [s, va] : a) {
    if (!scope.admits(s))
      continue;
    auto it = b.find(s);
    if (it == b.end())
      continue;
    out.strings.push_back(s);
    out.a.push_back(va);
    out.b.push_back(it->second);
  }
  return out;
}

CorrelationReport correlate(const Column& a, const Column& b,
                            const Scope& scope, Method method,
                            std::uint32_t permutations, std::uint64_t seed) {
  JoinedPairs j = join(a, b, scope);
  if (j.strings.size() < 2)
    throw UndefinedCorrelation("only " + std::to_string(j.strings.size()) +
                               " shared string(s) in scope " + scope.label());
  CorrelationReport r = permutation_test(j.a, j.b, method, permutations, seed);
  r.scope = scope;
  return r;
}

CorrelationReport try_correlate(std::string name, const Column& a,
                                const Column& b, const Scope& scope,
                                Method method, std::uint32_t permutations,
                                std::uint64_t seed) {
  CorrelationReport r;
  try {
    r = correlate(a, b, scope, method, permutations, seed);
  } catch (const UndefinedCorrelation& e) {
    r.method = method;
    r.scope = scope;
    r.n = join(a, b, scope).strings.size();
    r.permutations = permutations;
    r.rng_seed = seed;
    r.note = e.what();
  }
  r.name = std::move(name);
  return r;
}

std::string_view significance_band(double p) {
  if (p < 0.001)
    return "very high";
  if (p < 0.01)
    return "high";
  if (p < 0.1)
    return "low";
  return "very low";
}

Report analyze(const RunAggregate& agg, const AnalysisOptions& options) {
  Report report;
  report.aggregate = &agg;
  report.table = build_table(agg);
  const ComplexityTable& table = *report.table;
  const Column ctm = ctm_column(table);
  const Column spf = spf_column(table);
  const unsigned largest = largest_output_length(table);
  const auto complete = complete_output_length(table);

  std::uint64_t seed = options.seed;
  auto add = [&](const std::string& name, const Column& a, const Column& b,
                 const Scope& scope, Method m) {
    report.correlations.push_back(
        try_correlate(name, a, b, scope, m, options.permutations, seed++));
  };
  auto standard_set = [&](const std::string& name, const Column& other) {
    add(name, ctm, other, Scope::global(), Method::Spearman);
    add(name, ctm, other, Scope::global(), Method::Pearson);
    for (unsigned l = 1; l <= largest; ++l)
      add(name, ctm, other, Scope::exactly(l), Method::Spearman);
    if (complete && *complete >= 1)
      add(name, ctm, other, Scope::up_to(*complete), Method::Spearman);
  };

  standard_set("ctm_vs_spf", spf);
  report.scatters.push_back({"ctm_spf", join(ctm, spf, Scope::global())});
  for (const auto& ext : options.externals) {
    const Column other = ctm_column(ext);
    standard_set("imp2_vs_" + ext.name, other);
    report.scatters.push_back({ext.name, join(ctm, other, Scope::global())});
  }
  return report;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::ofstream open_report_file(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

} // namespace

void write_report(const Report& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw IoError("cannot create report directory " + dir.string() + ": " +
                  ec.message());
  std::vector<std::string> written;

  if (report.aggregate) {
    const RunAggregate& agg = *report.aggregate;
    auto out = open_report_file(dir / "summary.csv");
    out << "metric,value\n"
        << "max_len," << agg.metadata.max_len << '\n'
        << "threshold," << agg.metadata.threshold << '\n'
        << "total_programs," << agg.total_programs() << '\n'
        << "halted," << agg.tally(Status::Halted) << '\n'
        << "strings_produced," << agg.outputs.size() << '\n';
    if (report.table) {
      auto complete = complete_output_length(*report.table);
      out << "largest_output_length," << largest_output_length(*report.table)
          << '\n'
          << "complete_output_length,"
          << (complete ? std::to_string(*complete) : std::string("none"))
          << '\n';
    }
    written.push_back("summary.csv");

    auto st = open_report_file(dir / "statuses.csv");
    st << "status,count,percentage\n";
    const double total = static_cast<double>(agg.total_programs());
    for (Status s : kAllStatuses) {
      char pct[32];
      std::snprintf(pct, sizeof pct, "%.6f",
                    total > 0 ? 100.0 * static_cast<double>(agg.tally(s)) / total
                              : 0.0);
      st << status_name(s) << ',' << agg.tally(s) << ',' << pct << '\n';
    }
    written.push_back("statuses.csv");
  }

  if (report.table) {
    auto out = open_report_file(dir / "ctm_spf.csv");
    out << "output,halt_count,D,CTM,SPF\n";
    for (const auto& r : report.table->rows)
      out << r.output.str() << ',' << r.halt_count << ',' << fmt(r.frequency)
          << ',' << fmt(r.ctm) << ',' << r.spf << '\n';
    written.push_back("ctm_spf.csv");
  }

  if (!report.correlations.empty()) {
    auto out = open_report_file(dir / "correlations.csv");
    out << "name,scope,method,n,coefficient,p_value,significance,"
           "permutations,seed,note\n";
    for (const auto& c : report.correlations) {
      out << c.name << ',' << c.scope.label() << ',' << method_name(c.method)
          << ',' << c.n << ','
          << (c.coefficient ? fmt(*c.coefficient) : std::string("undefined"))
          << ',' << (c.p_value ? fmt(*c.p_value) : std::string()) << ','
          << (c.p_value ? std::string(significance_band(*c.p_value))
                        : std::string())
          << ',' << c.permutations << ',' << c.rng_seed << ',' << c.note
          << '\n';
    }
    written.push_back("correlations.csv");
  }

  for (const auto& s : report.scatters) {
    std::string file = "scatter_" + s.name + ".csv";
    auto out = open_report_file(dir / file);
    out << "string,a,b\n";
    for (std::size_t i = 0; i < s.pairs.strings.size(); ++i)
      out << s.pairs.strings[i].str() << ',' << fmt(s.pairs.a[i]) << ','
          << fmt(s.pairs.b[i]) << '\n';
    written.push_back(file);
  }

  auto manifest = open_report_file(dir / "manifest.txt");
  for (const auto& f : written)
    manifest << f << '\n';
}

} // namespace imp2
