#include "imp2/runner.hpp"

#include "imp2/error.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace imp2 {

PartitionSpec parse_partition(std::string_view text) {
  auto slash = text.find('/');
  auto number = [&](std::string_view s) {
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
      throw InvalidArgument("partition must look like i/k, got '" +
                            std::string(text) + "'");
    return v;
  };
  if (slash == std::string_view::npos)
    throw InvalidArgument("partition must look like i/k, got '" +
                          std::string(text) + "'");
  PartitionSpec p{number(text.substr(0, slash)), number(text.substr(slash + 1))};
  if (p.count == 0 || p.index >= p.count)
    throw InvalidArgument("partition index must satisfy 0 <= i < k, got '" +
                          std::string(text) + "'");
  return p;
}

std::pair<std::uint64_t, std::uint64_t>
partition_range(std::uint64_t size, const PartitionSpec& part) {
  const std::uint64_t base = size / part.count;
  const std::uint64_t lo = part.index * base;
  const std::uint64_t hi = part.index + 1 == part.count ? size : lo + base;
  return {lo, hi};
}

std::uint64_t RunAggregate::total_programs() const noexcept {
  std::uint64_t total = 0;
  for (auto c : status_tallies)
    total += c;
  return total;
}

void RunAggregate::add_halted(const BitString& output,
                              const BitString& program) {
  auto& st = outputs[output];
  if (st.halt_count == 0 || ShortLex{}(program, st.first_program)) {
    st.first_program = program;
    st.spf_length = static_cast<unsigned>(program.size());
  }
  ++st.halt_count;
  add_status(Status::Halted, 1);
}

void RunAggregate::absorb(const RunAggregate& other) {
  for (const auto& [output, theirs] : other.outputs) {
    auto& mine = outputs[output];
    if (mine.halt_count == 0 ||
        ShortLex{}(theirs.first_program, mine.first_program)) {
      mine.first_program = theirs.first_program;
      mine.spf_length = theirs.spf_length;
    }
    mine.halt_count += theirs.halt_count;
  }
  for (std::size_t i = 0; i < status_tallies.size(); ++i)
    status_tallies[i] += other.status_tallies[i];
}

namespace {

void validate(const SweepOptions& o) {
  if (o.max_len > kMaxSweepLength)
    throw InvalidArgument("sweeps are limited to code length " +
                          std::to_string(kMaxSweepLength));
  if (o.limits.threshold < 1)
    throw InvalidArgument("threshold must be at least 1");
  if (o.partition.count == 0 || o.partition.index >= o.partition.count)
    throw InvalidArgument("invalid partition");
}

RunMetadata metadata_for(const SweepOptions& o) {
  RunMetadata md;
  md.max_len = o.max_len;
  md.threshold = o.limits.threshold;
  md.max_value_bits = o.limits.max_value_bits;
  md.num_partitions = o.partition.count;
  md.partitions = {o.partition.index};
  md.seed = o.seed;
  md.invocation = o.invocation;
  return md;
}

constexpr std::uint64_t kBlockSentences = 64;

// Sentences of one prefix length, explored together.
struct Block {
  unsigned prefix_length;
  std::uint64_t chunk;
};

// Flattened-index windows of one prefix length for every input length r,
// restricted to the partition.
struct PrefixPlan {
  unsigned prefix_length = 0;
  unsigned max_input = 0; // R = L - k
  std::uint64_t sentences = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> window; // per r
};

PrefixPlan plan_prefix(unsigned k, unsigned max_len, const PartitionSpec& p) {
  PrefixPlan plan;
  plan.prefix_length = k;
  plan.max_input = max_len - k;
  plan.sentences = std::uint64_t{1} << ((k - 1) / 2);
  for (unsigned r = 0; r <= plan.max_input; ++r)
    plan.window.push_back(partition_range(plan.sentences << r, p));
  return plan;
}

bool sentence_in_plan(const PrefixPlan& plan, std::uint64_t offset) {
  for (unsigned r = 0; r <= plan.max_input; ++r) {
    auto [lo, hi] = plan.window[r];
    if (lo < hi && (offset << r) < hi && lo < ((offset + 1) << r))
      return true;
  }
  return false;
}

class SentenceExplorer {
public:
  SentenceExplorer(const PrefixPlan& plan, std::uint64_t offset,
                   const ExecLimits& limits, RunAggregate& agg,
                   const std::function<void(const BitString&,
                                            const BitString&)>& on_halted)
      : plan_(plan), limits_(limits), agg_(agg), on_halted_(on_halted),
        program_(sentence_unrank(EnumIndex(plan.sentences - 1 + offset))) {
    prefix_ = encode_program({EnumIndex(plan.sentences - 1 + offset), {}});
    for (unsigned r = 0; r <= plan.max_input; ++r) {
      auto [lo, hi] = plan.window[r];
      const std::uint64_t base = offset << r, end = (offset + 1) << r;
      const std::uint64_t a = std::max(lo, base), b = std::min(hi, end);
      inputs_.push_back(a < b ? std::pair{a - base, b - base}
                              : std::pair{std::uint64_t{0}, std::uint64_t{0}});
    }
  }

  void run() {
    BitString known;
    explore(known, 0);
  }

private:
  // Inputs of length r in the window that start with `known` (value v).
  std::uint64_t covered(unsigned r, std::size_t depth, std::uint64_t v) const {
    auto [lo, hi] = inputs_[r];
    const std::uint64_t a = std::max(lo, v << (r - depth));
    const std::uint64_t b = std::min(hi, (v + 1) << (r - depth));
    return a < b ? b - a : 0;
  }

  bool reachable(std::size_t depth, std::uint64_t v) const {
    for (unsigned r = static_cast<unsigned>(depth); r <= plan_.max_input; ++r)
      if (covered(r, depth, v))
        return true;
    return false;
  }

  void explore(BitString& known, std::uint64_t v) {
    const std::size_t depth = known.size();
    PartialRun run = run_prefix(program_, known, std::nullopt, limits_);
    for (unsigned r = static_cast<unsigned>(depth); r <= plan_.max_input; ++r) {
      std::uint64_t n = covered(r, depth, v);
      if (n == 0)
        continue;
      switch (run.event) {
      case Event::Terminated:
        if (r == depth) {
          BitString code = prefix_;
          code.append(known);
          if (on_halted_)
            on_halted_(code, run.output);
          agg_.add_halted(run.output, code);
        } else {
          agg_.add_status(Status::Extension, n);
        }
        break;
      case Event::NeedInput:
        if (r == depth)
          agg_.add_status(Status::ReadPastEnd, n);
        break;
      case Event::ReadPastEnd: // not produced without a stream length
        break;
      case Event::LoopDetected:
        agg_.add_status(Status::LoopDetected, n);
        break;
      case Event::ThresholdSurpassed:
        agg_.add_status(Status::ThresholdSurpassed, n);
        break;
      }
    }
    if (run.event != Event::NeedInput || depth >= plan_.max_input)
      return;
    for (unsigned bit = 0; bit < 2; ++bit) {
      const std::uint64_t child = (v << 1) | bit;
      if (!reachable(depth + 1, child))
        continue;
      known.push_back(bit != 0);
      explore(known, child);
      known.pop_back();
    }
  }

  const PrefixPlan& plan_;
  ExecLimits limits_;
  RunAggregate& agg_;
  const std::function<void(const BitString&, const BitString&)>& on_halted_;
  Program program_;
  BitString prefix_;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> inputs_;
};

std::string fingerprint(const RunMetadata& md) {
  std::ostringstream s;
  s << "max_len=" << md.max_len << ";threshold=" << md.threshold
    << ";max_value_bits=" << md.max_value_bits << ";partition="
    << md.partitions.front() << '/' << md.num_partitions
    << ";version=" << md.version << ";block=" << kBlockSentences;
  return s.str();
}

class Checkpoint {
public:
  Checkpoint(std::filesystem::path dir, const RunMetadata& md)
      : dir_(std::move(dir)), fingerprint_(fingerprint(md)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec)
      throw IoError("cannot create checkpoint directory " + dir_.string() +
                    ": " + ec.message());
    auto manifest = dir_ / "manifest.txt";
    if (std::filesystem::exists(manifest)) {
      std::ifstream in(manifest);
      std::string line;
      std::getline(in, line);
      if (line != "fingerprint " + fingerprint_)
        throw InvalidArgument("checkpoint directory " + dir_.string() +
                              " belongs to a different sweep");
      std::string tag;
      unsigned k;
      std::uint64_t chunk;
      while (in >> tag >> k >> chunk)
        if (tag == "block" &&
            std::filesystem::exists(block_path({k, chunk})))
          done_.insert({k, chunk});
    } else {
      std::ofstream out(manifest);
      out << "fingerprint " << fingerprint_ << '\n';
      if (!out)
        throw IoError("cannot write " + manifest.string());
    }
  }

  bool completed(const Block& b) const {
    return done_.count({b.prefix_length, b.chunk}) != 0;
  }

  RunAggregate load(const Block& b) const { return load_results(block_path(b)); }

  void commit(const Block& b, const RunAggregate& agg) {
    auto path = block_path(b);
    auto tmp = path;
    tmp += ".tmp";
    save_results(agg, tmp);
    std::lock_guard lock(mutex_);
    std::filesystem::rename(tmp, path);
    std::ofstream out(dir_ / "manifest.txt", std::ios::app);
    out << "block " << b.prefix_length << ' ' << b.chunk << '\n';
    out.flush();
    if (!out)
      throw IoError("cannot append to checkpoint manifest");
  }

private:
  std::filesystem::path block_path(const Block& b) const {
    return dir_ / ("block_" + std::to_string(b.prefix_length) + "_" +
                   std::to_string(b.chunk) + ".res");
  }

  std::filesystem::path dir_;
  std::string fingerprint_;
  std::set<std::pair<unsigned, std::uint64_t>> done_;
  std::mutex mutex_;
};

} // namespace

RunAggregate sweep(const SweepOptions& options) {
  validate(options);
  const RunMetadata md = metadata_for(options);

  std::vector<PrefixPlan> plans;
  for (unsigned k = 1; k <= options.max_len; k += 2)
    plans.push_back(plan_prefix(k, options.max_len, options.partition));

  std::vector<Block> blocks;
  for (const auto& plan : plans)
    for (std::uint64_t c = 0; c * kBlockSentences < plan.sentences; ++c)
      blocks.push_back({plan.prefix_length, c});

  std::optional<Checkpoint> checkpoint;
  if (options.checkpoint_dir)
    checkpoint.emplace(*options.checkpoint_dir, md);

  std::mutex halted_mutex;
  std::function<void(const BitString&, const BitString&)> on_halted;
  if (options.on_halted)
    on_halted = [&](const BitString& code, const BitString& output) {
      std::lock_guard lock(halted_mutex);
      options.on_halted(code, output);
    };

  std::vector<RunAggregate> results(blocks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::size_t finished = 0;
  int reported = -1;
  auto block_done = [&] {
    if (!options.progress)
      return;
    std::lock_guard lock(failure_mutex);
    int pct = static_cast<int>(100 * ++finished / blocks.size());
    if (pct != reported) {
      reported = pct;
      *options.progress << "sweep: " << pct << "% of " << blocks.size()
                        << " blocks\n" << std::flush;
    }
  };

  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < blocks.size(); i = next++) {
        const Block& b = blocks[i];
        if (checkpoint && checkpoint->completed(b) && !on_halted) {
          results[i] = checkpoint->load(b);
          block_done();
          continue;
        }
        const PrefixPlan& plan = plans[(b.prefix_length - 1) / 2];
        RunAggregate& agg = results[i];
        agg.metadata = md;
        const std::uint64_t first = b.chunk * kBlockSentences;
        const std::uint64_t last =
            std::min(plan.sentences, first + kBlockSentences);
        for (std::uint64_t off = first; off < last; ++off)
          if (sentence_in_plan(plan, off))
            SentenceExplorer(plan, off, options.limits, agg, on_halted).run();
        if (checkpoint)
          checkpoint->commit(b, agg);
        block_done();
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure)
        failure = std::current_exception();
      next = blocks.size();
    }
  };

  const unsigned threads = std::max(1U, options.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back(worker);
    for (auto& t : pool)
      t.join();
  }
  if (failure)
    std::rethrow_exception(failure);

  RunAggregate out;
  out.metadata = md;
  for (const auto& r : results)
    out.absorb(r);
  return out;
}

RunAggregate sweep_reference(const SweepOptions& options) {
  validate(options);
  RunAggregate agg;
  agg.metadata = metadata_for(options);
  std::map<EnumIndex, Program> compiled;
  for (const auto& s : strata(options.max_len)) {
    auto [lo, hi] =
        partition_range(static_cast<std::uint64_t>(s.size()), options.partition);
    StratumIterator it(s.code_length, s.prefix_length, lo, hi);
    ProgramCode code;
    while (it.next(code)) {
      auto c = compiled.find(code.sentence_index);
      if (c == compiled.end())
        c = compiled
                .emplace(code.sentence_index,
                         Program(sentence_unrank(code.sentence_index)))
                .first;
      ExecOutcome r = execute(c->second, code.input, options.limits);
      if (r.status == Status::Halted) {
        BitString bits = encode_program(code);
        if (options.on_halted)
          options.on_halted(bits, *r.output);
        agg.add_halted(*r.output, bits);
      } else {
        agg.add_status(r.status, 1);
      }
    }
  }
  return agg;
}

RunAggregate merge(std::span<const RunAggregate> parts) {
  if (parts.empty())
    throw MergeError("nothing to merge");
  const RunMetadata& head = parts.front().metadata;
  std::set<std::uint32_t> covered;
  bool same_seed = true;
  for (const auto& p : parts) {
    const RunMetadata& md = p.metadata;
    if (md.max_len != head.max_len || md.threshold != head.threshold ||
        md.max_value_bits != head.max_value_bits || md.version != head.version ||
        md.num_partitions != head.num_partitions)
      throw MergeError("results disagree on max_len, threshold, "
                       "max_value_bits, version or partition count");
    same_seed = same_seed && md.seed == head.seed;
    for (auto i : md.partitions)
      if (!covered.insert(i).second)
        throw MergeError("partition " + std::to_string(i) + "/" +
                         std::to_string(md.num_partitions) +
                         " appears more than once");
  }
  for (std::uint32_t i = 0; i < head.num_partitions; ++i)
    if (!covered.count(i))
      throw MergeError("partition " + std::to_string(i) + "/" +
                       std::to_string(head.num_partitions) + " is missing");

  RunAggregate out;
  out.metadata = head;
  out.metadata.partitions.assign(covered.begin(), covered.end());
  out.metadata.seed = same_seed ? head.seed : "mixed";
  out.metadata.invocation.clear();
  for (const auto& p : parts)
    out.absorb(p);
  return out;
}

void write_results_body(const RunAggregate& agg, std::ostream& out) {
  out << "output,halt_count,spf,first_program\n";
  for (const auto& [output, st] : agg.outputs)
    out << output.str() << ',' << st.halt_count << ',' << st.spf_length << ','
        << st.first_program.str() << '\n';
  out << "\nstatus,count\n";
  for (Status s : kAllStatuses)
    out << status_name(s) << ',' << agg.tally(s) << '\n';
}

void write_results(const RunAggregate& agg, std::ostream& out) {
  const RunMetadata& md = agg.metadata;
  out << "max_len=" << md.max_len << '\n'
      << "threshold=" << md.threshold << '\n'
      << "max_value_bits=" << md.max_value_bits << '\n'
      << "partitions=";
  for (std::size_t i = 0; i < md.partitions.size(); ++i)
    out << (i ? "," : "") << md.partitions[i];
  out << '/' << md.num_partitions << '\n'
      << "seed=" << md.seed << '\n'
      << "version=" << md.version << '\n'
      << "invocation=" << md.invocation << '\n'
      << "total_programs=" << agg.total_programs() << "\n\n";
  write_results_body(agg, out);
}

namespace {

[[noreturn]] void malformed(std::size_t line, const std::string& why) {
  throw IoError("malformed results file, line " + std::to_string(line) + ": " +
                why);
}

std::uint64_t to_u64(std::string_view s, std::size_t line) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    malformed(line, "expected a count, got '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    auto p = s.find(sep);
    out.push_back(s.substr(0, p));
    if (p == std::string_view::npos)
      return out;
    s.remove_prefix(p + 1);
  }
}

BitString bits(std::string_view s, std::size_t line) {
  try {
    return BitString::from_text(s);
  } catch (const InvalidArgument&) {
    malformed(line, "expected a bit string, got '" + std::string(s) + "'");
  }
}

} // namespace

RunAggregate read_results(std::istream& in) {
  RunAggregate agg;
  RunMetadata& md = agg.metadata;
  std::string line;
  std::size_t no = 0;
  std::optional<std::uint64_t> declared_total;

  while (std::getline(in, line)) {
    ++no;
    if (line.empty())
      break;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      malformed(no, "expected key=value");
    std::string_view key(line.data(), eq);
    std::string_view value(line.data() + eq + 1, line.size() - eq - 1);
    if (key == "max_len")
      md.max_len = static_cast<unsigned>(to_u64(value, no));
    else if (key == "threshold")
      md.threshold = to_u64(value, no);
    else if (key == "max_value_bits")
      md.max_value_bits = to_u64(value, no);
    else if (key == "partitions") {
      auto slash = value.find('/');
      if (slash == std::string_view::npos)
        malformed(no, "partitions must be list/count");
      md.num_partitions =
          static_cast<std::uint32_t>(to_u64(value.substr(slash + 1), no));
      md.partitions.clear();
      for (auto p : split(value.substr(0, slash), ','))
        md.partitions.push_back(static_cast<std::uint32_t>(to_u64(p, no)));
    } else if (key == "seed")
      md.seed = value;
    else if (key == "version")
      md.version = value;
    else if (key == "invocation")
      md.invocation = value;
    else if (key == "total_programs")
      declared_total = to_u64(value, no);
    else
      malformed(no, "unknown key '" + std::string(key) + "'");
  }

  if (!std::getline(in, line) || line != "output,halt_count,spf,first_program")
    malformed(no + 1, "expected the output table header");
  ++no;
  while (std::getline(in, line)) {
    ++no;
    if (line.empty())
      break;
    auto f = split(line, ',');
    if (f.size() != 4)
      malformed(no, "expected 4 fields");
    OutputStats st;
    st.halt_count = to_u64(f[1], no);
    st.spf_length = static_cast<unsigned>(to_u64(f[2], no));
    st.first_program = bits(f[3], no);
    if (st.halt_count == 0 || st.first_program.size() != st.spf_length)
      malformed(no, "inconsistent output row");
    if (!agg.outputs.emplace(bits(f[0], no), st).second)
      malformed(no, "duplicate output");
  }

  if (!std::getline(in, line) || line != "status,count")
    malformed(no + 1, "expected the status table header");
  ++no;
  while (std::getline(in, line)) {
    ++no;
    if (line.empty())
      continue;
    auto f = split(line, ',');
    auto s = f.size() == 2 ? parse_status(f[0]) : std::nullopt;
    if (!s)
      malformed(no, "expected status,count");
    agg.status_tallies[static_cast<std::size_t>(*s)] = to_u64(f[1], no);
  }

  std::uint64_t halted = 0;
  for (const auto& [o, st] : agg.outputs)
    halted += st.halt_count;
  if (halted != agg.tally(Status::Halted))
    throw IoError("malformed results file: output counts do not sum to the "
                  "Halted tally");
  if (declared_total && *declared_total != agg.total_programs())
    throw IoError("malformed results file: total_programs disagrees with the "
                  "status tallies");
  return agg;
}

void save_results(const RunAggregate& agg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot open " + path.string() + " for writing");
  write_results(agg, out);
  out.flush();
  if (!out)
    throw IoError("failed writing " + path.string());
}

RunAggregate load_results(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path.string());
  return read_results(in);
}

} // namespace imp2
