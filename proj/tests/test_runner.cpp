#include "imp2/error.hpp"
#include "imp2/runner.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

using namespace imp2;

namespace {

SweepOptions options(unsigned max_len, std::uint64_t threshold,
                     PartitionSpec part = {}) {
  SweepOptions o;
  o.max_len = max_len;
  o.limits.threshold = threshold;
  o.partition = part;
  return o;
}

std::string body(const RunAggregate& agg) {
  std::ostringstream s;
  write_results_body(agg, s);
  return s.str();
}

std::string whole(const RunAggregate& agg) {
  std::ostringstream s;
  write_results(agg, s);
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("imp2_runner_" + name);
  std::filesystem::remove_all(p);
  return p;
}

} // namespace

TEST_SUITE("runner") {

TEST_CASE("partition strings") {
  auto p = parse_partition("2/5");
  CHECK(p.index == 2);
  CHECK(p.count == 5);
  for (const char* bad : {"", "1", "/", "1/", "/2", "2/2", "0/0", "a/b", "1/2/3",
                          "-1/2", "1 /2"})
    CHECK_THROWS_AS(parse_partition(bad), InvalidArgument);
}

TEST_CASE("partition ranges tile the index space") {
  for (std::uint64_t size : {0, 1, 2, 7, 64, 1000, 1001}) {
    for (std::uint32_t k : {1u, 2u, 3u, 8u, 13u}) {
      std::uint64_t expected_lo = 0;
      for (std::uint32_t i = 0; i < k; ++i) {
        auto [lo, hi] = partition_range(size, {i, k});
        CHECK(lo == expected_lo);
        CHECK(lo <= hi);
        expected_lo = hi;
      }
      CHECK(expected_lo == size);
    }
  }
}

TEST_CASE("tiny sweep") {
  auto agg = sweep(options(3, 1000));
  CHECK(agg.total_programs() == 9);
  CHECK(agg.tally(Status::Halted) == 1);
  CHECK(agg.tally(Status::Extension) == 6);
  CHECK(agg.tally(Status::ReadPastEnd) == 1);
  CHECK(agg.tally(Status::LoopDetected) == 1);
  REQUIRE(agg.outputs.size() == 1);
  const auto& [out, stats] = *agg.outputs.begin();
  CHECK(out.empty());
  CHECK(stats.halt_count == 1);
  CHECK(stats.spf_length == 1);
  CHECK(stats.first_program.str() == "0");
}

TEST_CASE("tree sweep equals program-by-program sweep") {
  for (unsigned L : {1u, 2u, 5u, 9u, 12u, 16u})
    for (std::uint64_t threshold : {1u, 3u, 8u, 25u, 1000u}) {
      CAPTURE(L);
      CAPTURE(threshold);
      auto o = options(L, threshold);
      auto fast = sweep(o);
      auto slow = sweep_reference(o);
      CHECK(fast == slow);
      CHECK(BigInt(fast.total_programs()) == count_programs(L));
    }
}

TEST_CASE("tree sweep equals reference on partitions") {
  for (std::uint32_t k : {2u, 3u, 5u, 8u})
    for (std::uint32_t i = 0; i < k; ++i) {
      auto o = options(15, 40, {i, k});
      CHECK(sweep(o) == sweep_reference(o));
    }
}

TEST_CASE("tallies agree with the tree-walking oracle") {
  std::array<std::uint64_t, 5> expected{};
  std::map<std::string, std::uint64_t> outputs;
  for (const auto& st : strata(12)) {
    StratumIterator it(st.code_length, st.prefix_length, 0, st.size());
    ProgramCode p;
    while (it.next(p)) {
      auto r = oracle::execute(sentence_unrank(p.sentence_index), p.input.str(), 60);
      ++expected[static_cast<std::size_t>(r.status)];
      if (r.status == Status::Halted)
        ++outputs[r.output];
    }
  }
  auto agg = sweep(options(12, 60));
  CHECK(agg.status_tallies == expected);
  CHECK(agg.outputs.size() == outputs.size());
  for (const auto& [s, n] : outputs)
    CHECK(agg.outputs.at(BitString::from_text(s)).halt_count == n);
}

TEST_CASE("partitions merge to the unpartitioned body") {
  auto reference = sweep(options(14, 1000));
  for (std::uint32_t k : {1u, 2u, 3u, 8u}) {
    std::vector<RunAggregate> parts;
    for (std::uint32_t i = 0; i < k; ++i)
      parts.push_back(sweep(options(14, 1000, {i, k})));
    // Merge order must not matter.
    std::reverse(parts.begin(), parts.end());
    auto merged = merge(parts);
    CHECK(body(merged) == body(reference));
    CHECK(merged.metadata.num_partitions == k);
  }
}

TEST_CASE("thread count does not change the result") {
  auto one = sweep(options(18, 200));
  auto o = options(18, 200);
  o.threads = 4;
  CHECK(sweep(o) == one);
}

TEST_CASE("smallest program found is the first halting program") {
  std::map<std::string, std::string> first;
  auto o = options(16, 500);
  o.on_halted = [&](const BitString& code, const BitString& out) {
    auto [it, fresh] = first.emplace(out.str(), code.str());
    if (!fresh && ShortLex{}(code, BitString::from_text(it->second)))
      it->second = code.str();
  };
  auto agg = sweep(o);
  REQUIRE(agg.outputs.size() == first.size());
  for (const auto& [out, stats] : agg.outputs) {
    CHECK(stats.first_program.str() == first.at(out.str()));
    CHECK(stats.spf_length == stats.first_program.size());
  }
}

TEST_CASE("halting programs are prefix-free at length 16") {
  std::vector<std::string> halting;
  auto o = options(16, 1000);
  o.on_halted = [&](const BitString& code, const BitString&) {
    halting.push_back(code.str());
  };
  auto agg = sweep(o);
  CHECK(halting.size() == agg.tally(Status::Halted));
  std::sort(halting.begin(), halting.end());
  // In lexicographic order a prefix sorts immediately before some extension
  // of it, and every string between them also extends it.
  for (std::size_t i = 0; i + 1 < halting.size(); ++i)
    CHECK_FALSE(halting[i + 1].starts_with(halting[i]));
}

TEST_CASE("merge rejects inconsistent parts") {
  auto a = sweep(options(8, 100, {0, 2}));
  auto b = sweep(options(8, 100, {1, 2}));
  std::vector<RunAggregate> dup{a, a};
  CHECK_THROWS_AS(merge(dup), MergeError);
  std::vector<RunAggregate> missing{a};
  CHECK_THROWS_AS(merge(missing), MergeError);
  auto c = sweep(options(8, 99, {1, 2}));
  std::vector<RunAggregate> mismatch{a, c};
  CHECK_THROWS_AS(merge(mismatch), MergeError);
  CHECK_THROWS_AS(merge(std::vector<RunAggregate>{}), MergeError);
  std::vector<RunAggregate> ok{b, a};
  CHECK_NOTHROW(merge(ok));
  // Merging is repeatable on complete results.
  auto full = merge(ok);
  std::vector<RunAggregate> again{full};
  CHECK(body(merge(again)) == body(full));
}

TEST_CASE("merge records mixed seeds") {
  auto o0 = options(6, 50, {0, 2});
  auto o1 = options(6, 50, {1, 2});
  o0.seed = "s1";
  o1.seed = "s1";
  std::vector<RunAggregate> same{sweep(o0), sweep(o1)};
  CHECK(merge(same).metadata.seed == "s1");
  o1.seed = "s2";
  std::vector<RunAggregate> mixed{sweep(o0), sweep(o1)};
  CHECK(merge(mixed).metadata.seed == "mixed");
}

TEST_CASE("results files roundtrip exactly") {
  auto o = options(14, 300, {1, 3});
  o.invocation = "imp2ctm run --max-len 14";
  o.seed = "7";
  auto agg = sweep(o);
  auto text = whole(agg);
  std::istringstream in(text);
  auto back = read_results(in);
  CHECK(back == agg);
  CHECK(whole(back) == text);
  CHECK(text.find("total_programs=") != std::string::npos);
  CHECK(text.find("partitions=1/3") != std::string::npos);

  auto path = scratch("file.res");
  save_results(agg, path);
  CHECK(load_results(path) == agg);
  std::filesystem::remove(path);
}

TEST_CASE("malformed results files are rejected") {
  auto text = whole(sweep(options(6, 50)));
  auto corrupt = [&](const std::string& from, const std::string& to) {
    auto t = text;
    auto pos = t.find(from);
    REQUIRE(pos != std::string::npos);
    t.replace(pos, from.size(), to);
    std::istringstream in(t);
    CHECK_THROWS_AS(read_results(in), IoError);
  };
  corrupt("max_len=6", "max_len=six");
  corrupt("Halted,", "Halting,");
  corrupt("total_programs=", "total=");
  corrupt("output,halt_count", "output;halt_count");
  std::istringstream empty("");
  CHECK_THROWS_AS(read_results(empty), IoError);
  CHECK_THROWS_AS(load_results("/nonexistent/dir/x.res"), IoError);
}

TEST_CASE("checkpoints resume to the same result") {
  auto dir = scratch("ckpt");
  auto o = options(16, 200);
  o.checkpoint_dir = dir;
  auto first = sweep(o);
  CHECK(std::filesystem::exists(dir / "manifest.txt"));
  auto second = sweep(o); // every block loads from disk
  CHECK(second == first);
  CHECK(second == sweep(options(16, 200)));

  // Drop some blocks and rerun: the missing ones are recomputed.
  int removed = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".res" && removed++ % 2 == 0)
      std::filesystem::remove(e.path());
  CHECK(sweep(o) == first);

  // A checkpoint from different parameters is refused.
  auto other = options(16, 201);
  other.checkpoint_dir = dir;
  CHECK_THROWS_AS(sweep(other), InvalidArgument);
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweep parameters are validated") {
  CHECK_THROWS_AS(sweep(options(61, 10)), InvalidArgument);
  CHECK_THROWS_AS(sweep(options(5, 0)), InvalidArgument);
  CHECK_THROWS_AS(sweep(options(5, 10, {3, 3})), InvalidArgument);
  CHECK(sweep(options(0, 10)).total_programs() == 0);
}

} // TEST_SUITE
