#include "imp2/codec.hpp"
#include "imp2/error.hpp"
#include "imp2/interpreter.hpp"
#include "imp2/syntax.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <string>

using namespace imp2;

namespace {

const char* kFactorial =
    "(x[0] := 5; (x[1] := 1; (while (0 < x[0]) do (x[1] := (x[1] * x[0]); "
    "x[0] := (x[0] - 1)))))";
const char* kCountOnes =
    "(x[0] := readbit; (while (readbit = 1) do x[0] := (x[0] + 1)))";

ExecOutcome run(const char* text, const char* input,
                std::uint64_t threshold = 1000000) {
  ExecLimits limits;
  limits.threshold = threshold;
  return execute(parse(text), BitString::from_text(input), limits);
}

void check_against_oracle(const Sentence& s, const BitString& y,
                          std::uint64_t threshold) {
  ExecLimits limits;
  limits.threshold = threshold;
  auto got = execute(s, y, limits);
  auto expected = oracle::execute(s, y.str(), threshold, limits.max_value_bits);
  CAPTURE(print(s));
  CAPTURE(y.str());
  REQUIRE(got.status == expected.status);
  CHECK(got.steps_used == expected.steps);
  CHECK(got.bits_consumed == expected.bits);
  if (got.status == Status::Halted)
    CHECK(got.output->str() == expected.output);
  else
    CHECK_FALSE(got.output.has_value());
}

} // namespace

TEST_SUITE("interpreter") {

TEST_CASE("factorial halts with 120 in x[1]") {
  auto r = run(kFactorial, "");
  REQUIRE(r.status == Status::Halted);
  CHECK(r.output->str() == "111001");
  CHECK(r.memory->at(1) == 120);
  CHECK(r.memory->count(0) == 0);
  CHECK(r.bits_consumed == 0);
}

TEST_CASE("counting consecutive ones") {
  auto r = run(kCountOnes, "1110");
  REQUIRE(r.status == Status::Halted);
  CHECK(r.memory->at(0) == 3);
  CHECK(r.output->str() == "00");
  CHECK(r.bits_consumed == 4);

  CHECK(run(kCountOnes, "11").status == Status::ReadPastEnd);
  CHECK(run(kCountOnes, "").status == Status::ReadPastEnd);
  auto ext = run(kCountOnes, "10111");
  CHECK(ext.status == Status::Extension);
  CHECK(ext.bits_consumed == 2);
  CHECK_FALSE(ext.output.has_value());
}

TEST_CASE("skip with unread input is an extension") {
  auto r = run("skip", "0", 10);
  CHECK(r.status == Status::Extension);
  CHECK(r.bits_consumed == 0);
  CHECK(r.steps_used == 1);
}

TEST_CASE("an immediately repeating guard is a loop") {
  CHECK(run("(while true do skip)", "").status == Status::LoopDetected);
  // Counts forever: never repeats, so only the threshold stops it.
  auto r = run("(while true do x[0] := (x[0] + 1))", "", 1000);
  CHECK(r.status == Status::ThresholdSurpassed);
  CHECK(r.steps_used == 1001);
}

TEST_CASE("step accounting") {
  // skip: one dispatch.
  CHECK(run("skip", "").steps_used == 1);
  // assign + literal.
  CHECK(run("x[0] := 5", "").steps_used == 2);
  // seq + two skips.
  CHECK(run("(skip; skip)", "").steps_used == 3);
  // while dispatch + false guard.
  CHECK(run("(while false do skip)", "").steps_used == 2);
  // if + guard + taken branch.
  CHECK(run("(if true then skip else x[0] := 1)", "").steps_used == 3);
  // assign, add, two literals.
  CHECK(run("x[0] := (1 + 2)", "").steps_used == 4);
  // Threshold is inclusive: exactly enough steps still halts.
  CHECK(run("x[0] := (1 + 2)", "", 4).status == Status::Halted);
  CHECK(run("x[0] := (1 + 2)", "", 3).status == Status::ThresholdSurpassed);
}

TEST_CASE("evaluation is left to right without short circuit") {
  // Both operands of `and` read, even though the left is false.
  auto r = run("(if ((readbit = 1) and (readbit = 1)) then skip else skip)", "01");
  CHECK(r.status == Status::Halted);
  CHECK(r.bits_consumed == 2);
  // Subtraction reads its left operand first.
  auto s = run("x[0] := (readbit - readbit)", "10");
  CHECK(s.memory->at(0) == 1);
  auto t = run("x[0] := (readbit - readbit)", "01");
  CHECK(t.memory->empty());
}

TEST_CASE("monus and exact arithmetic") {
  CHECK(run("x[0] := (3 - 5)", "").memory->empty());
  auto big = run("(x[0] := 4294967296; x[1] := (x[0] * (x[0] * x[0])))", "");
  REQUIRE(big.status == Status::Halted);
  CHECK(big.memory->at(1) == BigInt(1) << 96);
  auto back = run("(x[0] := 4294967296; (x[1] := (x[0] * x[0]); x[1] := "
                  "(x[1] - ((x[1] - 1) + 0))))",
                  "");
  CHECK(back.memory->at(1) == 1);
}

TEST_CASE("output concatenates locations in index order") {
  Memory m;
  CHECK(extract_output(m).str() == "");
  m[2] = 1;
  m[5] = 2;
  CHECK(extract_output(m).str() == "01");
  auto r = run("(x[5] := 2; (x[2] := 1; x[9] := 0))", "");
  CHECK(r.output->str() == "01");
  Memory huge;
  huge[parse_decimal("100000000000000000000000")] = 120;
  huge[0] = 1;
  CHECK(extract_output(huge).str() == "0111001");
}

TEST_CASE("value growth beyond the width cap is treated as divergence") {
  ExecLimits limits;
  limits.max_value_bits = 256;
  auto s = parse("(x[0] := 2; (while true do x[0] := (x[0] * x[0])))");
  auto r = execute(s, BitString(), limits);
  CHECK(r.status == Status::ThresholdSurpassed);
  CHECK(r.steps_used < 100);
}

TEST_CASE("loop detection sees the input cursor") {
  // The guard configuration repeats in memory, but the cursor advances.
  auto r = run("(while (readbit = 0) do skip)", "0001");
  CHECK(r.status == Status::Halted);
  CHECK(run("(while (readbit = 0) do skip)", "000").status == Status::ReadPastEnd);
}

TEST_CASE("zero threshold is rejected") {
  ExecLimits limits;
  limits.threshold = 0;
  CHECK_THROWS_AS(execute(parse("skip"), BitString(), limits), InvalidArgument);
}

TEST_CASE("execute agrees with the tree-walking oracle on all short programs") {
  for (const auto& st : strata(14)) {
    StratumIterator it(st.code_length, st.prefix_length, 0, st.size());
    ProgramCode p;
    while (it.next(p))
      check_against_oracle(sentence_unrank(p.sentence_index), p.input, 500);
  }
}

TEST_CASE("execute agrees with the oracle on sampled long programs") {
  Rng rng(3);
  for (int i = 0; i < 20000; ++i) {
    auto p = sample_program(48, rng);
    check_against_oracle(sentence_unrank(p.sentence_index), p.input, 2000);
  }
}

TEST_CASE("prefix coherence: appending input to a halting program extends it") {
  for (const auto& st : strata(14)) {
    StratumIterator it(st.code_length, st.prefix_length, 0, st.size());
    ProgramCode p;
    while (it.next(p)) {
      auto s = sentence_unrank(p.sentence_index);
      ExecLimits limits;
      limits.threshold = 1000;
      auto base = execute(s, p.input, limits);
      if (base.status != Status::Halted)
        continue;
      for (const char* z : {"0", "1", "01", "110"}) {
        auto y = p.input;
        y.append(BitString::from_text(z));
        auto ext = execute(s, y, limits);
        CHECK(ext.status == Status::Extension);
        CHECK(ext.bits_consumed == base.bits_consumed);
        CHECK(ext.memory == base.memory);
      }
    }
  }
}

TEST_CASE("raising the threshold only resolves ThresholdSurpassed") {
  Rng rng(17);
  for (int i = 0; i < 5000; ++i) {
    auto p = sample_program(40, rng);
    auto s = sentence_unrank(p.sentence_index);
    ExecLimits lo, hi;
    lo.threshold = 1 + uniform_below(60, rng);
    hi.threshold = lo.threshold + 1 + uniform_below(500, rng);
    auto a = execute(s, p.input, lo);
    auto b = execute(s, p.input, hi);
    if (a.status != Status::ThresholdSurpassed) {
      CHECK(a.status == b.status);
      CHECK(a.steps_used == b.steps_used);
      CHECK(a.output == b.output);
    } else {
      CHECK(b.steps_used >= a.steps_used - 1);
    }
  }
}

TEST_CASE("run_prefix asks for input exactly when it needs it") {
  Program prog(parse(kCountOnes));
  ExecLimits limits;
  auto a = run_prefix(prog, BitString::from_text("11"), std::nullopt, limits);
  CHECK(a.event == Event::NeedInput);
  CHECK(a.bits_consumed == 2);
  auto b = run_prefix(prog, BitString::from_text("110"), std::nullopt, limits);
  CHECK(b.event == Event::Terminated);
  CHECK(b.output.str() == "1");
  auto c = run_prefix(prog, BitString::from_text("11"), 2, limits);
  CHECK(c.event == Event::ReadPastEnd);
}

} // TEST_SUITE
