#include "imp2/error.hpp"
#include "imp2/threshold.hpp"

#include <doctest.h>

#include <algorithm>

using namespace imp2;

TEST_SUITE("threshold") {

TEST_CASE("quantile arithmetic") {
  CHECK(threshold_from_steps({3, 10}, 1.0, 2.0) == 20);
  CHECK(threshold_from_steps({10, 3}, 1.0, 2.0) == 20);
  CHECK(threshold_from_steps({7}, 1.0, 1.5) == 11); // ceil(10.5)
  // Nearest rank: ceil(q * n)-th smallest.
  CHECK(threshold_from_steps({1, 2, 3, 4}, 0.5, 1.0) == 2);
  CHECK(threshold_from_steps({1, 2, 3, 4}, 0.51, 1.0) == 3);
  CHECK(threshold_from_steps({1, 2, 3, 4}, 0.01, 1.0) == 1);
  CHECK_THROWS_AS(threshold_from_steps({}, 1.0, 2.0), NoTermination);
  CHECK_THROWS_AS(threshold_from_steps({1}, 0.0, 2.0), InvalidArgument);
  CHECK_THROWS_AS(threshold_from_steps({1}, 1.5, 2.0), InvalidArgument);
  CHECK_THROWS_AS(threshold_from_steps({1}, 1.0, 0.5), InvalidArgument);
}

TEST_CASE("singleton space") {
  ThresholdParams p;
  p.max_len = 1;
  p.samples = 10;
  p.provisional_budget = 100;
  p.seed = 1;
  auto e = estimate_threshold(p);
  // Only <0, eps> = skip, one step.
  CHECK(e.threshold == 2);
  CHECK(e.samples_drawn == 10);
  CHECK(e.halting_samples == 10);
  CHECK(e.max_halting_steps == 1);
  CHECK(e.rng_seed == 1);
}

TEST_CASE("same seed, same estimate; draws follow the seed") {
  ThresholdParams p;
  p.max_len = 24;
  p.samples = 3000;
  p.seed = 42;
  CHECK(estimate_threshold(p) == estimate_threshold(p));
  CHECK(draw_samples(24, 100, 42) == draw_samples(24, 100, 42));
  CHECK_FALSE(draw_samples(24, 100, 42) == draw_samples(24, 100, 43));
}

TEST_CASE("monotone in the safety factor and the quantile") {
  ThresholdParams p;
  p.max_len = 22;
  p.samples = 2000;
  p.seed = 9;
  std::uint64_t last = 0;
  for (double c : {1.0, 1.5, 2.0, 3.0, 7.25}) {
    p.safety_factor = c;
    auto t = estimate_threshold(p).threshold;
    CHECK(t >= last);
    last = t;
  }
  p.safety_factor = 2.0;
  auto full = estimate_threshold(p).threshold;
  for (double q : {0.1, 0.5, 0.9, 0.99}) {
    p.quantile = q;
    CHECK(estimate_threshold(p).threshold <= full);
  }
}

TEST_CASE("coverage: terminating samples stay terminating under the result") {
  ThresholdParams p;
  p.max_len = 26;
  p.samples = 5000;
  p.seed = 1234;
  auto e = estimate_threshold(p);
  ExecLimits limits;
  limits.threshold = e.threshold;
  ExecLimits wide;
  wide.threshold = p.provisional_budget;
  std::uint64_t terminating = 0, max_steps = 0;
  for (const auto& code : draw_samples(p.max_len, p.samples, p.seed)) {
    auto before = execute(code, wide);
    if (before.status != Status::Halted && before.status != Status::Extension)
      continue;
    ++terminating;
    max_steps = std::max(max_steps, before.steps_used);
    auto after = execute(code, limits);
    CHECK(after.status == before.status);
  }
  CHECK(terminating == e.halting_samples);
  CHECK(max_steps == e.max_halting_steps);
}

TEST_CASE("invalid parameters") {
  ThresholdParams p;
  p.max_len = 10;
  p.samples = 0;
  CHECK_THROWS_AS(estimate_threshold(p), InvalidArgument);
  p.samples = 10;
  p.provisional_budget = 0;
  CHECK_THROWS_AS(estimate_threshold(p), InvalidArgument);
  p.provisional_budget = 10;
  p.max_len = 0;
  CHECK_THROWS_AS(estimate_threshold(p), InvalidArgument);
}

TEST_CASE("no terminating sample is an error") {
  // Under a one-step budget only skip terminates; a single draw of another
  // sentence leaves nothing to estimate from.
  ThresholdParams p;
  p.max_len = 3;
  p.samples = 1;
  p.provisional_budget = 1;
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    p.seed = seed;
    if (draw_samples(3, 1, seed)[0].sentence_index == 0) {
      CHECK(estimate_threshold(p).threshold == 2);
    } else {
      CHECK_THROWS_AS(estimate_threshold(p), NoTermination);
      ++checked;
    }
  }
  CHECK(checked > 0);
}

} // TEST_SUITE
