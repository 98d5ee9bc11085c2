#pragma once

// Halting-threshold estimation by sampling the program space: run N uniform
// samples under a provisional budget, keep the step counts of runs that
// terminated (Halted or Extension), and scale their q-quantile by a safety
// factor.

#include "imp2/codec.hpp"
#include "imp2/interpreter.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace imp2 {

struct ThresholdParams {
  unsigned max_len = 0;
  std::uint64_t samples = 100'000;
  std::uint64_t provisional_budget = 1'000'000;
  double quantile = 1.0;      // (0, 1]; 1 is the maximum
  double safety_factor = 2.0; // >= 1
  std::uint64_t seed = 0;
  std::size_t max_value_bits = ExecLimits{}.max_value_bits;
};

struct ThresholdEstimate {
  std::uint64_t threshold = 0;
  std::uint64_t samples_drawn = 0;
  std::uint64_t halting_samples = 0;
  std::uint64_t max_halting_steps = 0;
  std::uint64_t quantile_steps = 0;
  double quantile_used = 1.0;
  double safety_factor = 2.0;
  std::uint64_t rng_seed = 0;

  friend bool operator==(const ThresholdEstimate&,
                         const ThresholdEstimate&) = default;
};

/// ceil(factor * nearest-rank quantile of `steps`). Throws NoTermination
/// when `steps` is empty and InvalidArgument on out-of-range parameters.
std::uint64_t threshold_from_steps(std::vector<std::uint64_t> steps,
                                   double quantile, double safety_factor);

/// The programs the estimator executes, in draw order.
std::vector<ProgramCode> draw_samples(unsigned max_len, std::uint64_t count,
                                      std::uint64_t seed);

ThresholdEstimate estimate_threshold(const ThresholdParams& params);

} // namespace imp2
