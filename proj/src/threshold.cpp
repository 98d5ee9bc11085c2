#include "imp2/threshold.hpp"

#include "imp2/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace imp2 {

std::uint64_t threshold_from_steps(std::vector<std::uint64_t> steps,
                                   double quantile, double safety_factor) {
  if (!(quantile > 0.0 && quantile <= 1.0))
    throw InvalidArgument("quantile must lie in (0, 1]");
  if (!(safety_factor >= 1.0))
    throw InvalidArgument("safety factor must be at least 1");
  if (steps.empty())
    throw NoTermination(
        "no sampled program terminated; raise the provisional budget or the "
        "number of samples");
  std::sort(steps.begin(), steps.end());
  // Nearest rank: the smallest value covering a `quantile` share.
  auto rank = static_cast<std::size_t>(
      std::ceil(quantile * static_cast<double>(steps.size())));
  rank = std::clamp<std::size_t>(rank, 1, steps.size());
  const double scaled =
      std::ceil(safety_factor * static_cast<double>(steps[rank - 1]));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(scaled));
}

std::vector<ProgramCode> draw_samples(unsigned max_len, std::uint64_t count,
                                      std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ProgramCode> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i)
    out.push_back(sample_program(max_len, rng));
  return out;
}

ThresholdEstimate estimate_threshold(const ThresholdParams& params) {
  if (params.samples < 1)
    throw InvalidArgument("need at least one sample");
  if (params.provisional_budget < 1)
    throw InvalidArgument("provisional budget must be at least 1");

  const ExecLimits limits{params.provisional_budget, params.max_value_bits};
  std::vector<std::uint64_t> terminating;
  std::map<EnumIndex, Program> compiled;
  for (const auto& code : draw_samples(params.max_len, params.samples,
                                       params.seed)) {
    auto it = compiled.find(code.sentence_index);
    if (it == compiled.end())
      it = compiled
               .emplace(code.sentence_index,
                        Program(sentence_unrank(code.sentence_index)))
               .first;
    ExecOutcome r = execute(it->second, code.input, limits);
    if (r.status == Status::Halted || r.status == Status::Extension)
      terminating.push_back(r.steps_used);
  }

  ThresholdEstimate est;
  est.samples_drawn = params.samples;
  est.halting_samples = terminating.size();
  est.quantile_used = params.quantile;
  est.safety_factor = params.safety_factor;
  est.rng_seed = params.seed;
  if (!terminating.empty()) {
    est.max_halting_steps =
        *std::max_element(terminating.begin(), terminating.end());
    est.quantile_steps = threshold_from_steps(terminating, params.quantile, 1.0);
  }
  est.threshold = threshold_from_steps(std::move(terminating), params.quantile,
                                       params.safety_factor);
  return est;
}

} // namespace imp2
