#include "imp2.h"

#include "imp2/analysis.hpp"
#include "imp2/codec.hpp"
#include "imp2/enumeration.hpp"
#include "imp2/error.hpp"
#include "imp2/interpreter.hpp"
#include "imp2/runner.hpp"
#include "imp2/syntax.hpp"
#include "imp2/threshold.hpp"

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <new>
#include <sstream>
#include <string>
#include <thread>

struct imp2_sentence {
  imp2::Sentence sentence;
};

struct imp2_aggregate {
  imp2::RunAggregate aggregate;
};

namespace {

thread_local std::string last_error;

template <class F>
imp2_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return IMP2_OK;
  } catch (const imp2::ParseError& e) {
    last_error = e.what();
    return IMP2_ERR_PARSE;
  } catch (const imp2::DecodeError& e) {
    last_error = e.what();
    return IMP2_ERR_DECODE;
  } catch (const imp2::InvalidArgument& e) {
    last_error = e.what();
    return IMP2_ERR_INVALID_ARGUMENT;
  } catch (const imp2::IoError& e) {
    last_error = e.what();
    return IMP2_ERR_IO;
  } catch (const imp2::MergeError& e) {
    last_error = e.what();
    return IMP2_ERR_MERGE;
  } catch (const imp2::UndefinedCorrelation& e) {
    last_error = e.what();
    return IMP2_ERR_UNDEFINED;
  } catch (const imp2::NoTermination& e) {
    last_error = e.what();
    return IMP2_ERR_NO_TERMINATION;
  } catch (const std::filesystem::filesystem_error& e) {
    last_error = e.what();
    return IMP2_ERR_IO;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return IMP2_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return IMP2_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p)
    throw imp2::InvalidArgument(std::string(what) + " must not be NULL");
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out)
    throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

imp2_run_status to_c(imp2::Status s) {
  return static_cast<imp2_run_status>(static_cast<int>(s));
}

void fill(const imp2::ExecOutcome& r, imp2_exec_result* result, char** output) {
  result->status = to_c(r.status);
  result->steps_used = r.steps_used;
  result->bits_consumed = r.bits_consumed;
  if (output)
    *output = r.output ? duplicate(r.output->str()) : nullptr;
}

imp2::ExecLimits limits(uint64_t threshold, uint64_t max_value_bits) {
  imp2::ExecLimits l;
  l.threshold = threshold;
  if (max_value_bits)
    l.max_value_bits = max_value_bits;
  return l;
}

} // namespace

extern "C" {

const char* imp2_version(void) { return imp2::kToolVersion.data(); }

const char* imp2_last_error(void) { return last_error.c_str(); }

const char* imp2_status_name(imp2_run_status status) {
  switch (status) {
  case IMP2_HALTED: return "Halted";
  case IMP2_EXTENSION: return "Extension";
  case IMP2_READ_PAST_END: return "ReadPastEnd";
  case IMP2_LOOP_DETECTED: return "LoopDetected";
  case IMP2_THRESHOLD_SURPASSED: return "ThresholdSurpassed";
  }
  return "unknown";
}

void imp2_string_free(char* s) { std::free(s); }

imp2_status imp2_sentence_parse(const char* text, imp2_sentence** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new imp2_sentence{imp2::parse(text)};
  });
}

imp2_status imp2_sentence_unrank(const char* index, imp2_sentence** out) {
  return guarded([&] {
    require(index, "index");
    require(out, "out");
    *out = new imp2_sentence{imp2::sentence_unrank(imp2::parse_decimal(index))};
  });
}

imp2_status imp2_sentence_rank(const imp2_sentence* s, char** index) {
  return guarded([&] {
    require(s, "sentence");
    require(index, "index");
    *index = duplicate(imp2::to_decimal(imp2::sentence_rank(s->sentence)));
  });
}

imp2_status imp2_sentence_print(const imp2_sentence* s, char** text) {
  return guarded([&] {
    require(s, "sentence");
    require(text, "text");
    *text = duplicate(imp2::print(s->sentence));
  });
}

void imp2_sentence_free(imp2_sentence* s) { delete s; }

imp2_status imp2_encode_program(const char* index, const char* input,
                                char** bits) {
  return guarded([&] {
    require(index, "index");
    require(bits, "bits");
    imp2::ProgramCode code{imp2::parse_decimal(index),
                           imp2::BitString::from_text(input ? input : "")};
    *bits = duplicate(imp2::encode_program(code).str());
  });
}

imp2_status imp2_decode_program(const char* bits, char** index, char** input) {
  return guarded([&] {
    require(bits, "bits");
    require(index, "index");
    require(input, "input");
    auto d = imp2::decode_program(imp2::BitString::from_text(bits));
    std::string n = imp2::to_decimal(d.program.sentence_index);
    *index = duplicate(n);
    try {
      *input = duplicate(d.program.input.str());
    } catch (...) {
      imp2_string_free(*index);
      *index = nullptr;
      throw;
    }
  });
}

imp2_status imp2_count_programs(unsigned max_len, char** count) {
  return guarded([&] {
    require(count, "count");
    *count = duplicate(imp2::to_decimal(imp2::count_programs(max_len)));
  });
}

imp2_status imp2_execute(const imp2_sentence* s, const char* input,
                         uint64_t threshold, uint64_t max_value_bits,
                         imp2_exec_result* result, char** output) {
  return guarded([&] {
    require(s, "sentence");
    require(result, "result");
    auto r = imp2::execute(s->sentence,
                           imp2::BitString::from_text(input ? input : ""),
                           limits(threshold, max_value_bits));
    fill(r, result, output);
  });
}

imp2_status imp2_execute_program(const char* bits, uint64_t threshold,
                                 uint64_t max_value_bits,
                                 imp2_exec_result* result, char** output) {
  return guarded([&] {
    require(bits, "bits");
    require(result, "result");
    auto d = imp2::decode_program(imp2::BitString::from_text(bits));
    fill(imp2::execute(d.program, limits(threshold, max_value_bits)), result,
         output);
  });
}

void imp2_threshold_params_init(imp2_threshold_params* params) {
  if (!params)
    return;
  imp2::ThresholdParams d;
  *params = imp2_threshold_params{0,
                                  d.samples,
                                  d.provisional_budget,
                                  d.quantile,
                                  d.safety_factor,
                                  0,
                                  d.max_value_bits};
}

imp2_status imp2_estimate_threshold(const imp2_threshold_params* p,
                                    imp2_threshold_estimate* out) {
  return guarded([&] {
    require(p, "params");
    require(out, "out");
    imp2::ThresholdParams params;
    params.max_len = p->max_len;
    params.samples = p->samples;
    params.provisional_budget = p->provisional_budget;
    params.quantile = p->quantile;
    params.safety_factor = p->safety_factor;
    params.seed = p->seed;
    if (p->max_value_bits)
      params.max_value_bits = p->max_value_bits;
    auto e = imp2::estimate_threshold(params);
    *out = imp2_threshold_estimate{e.threshold,        e.samples_drawn,
                                   e.halting_samples,  e.max_halting_steps,
                                   e.quantile_steps,   e.quantile_used,
                                   e.safety_factor,    e.rng_seed};
  });
}

void imp2_sweep_params_init(imp2_sweep_params* params) {
  if (!params)
    return;
  *params = imp2_sweep_params{};
  params->max_value_bits = imp2::ExecLimits{}.max_value_bits;
  params->partition_count = 1;
}

imp2_status imp2_sweep(const imp2_sweep_params* params, imp2_aggregate** out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    imp2::SweepOptions o;
    o.max_len = params->max_len;
    o.limits = limits(params->threshold, params->max_value_bits);
    o.partition = {params->partition_index, params->partition_count};
    o.threads = params->threads ? params->threads
                                : std::max(1U, std::thread::hardware_concurrency());
    if (params->seed)
      o.seed = params->seed;
    if (params->invocation)
      o.invocation = params->invocation;
    if (params->checkpoint_dir)
      o.checkpoint_dir = params->checkpoint_dir;
    if (params->verbose)
      o.progress = &std::cerr;
    *out = new imp2_aggregate{imp2::sweep(o)};
  });
}

imp2_status imp2_parse_partition(const char* text, uint32_t* index,
                                 uint32_t* count) {
  return guarded([&] {
    require(text, "text");
    require(index, "index");
    require(count, "count");
    auto p = imp2::parse_partition(text);
    *index = p.index;
    *count = p.count;
  });
}

imp2_status imp2_aggregate_load(const char* path, imp2_aggregate** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new imp2_aggregate{imp2::load_results(path)};
  });
}

imp2_status imp2_aggregate_save(const imp2_aggregate* agg, const char* path) {
  return guarded([&] {
    require(agg, "aggregate");
    require(path, "path");
    imp2::save_results(agg->aggregate, path);
  });
}

imp2_status imp2_aggregate_to_text(const imp2_aggregate* agg, int body_only,
                                   char** text) {
  return guarded([&] {
    require(agg, "aggregate");
    require(text, "text");
    std::ostringstream s;
    if (body_only)
      imp2::write_results_body(agg->aggregate, s);
    else
      imp2::write_results(agg->aggregate, s);
    *text = duplicate(s.str());
  });
}

imp2_status imp2_aggregate_merge(const imp2_aggregate* const* parts,
                                 size_t count, const char* invocation,
                                 imp2_aggregate** out) {
  return guarded([&] {
    require(parts, "parts");
    require(out, "out");
    std::vector<imp2::RunAggregate> items;
    items.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      require(parts[i], "aggregate");
      items.push_back(parts[i]->aggregate);
    }
    auto merged = imp2::merge(items);
    if (invocation)
      merged.metadata.invocation = invocation;
    *out = new imp2_aggregate{std::move(merged)};
  });
}

uint64_t imp2_aggregate_total(const imp2_aggregate* agg) {
  return agg ? agg->aggregate.total_programs() : 0;
}

uint64_t imp2_aggregate_status_count(const imp2_aggregate* agg,
                                     imp2_run_status status) {
  if (!agg || status < IMP2_HALTED || status > IMP2_THRESHOLD_SURPASSED)
    return 0;
  return agg->aggregate.tally(static_cast<imp2::Status>(status));
}

size_t imp2_aggregate_output_count(const imp2_aggregate* agg) {
  return agg ? agg->aggregate.outputs.size() : 0;
}

void imp2_aggregate_free(imp2_aggregate* agg) { delete agg; }

imp2_status imp2_spearman(const double* xs, const double* ys, size_t n,
                          double* out) {
  return guarded([&] {
    require(out, "out");
    if (n) {
      require(xs, "xs");
      require(ys, "ys");
    }
    *out = imp2::spearman({xs, n}, {ys, n});
  });
}

imp2_status imp2_pearson(const double* xs, const double* ys, size_t n,
                         double* out) {
  return guarded([&] {
    require(out, "out");
    if (n) {
      require(xs, "xs");
      require(ys, "ys");
    }
    *out = imp2::pearson({xs, n}, {ys, n});
  });
}

imp2_status imp2_permutation_test(const double* xs, const double* ys, size_t n,
                                  int method, uint32_t permutations,
                                  uint64_t seed, imp2_correlation* out) {
  return guarded([&] {
    require(out, "out");
    if (method != 0 && method != 1)
      throw imp2::InvalidArgument("method must be 0 (spearman) or 1 (pearson)");
    if (n) {
      require(xs, "xs");
      require(ys, "ys");
    }
    auto r = imp2::permutation_test(
        {xs, n}, {ys, n},
        method == 0 ? imp2::Method::Spearman : imp2::Method::Pearson,
        permutations, seed);
    *out = imp2_correlation{*r.coefficient, *r.p_value, r.n, r.permutations,
                            r.rng_seed};
  });
}

imp2_status imp2_analyze(const imp2_aggregate* agg,
                         const imp2_external* externals, size_t external_count,
                         uint32_t permutations, uint64_t seed,
                         const char* report_dir) {
  return guarded([&] {
    require(agg, "aggregate");
    require(report_dir, "report_dir");
    if (external_count)
      require(externals, "externals");
    imp2::AnalysisOptions options;
    options.permutations = permutations;
    options.seed = seed;
    for (size_t i = 0; i < external_count; ++i) {
      require(externals[i].name, "external name");
      require(externals[i].path, "external path");
      options.externals.push_back(
          imp2::load_external(externals[i].path, externals[i].name));
    }
    auto report = imp2::analyze(agg->aggregate, options);
    imp2::write_report(report, report_dir);
  });
}

} // extern "C"
