// imp2ctm: command-line front end over the imp2 C API.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include "imp2.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct DomainError {
  std::string message;
};

void check(imp2_status s) {
  if (s != IMP2_OK)
    throw DomainError{imp2_last_error()};
}

// Owning wrapper for strings handed out by the library.
struct Text {
  char* p = nullptr;
  Text() = default;
  Text(const Text&) = delete;
  Text& operator=(const Text&) = delete;
  ~Text() { imp2_string_free(p); }
  char** out() { return &p; }
  std::string str() const { return p ? p : ""; }
};

using SentencePtr = std::unique_ptr<imp2_sentence, decltype(&imp2_sentence_free)>;
using AggregatePtr =
    std::unique_ptr<imp2_aggregate, decltype(&imp2_aggregate_free)>;

SentencePtr adopt(imp2_sentence* s) { return {s, &imp2_sentence_free}; }
AggregatePtr adopt(imp2_aggregate* a) { return {a, &imp2_aggregate_free}; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DomainError{"cannot open " + path};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_or_print(const imp2_aggregate* agg, const std::string& out) {
  if (out.empty()) {
    Text text;
    check(imp2_aggregate_to_text(agg, 0, text.out()));
    std::cout << text.str();
  } else {
    check(imp2_aggregate_save(agg, out.c_str()));
  }
}

std::string join_argv(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i)
      s += ' ';
    s += argv[i];
  }
  return s;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"IMP2 program-space enumeration and complexity estimation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", imp2_version());
  const std::string invocation = join_argv(argc, argv);

  // unrank
  auto* unrank = app.add_subcommand("unrank", "print the sentence at an index");
  std::string unrank_index;
  unrank->add_option("index", unrank_index, "decimal index")->required();

  // rank
  auto* rank = app.add_subcommand("rank", "print the index of a sentence");
  std::string rank_text, rank_file;
  auto* rank_inline = rank->add_option("sentence", rank_text, "sentence text");
  rank->add_option("--file", rank_file, "read the sentence from a file")
      ->excludes(rank_inline);

  // exec
  auto* exec = app.add_subcommand("exec", "decode and execute one program");
  std::string exec_bits, exec_sentence, exec_input;
  std::uint64_t exec_threshold = 1000000, exec_value_bits = 0;
  auto* bits_opt = exec->add_option("bits", exec_bits, "program bit string");
  auto* sentence_opt =
      exec->add_option("--sentence", exec_sentence, "sentence index")
          ->excludes(bits_opt);
  exec->add_option("--input", exec_input, "input bits")->needs(sentence_opt);
  exec->add_option("--threshold", exec_threshold, "step budget")
      ->capture_default_str();
  exec->add_option("--max-value-bits", exec_value_bits,
                   "largest value size in bits (0: library default)");

  // count
  auto* count = app.add_subcommand("count", "count programs up to a length");
  unsigned count_len = 0;
  count->add_option("--max-len", count_len, "maximum code length")->required();

  // threshold
  auto* thr = app.add_subcommand("threshold", "estimate a halting threshold");
  imp2_threshold_params tp;
  imp2_threshold_params_init(&tp);
  thr->add_option("--max-len", tp.max_len)->required();
  thr->add_option("--samples", tp.samples)->capture_default_str();
  thr->add_option("--budget", tp.provisional_budget, "provisional step budget")
      ->capture_default_str();
  thr->add_option("--quantile", tp.quantile)->capture_default_str();
  thr->add_option("--safety-factor", tp.safety_factor)->capture_default_str();
  thr->add_option("--max-value-bits", tp.max_value_bits)->capture_default_str();
  thr->add_option("--seed", tp.seed)->required();

  // run
  auto* run = app.add_subcommand("run", "sweep the program space");
  imp2_sweep_params sp;
  imp2_sweep_params_init(&sp);
  std::string run_partition = "0/1", run_out, run_seed, run_checkpoint;
  bool run_verbose = false;
  run->add_option("--max-len", sp.max_len)->required();
  run->add_option("--threshold", sp.threshold)->required();
  run->add_option("--max-value-bits", sp.max_value_bits)->capture_default_str();
  run->add_option("--partition", run_partition, "i/k")->capture_default_str();
  run->add_option("--out", run_out, "results file (default: stdout)");
  run->add_option("--threads", sp.threads, "worker threads (0: all cores)")
      ->capture_default_str();
  run->add_option("--seed", run_seed, "recorded in metadata");
  run->add_option("--checkpoint", run_checkpoint, "checkpoint directory");
  run->add_flag("-v,--verbose", run_verbose, "progress on stderr");

  // merge
  auto* merge = app.add_subcommand("merge", "merge partition results");
  std::vector<std::string> merge_paths;
  std::string merge_out;
  merge->add_option("results", merge_paths)->required();
  merge->add_option("--out", merge_out, "results file (default: stdout)");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "write the complexity report");
  std::string an_results, an_report;
  std::vector<std::string> an_external;
  std::uint32_t an_perms = 20000;
  std::uint64_t an_seed = 0;
  analyze->add_option("--results", an_results)->required();
  analyze->add_option("--external", an_external,
                      "NAME=CSV or CSV (name from the file stem)");
  analyze->add_option("--report", an_report, "report directory")->required();
  analyze->add_option("--permutations", an_perms)->capture_default_str();
  analyze->add_option("--seed", an_seed)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*unrank) {
      imp2_sentence* s = nullptr;
      check(imp2_sentence_unrank(unrank_index.c_str(), &s));
      auto owned = adopt(s);
      Text text;
      check(imp2_sentence_print(s, text.out()));
      std::cout << text.str() << '\n';
    } else if (*rank) {
      if (rank_file.empty() && rank_inline->count() == 0) {
        std::cerr << "rank: give a sentence or --file\n";
        return 2;
      }
      std::string source = rank_file.empty() ? rank_text : read_file(rank_file);
      imp2_sentence* s = nullptr;
      check(imp2_sentence_parse(source.c_str(), &s));
      auto owned = adopt(s);
      Text index;
      check(imp2_sentence_rank(s, index.out()));
      std::cout << index.str() << '\n';
    } else if (*exec) {
      imp2_exec_result r{};
      Text output;
      if (!exec_sentence.empty()) {
        imp2_sentence* s = nullptr;
        check(imp2_sentence_unrank(exec_sentence.c_str(), &s));
        auto owned = adopt(s);
        check(imp2_execute(s, exec_input.c_str(), exec_threshold,
                           exec_value_bits, &r, output.out()));
      } else if (bits_opt->count()) {
        check(imp2_execute_program(exec_bits.c_str(), exec_threshold,
                                   exec_value_bits, &r, output.out()));
      } else {
        std::cerr << "exec: give program bits or --sentence\n";
        return 2;
      }
      std::cout << imp2_status_name(r.status) << " steps=" << r.steps_used
                << " bits_consumed=" << r.bits_consumed;
      if (r.status == IMP2_HALTED)
        std::cout << " output=" << output.str();
      std::cout << '\n';
    } else if (*count) {
      Text n;
      check(imp2_count_programs(count_len, n.out()));
      std::cout << n.str() << '\n';
    } else if (*thr) {
      imp2_threshold_estimate e{};
      check(imp2_estimate_threshold(&tp, &e));
      std::cout << "threshold=" << e.threshold << '\n'
                << "samples_drawn=" << e.samples_drawn << '\n'
                << "halting_samples=" << e.halting_samples << '\n'
                << "max_halting_steps=" << e.max_halting_steps << '\n'
                << "quantile_steps=" << e.quantile_steps << '\n'
                << "quantile_used=" << e.quantile_used << '\n'
                << "safety_factor=" << e.safety_factor << '\n'
                << "rng_seed=" << e.rng_seed << '\n';
    } else if (*run) {
      check(imp2_parse_partition(run_partition.c_str(), &sp.partition_index,
                                 &sp.partition_count));
      sp.seed = run_seed.empty() ? nullptr : run_seed.c_str();
      sp.invocation = invocation.c_str();
      sp.checkpoint_dir = run_checkpoint.empty() ? nullptr : run_checkpoint.c_str();
      sp.verbose = run_verbose;
      imp2_aggregate* agg = nullptr;
      check(imp2_sweep(&sp, &agg));
      auto owned = adopt(agg);
      write_or_print(agg, run_out);
    } else if (*merge) {
      std::vector<AggregatePtr> parts;
      std::vector<const imp2_aggregate*> raw;
      for (const auto& p : merge_paths) {
        imp2_aggregate* a = nullptr;
        check(imp2_aggregate_load(p.c_str(), &a));
        parts.push_back(adopt(a));
        raw.push_back(a);
      }
      imp2_aggregate* merged = nullptr;
      check(imp2_aggregate_merge(raw.data(), raw.size(), invocation.c_str(),
                                 &merged));
      auto owned = adopt(merged);
      write_or_print(merged, merge_out);
    } else if (*analyze) {
      imp2_aggregate* agg = nullptr;
      check(imp2_aggregate_load(an_results.c_str(), &agg));
      auto owned = adopt(agg);
      std::vector<std::string> names, paths;
      for (const auto& spec : an_external) {
        auto eq = spec.find('=');
        if (eq == std::string::npos) {
          auto slash = spec.find_last_of('/');
          std::string stem = spec.substr(slash == std::string::npos ? 0 : slash + 1);
          if (auto dot = stem.rfind('.'); dot != std::string::npos && dot > 0)
            stem.resize(dot);
          names.push_back(stem);
          paths.push_back(spec);
        } else {
          names.push_back(spec.substr(0, eq));
          paths.push_back(spec.substr(eq + 1));
        }
      }
      std::vector<imp2_external> externals;
      for (std::size_t i = 0; i < names.size(); ++i)
        externals.push_back({names[i].c_str(), paths[i].c_str()});
      check(imp2_analyze(agg, externals.data(), externals.size(), an_perms,
                         an_seed, an_report.c_str()));
    }
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.message << '\n';
    return 1;
  }
  return 0;
}
