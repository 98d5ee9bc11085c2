// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "imp2.h"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  imp2_string_free(s);
  return out;
}

const char* kFactorial =
    "(x[0] := 5; (x[1] := 1; (while (0 < x[0]) do (x[1] := (x[1] * x[0]); "
    "x[0] := (x[0] - 1)))))";

} // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(imp2_version()) == "1.0.0");
  CHECK(std::string(imp2_status_name(IMP2_HALTED)) == "Halted");
  CHECK(std::string(imp2_status_name(IMP2_THRESHOLD_SURPASSED)) ==
        "ThresholdSurpassed");
}

TEST_CASE("sentences") {
  imp2_sentence* s = nullptr;
  REQUIRE(imp2_sentence_unrank("1405", &s) == IMP2_OK);
  char* text = nullptr;
  REQUIRE(imp2_sentence_print(s, &text) == IMP2_OK);
  CHECK(take(text) == "x[0] := 5");
  char* index = nullptr;
  REQUIRE(imp2_sentence_rank(s, &index) == IMP2_OK);
  CHECK(take(index) == "1405");
  imp2_sentence_free(s);

  REQUIRE(imp2_sentence_parse(kFactorial, &s) == IMP2_OK);
  REQUIRE(imp2_sentence_rank(s, &index) == IMP2_OK);
  CHECK(take(index).size() == 90);
  imp2_exec_result r{};
  char* output = nullptr;
  REQUIRE(imp2_execute(s, "", 1000000, 0, &r, &output) == IMP2_OK);
  CHECK(r.status == IMP2_HALTED);
  CHECK(take(output) == "111001");
  imp2_sentence_free(s);

  CHECK(imp2_sentence_parse("x[01] := 5", &s) == IMP2_ERR_PARSE);
  CHECK(std::strstr(imp2_last_error(), "byte") != nullptr);
  CHECK(imp2_sentence_unrank("12a", &s) == IMP2_ERR_INVALID_ARGUMENT);
  CHECK(imp2_sentence_unrank(nullptr, &s) == IMP2_ERR_INVALID_ARGUMENT);
  imp2_sentence_free(nullptr);
}

TEST_CASE("program codes") {
  char* bits = nullptr;
  REQUIRE(imp2_encode_program("2", "01", &bits) == IMP2_OK);
  CHECK(take(bits) == "10101");
  char* n = nullptr;
  char* y = nullptr;
  REQUIRE(imp2_decode_program("11010", &n, &y) == IMP2_OK);
  CHECK(take(n) == "5");
  CHECK(take(y) == "");
  CHECK(imp2_decode_program("11", &n, &y) == IMP2_ERR_DECODE);
  char* count = nullptr;
  REQUIRE(imp2_count_programs(40, &count) == IMP2_OK);
  CHECK(take(count) == "2199020109825");
}

TEST_CASE("executing program bits") {
  imp2_exec_result r{};
  char* output = nullptr;
  REQUIRE(imp2_execute_program("00", 10, 0, &r, &output) == IMP2_OK);
  CHECK(r.status == IMP2_EXTENSION);
  CHECK(output == nullptr);
  REQUIRE(imp2_execute_program("0", 10, 0, &r, nullptr) == IMP2_OK);
  CHECK(r.status == IMP2_HALTED);
  CHECK(r.steps_used == 1);
  CHECK(imp2_execute_program("0", 0, 0, &r, nullptr) == IMP2_ERR_INVALID_ARGUMENT);
  CHECK(imp2_execute_program("0x", 10, 0, &r, nullptr) == IMP2_ERR_INVALID_ARGUMENT);
}

TEST_CASE("threshold estimation") {
  imp2_threshold_params p;
  imp2_threshold_params_init(&p);
  CHECK(p.samples == 100000);
  CHECK(p.quantile == 1.0);
  CHECK(p.safety_factor == 2.0);
  p.max_len = 1;
  p.samples = 10;
  p.provisional_budget = 100;
  imp2_threshold_estimate e{};
  REQUIRE(imp2_estimate_threshold(&p, &e) == IMP2_OK);
  CHECK(e.threshold == 2);
  p.samples = 0;
  CHECK(imp2_estimate_threshold(&p, &e) == IMP2_ERR_INVALID_ARGUMENT);
}

TEST_CASE("sweep, save, load and merge") {
  imp2_sweep_params sp;
  imp2_sweep_params_init(&sp);
  sp.max_len = 12;
  sp.threshold = 500;
  sp.threads = 1;
  imp2_aggregate* whole = nullptr;
  REQUIRE(imp2_sweep(&sp, &whole) == IMP2_OK);
  char* count = nullptr;
  REQUIRE(imp2_count_programs(12, &count) == IMP2_OK);
  CHECK(std::to_string(imp2_aggregate_total(whole)) == take(count));
  std::uint64_t sum = 0;
  for (int s = IMP2_HALTED; s <= IMP2_THRESHOLD_SURPASSED; ++s)
    sum += imp2_aggregate_status_count(whole, static_cast<imp2_run_status>(s));
  CHECK(sum == imp2_aggregate_total(whole));
  CHECK(imp2_aggregate_output_count(whole) > 0);

  auto dir = std::filesystem::temp_directory_path() / "imp2_capi";
  std::filesystem::create_directories(dir);
  imp2_aggregate* parts[2] = {nullptr, nullptr};
  for (std::uint32_t i = 0; i < 2; ++i) {
    sp.partition_index = i;
    sp.partition_count = 2;
    imp2_aggregate* a = nullptr;
    REQUIRE(imp2_sweep(&sp, &a) == IMP2_OK);
    auto path = (dir / ("p" + std::to_string(i) + ".res")).string();
    REQUIRE(imp2_aggregate_save(a, path.c_str()) == IMP2_OK);
    imp2_aggregate_free(a);
    REQUIRE(imp2_aggregate_load(path.c_str(), &parts[i]) == IMP2_OK);
  }
  imp2_aggregate* merged = nullptr;
  REQUIRE(imp2_aggregate_merge(parts, 2, "test", &merged) == IMP2_OK);
  char* a = nullptr;
  char* b = nullptr;
  REQUIRE(imp2_aggregate_to_text(whole, 1, &a) == IMP2_OK);
  REQUIRE(imp2_aggregate_to_text(merged, 1, &b) == IMP2_OK);
  CHECK(take(a) == take(b));
  REQUIRE(imp2_aggregate_to_text(merged, 0, &b) == IMP2_OK);
  CHECK(take(b).find("invocation=test") != std::string::npos);

  imp2_aggregate* dup[2] = {parts[0], parts[0]};
  imp2_aggregate* bad = nullptr;
  CHECK(imp2_aggregate_merge(dup, 2, nullptr, &bad) == IMP2_ERR_MERGE);
  CHECK(imp2_aggregate_load("/nonexistent.res", &bad) == IMP2_ERR_IO);

  uint32_t i = 0, k = 0;
  REQUIRE(imp2_parse_partition("3/8", &i, &k) == IMP2_OK);
  CHECK(i == 3);
  CHECK(k == 8);
  CHECK(imp2_parse_partition("8/8", &i, &k) == IMP2_ERR_INVALID_ARGUMENT);

  auto report = (dir / "report").string();
  REQUIRE(imp2_analyze(whole, nullptr, 0, 200, 1, report.c_str()) == IMP2_OK);
  CHECK(std::filesystem::exists(dir / "report" / "correlations.csv"));
  imp2_external missing{"x", "/nonexistent.csv"};
  CHECK(imp2_analyze(whole, &missing, 1, 200, 1, report.c_str()) == IMP2_ERR_IO);

  for (auto* p : parts)
    imp2_aggregate_free(p);
  imp2_aggregate_free(merged);
  imp2_aggregate_free(whole);
  imp2_aggregate_free(nullptr);
  std::filesystem::remove_all(dir);
}

TEST_CASE("statistics") {
  double x[] = {1, 2, 3};
  double y[] = {1, 1, 2};
  double rho = 0;
  REQUIRE(imp2_spearman(x, y, 3, &rho) == IMP2_OK);
  CHECK(rho == doctest::Approx(0.8660254037844386));
  double flat[] = {1, 1, 1};
  CHECK(imp2_pearson(x, flat, 3, &rho) == IMP2_ERR_UNDEFINED);
  imp2_correlation c{};
  REQUIRE(imp2_permutation_test(x, x, 3, 0, 20000, 5, &c) == IMP2_OK);
  CHECK(c.coefficient == doctest::Approx(1.0));
  CHECK(c.p_value > 0.15);
  CHECK(c.p_value < 0.19);
  CHECK(imp2_permutation_test(x, x, 3, 2, 10, 5, &c) == IMP2_ERR_INVALID_ARGUMENT);
}
