#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "umlk/evaluator.hpp"
#include "umlk/game.hpp"
#include "umlk/parser.hpp"
#include "umlk/text.hpp"

using namespace umlk;

static void BM_Similarity(benchmark::State& state) {
  gen::Rng rng(1);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < 256; ++i) pairs.emplace_back(gen::text(rng, 4, state.range(0)), gen::text(rng, 4, state.range(0)));
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [a, b] = pairs[i++ % pairs.size()];
    benchmark::DoNotOptimize(similarity(a, b));
  }
}
BENCHMARK(BM_Similarity)->Arg(8)->Arg(32)->Arg(128);

static void BM_ParseDocument(benchmark::State& state) {
  const std::string text = fx::shop_diagram().text();
  for (auto _ : state) benchmark::DoNotOptimize(parse_document(text));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseDocument);

static void BM_EvaluateShop(benchmark::State& state) {
  const auto exercise = fx::exercise("shop", {fx::shop_reference(), fx::library_reference(), fx::clinic_reference()});
  const auto doc = fx::shop_violations()[7].diagram.parse();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_exercise(exercise, doc));
}
BENCHMARK(BM_EvaluateShop);

static void BM_ApplyCheck(benchmark::State& state) {
  const CourseConfig config;
  const StudentState student = new_student("s", "S", config);
  CheckSummary summary;
  summary.completeness = 0.5;
  for (int i = 0; i < state.range(0); ++i) summary.fingerprints.insert(gen::fingerprint(i));
  for (auto _ : state) benchmark::DoNotOptimize(apply_check(student, config, "ex", 100, summary));
}
BENCHMARK(BM_ApplyCheck)->Arg(0)->Arg(8)->Arg(64);
BENCHMARK_MAIN();
