#include <benchmark/benchmark.h>

#include <algorithm>
#include <filesystem>
#include <random>

#include "chorale/features.hpp"
#include "chorale/grader.hpp"
#include "chorale/ingest.hpp"
#include "chorale/metrics.hpp"
#include "chorale/profile.hpp"

namespace fs = std::filesystem;
using namespace chorale;

namespace {

std::vector<fs::path> bach_files() {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(CHORALE_BENCH_DATA)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

const std::vector<Chorale>& corpus() {
  static const std::vector<Chorale> c = [] {
    std::vector<Chorale> out;
    for (const auto& f : bach_files()) out.push_back(load_chorale_file(f));
    return out;
  }();
  return c;
}

Distribution random_numeric(std::mt19937_64& rng, std::size_t n) {
  NumericCounts counts;
  std::uniform_int_distribution<int> value(-100000, 100000);
  std::uniform_int_distribution<int> count(1, 50);
  while (counts.size() < n) counts[Rational(value(rng), 4)] = count(rng);
  return Distribution::from_counts(counts);
}

void BM_WassersteinNumeric(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  auto p = random_numeric(rng, n);
  auto q = random_numeric(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(wasserstein_numeric(p, q));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WassersteinNumeric)->RangeMultiplier(4)->Range(8, 2048)->Complexity();

void BM_FindRepeats(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::vector<int> tokens(static_cast<std::size_t>(state.range(0)));
  for (auto& t : tokens) t = static_cast<int>(rng() % 6);
  for (auto _ : state) benchmark::DoNotOptimize(find_repeats(tokens));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FindRepeats)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_ParseMusicXml(benchmark::State& state) {
  const auto path = bach_files().front();
  const std::string doc = read_file(path);
  for (auto _ : state) benchmark::DoNotOptimize(parse_musicxml(doc, "bench"));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * doc.size()));
}
BENCHMARK(BM_ParseMusicXml);

void BM_ExtractObservations(benchmark::State& state) {
  const Chorale& c = corpus().front();
  for (auto _ : state) benchmark::DoNotOptimize(extract_observations(c));
}
BENCHMARK(BM_ExtractObservations);

void BM_BuildProfile(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_profile(corpus()));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * corpus().size()));
}
BENCHMARK(BM_BuildProfile)->Unit(benchmark::kMillisecond);

void BM_Grade(benchmark::State& state) {
  static const CorpusProfile profile = build_profile(corpus());
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(grade(corpus()[i], profile));
    i = (i + 1) % corpus().size();
  }
}
BENCHMARK(BM_Grade);

}  // namespace

BENCHMARK_MAIN();
