#include <benchmark/benchmark.h>

#include "mapcs/dataset.hpp"
#include "mapcs/dtw.hpp"
#include "mapcs/simulate.hpp"
#include "mapcs/strategy.hpp"

using namespace mapcs;

namespace {

const ServiceResources& resources() {
  static const ServiceResources r = load_scripted_resources(MAPCS_DATA_DIR);
  return r;
}

// A wandering trace around a serpentine target on a 12x12 grid.
std::vector<Cell> serpentine(int n, int jitter) {
  std::vector<Cell> out;
  for (int i = 0; static_cast<int>(out.size()) < n; ++i) {
    int row = i / 12, col = i % 12;
    if (row % 2) col = 11 - col;
    out.push_back({col, row % 12});
    if (jitter && i % jitter == 0) out.push_back({col, (row + 1) % 12});
  }
  out.resize(n);
  return out;
}

void BM_DtwRouteDistance(benchmark::State& state) {
  auto target = serpentine(static_cast<int>(state.range(0)), 0);
  auto trace = serpentine(static_cast<int>(state.range(0) * 3 / 2), 4);
  for (auto _ : state) benchmark::DoNotOptimize(dtw_route_distance(trace, target));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DtwRouteDistance)->RangeMultiplier(2)->Range(16, 512)->Complexity(benchmark::oNSquared);

void BM_LabelUtterance(benchmark::State& state) {
  const auto& a = *resources().analyzer;
  const std::string text = "Ahora ve a la izquierda hasta el windmill y luego turn right at the bridge.";
  for (auto _ : state) benchmark::DoNotOptimize(a.label(text));
}
BENCHMARK(BM_LabelUtterance);

void BM_NounPhrases(benchmark::State& state) {
  const auto& a = *resources().analyzer;
  const std::string text = "sigue la path hasta el beach y pasa los trees cerca de la casa";
  for (auto _ : state) benchmark::DoNotOptimize(a.noun_phrases(text));
}
BENCHMARK(BM_NounPhrases);

void BM_ApplyStrategy(benchmark::State& state) {
  static const char* specs[] = {"alt_random", "alt_alignment", "ins_fem_incongruent"};
  auto cfg = StrategyConfig::parse(specs[state.range(0)]);
  const auto& r = resources();
  std::vector<Utterance> history{r.analyzer->analyze(Speaker::human, "Go down two steps please", Millis{0})};
  DialogState dialog(history);
  SeededRandom rng(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        apply_strategy(cfg, dialog, "Pon el tenedor junto a la cuchara.", *r.analyzer, *r.translator, rng));
  }
  state.SetLabel(specs[state.range(0)]);
}
BENCHMARK(BM_ApplyStrategy)->DenseRange(0, 2);

void BM_SimulateSession(benchmark::State& state) {
  SimulationOptions opts;
  opts.conditions = {StrategyConfig::parse("alt_short_context")};
  opts.n_sessions = 1;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    MemorySessionStore store;
    opts.seed = ++seed;
    benchmark::DoNotOptimize(simulate(resources(), opts, store));
  }
}
BENCHMARK(BM_SimulateSession)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
