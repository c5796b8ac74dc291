#include <benchmark/benchmark.h>

#include "cantorsum/baselines.hpp"
#include "cantorsum/configuration.hpp"
#include "cantorsum/recurrent.hpp"
#include "cantorsum/search.hpp"

using namespace cantorsum;

namespace {

HomogeneousIFS demo_ifs() {
  HomogeneousIFS k;
  k.labels = {"0", "1", "2", "3", "4"};
  k.offsets = {rat(0), rat(441, 2000), rat(887, 2000), rat(67, 100), rat(891, 1000)};
  k.ratio = rat(109, 1000);
  k.hull = 1;
  return k;
}

RecurrentCandidate demo_candidate() {
  auto k = demo_ifs();
  auto table = classify_pairs(k, k, rat(27, 100));
  auto parts = select_partitions(table, k);
  return build_L0(k, k, parts->A1, parts->A2, rat(27, 100), Mode::Cross);
}

void BM_RenormalizeWord(benchmark::State& state) {
  auto k = demo_ifs();
  Rational u = rat(1, 7);
  Word b{{1, 2}}, bp{{0, 3}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(renormalize_word(u, k, k, b, bp));
  }
}
BENCHMARK(BM_RenormalizeWord);

void BM_BuildL0(benchmark::State& state) {
  auto k = demo_ifs();
  auto table = classify_pairs(k, k, rat(27, 100));
  auto parts = select_partitions(table, k);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        build_L0(k, k, parts->A1, parts->A2, rat(27, 100), Mode::Cross));
  }
}
BENCHMARK(BM_BuildL0);

void BM_SearchTrial(benchmark::State& state) {
  auto cand = demo_candidate();
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(search_omega(cand, 1, seed++, rat(5)));
  }
}
BENCHMARK(BM_SearchTrial);

void BM_BruteSumset(benchmark::State& state) {
  auto third = middle_alpha(rat(1, 3));
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(brute_sumset(third, third, depth, SumMode::Difference));
  }
}
BENCHMARK(BM_BruteSumset)->Arg(4)->Arg(6)->Arg(8);

void BM_ClassifyPairs(benchmark::State& state) {
  auto k = refine(middle_alpha(rat(3, 10)), 3);  // 8 letters, 64 pairs
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify_pairs(k, k, rat(1, 2)));
  }
}
BENCHMARK(BM_ClassifyPairs);

}  // namespace

BENCHMARK_MAIN();
