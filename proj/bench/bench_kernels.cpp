// Serial references against their OpenMP kernels. The second argument of
// each parallel benchmark is the worker count.

#include <benchmark/benchmark.h>

#include "mondrian/census.hpp"
#include "mondrian/numtheory.hpp"
#include "mondrian/search.hpp"

namespace nt = mondrian::numtheory;
namespace tl = mondrian::tiling;

namespace {

const nt::FactorTable& table() {
  static const nt::FactorTable t = nt::build_factor_table(1'000'000, 4);
  return t;
}

// Every exact-defect window of width w at side n, largest areas first.
std::vector<std::vector<tl::Rect>> layer_sets(std::uint32_t n, std::uint64_t w) {
  tl::PieceSetFilter f;
  f.require_lo = f.require_hi = true;
  f.allow_whole_square = false;
  std::vector<std::vector<tl::Rect>> all;
  for (std::uint64_t lo = std::uint64_t{n} * n / 2; lo >= 1; --lo) {
    auto sets = tl::collect_piece_sets(n, lo, lo + w, f);
    all.insert(all.end(), sets.begin(), sets.end());
  }
  return all;
}

void BM_FactorTableSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(nt::build_factor_table_reference(s.range(0)));
}
void BM_FactorTableParallel(benchmark::State& s) {
  for (auto _ : s)
    benchmark::DoNotOptimize(nt::build_factor_table(s.range(0), static_cast<int>(s.range(1))));
}

void BM_RoughCountSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(nt::rough_count_reference(s.range(0), 100));
}
void BM_RoughCountParallel(benchmark::State& s) {
  for (auto _ : s)
    benchmark::DoNotOptimize(nt::rough_count(s.range(0), 100, static_cast<int>(s.range(1))));
}

void BM_CensusSerial(benchmark::State& s) {
  const auto& t = table();
  for (auto _ : s) benchmark::DoNotOptimize(mondrian::census::run_chain_census_serial(s.range(0), t));
}
void BM_CensusParallel(benchmark::State& s) {
  const auto& t = table();
  for (auto _ : s)
    benchmark::DoNotOptimize(
        mondrian::census::run_chain_census(s.range(0), t, static_cast<int>(s.range(1))));
}

// M(18) = 8; the defect-8 layer runs until its first tiling.
void BM_PieceSetsSerial(benchmark::State& s) {
  const auto sets = layer_sets(18, 8);
  for (auto _ : s) benchmark::DoNotOptimize(tl::search_piece_sets_serial(18, sets, tl::kDefaultNodeBudget));
}
void BM_PieceSetsParallel(benchmark::State& s) {
  const auto sets = layer_sets(18, 8);
  for (auto _ : s)
    benchmark::DoNotOptimize(
        tl::search_piece_sets(18, sets, tl::kDefaultNodeBudget, static_cast<int>(s.range(0))));
}

void BM_SolveM(benchmark::State& s) {
  for (auto _ : s)
    benchmark::DoNotOptimize(tl::solve_m(static_cast<std::uint32_t>(s.range(0)), tl::kDefaultNodeBudget,
                                         static_cast<int>(s.range(1))));
}

}  // namespace

BENCHMARK(BM_FactorTableSerial)->Arg(10'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FactorTableParallel)->Args({10'000'000, 1})->Args({10'000'000, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RoughCountSerial)->Arg(10'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RoughCountParallel)->Args({10'000'000, 1})->Args({10'000'000, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CensusSerial)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CensusParallel)->Args({1'000'000, 1})->Args({1'000'000, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PieceSetsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PieceSetsParallel)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveM)->Args({18, 1})->Args({18, 4})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
