// Compares the serial reference scan kernel with the OpenMP variant, first on
// a synthetic predicate (pure kernel scaling) and then on the real
// verification suites whose cost is dominated by those scans.

#include <benchmark/benchmark.h>

#include <cstdint>

#include "amalgam/catalog.hpp"
#include "amalgam/checks.hpp"
#include "amalgam/rank2.hpp"
#include "amalgam/rankk.hpp"

namespace {

using namespace amalgam;

// Hash-mix predicate that never fails on the scanned ranges but is not
// provably constant, so the serial loop cannot be folded away; gives each
// index enough arithmetic that the scan is compute-bound like the real
// membership predicates.
bool mixed_bit(std::uint64_t i) {
  std::uint64_t x = i * 0x9e3779b97f4a7c15ull;
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x != 0x0123456789abcdefull;
}

void BM_scan(benchmark::State& state, ExecMode mode) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    CheckResult r = check_all(n, mixed_bit, mode);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}

const Rank2Instance& rank2_small() {  // full-level exhaustive suite fits
  static Rank2Instance inst =
      build_rank2(catalog_group("Dihedral(4)"), catalog_group("Cyclic(2)"), 1);
  return inst;
}

const Rank2Instance& rank2_mid() {  // fast level: bounded checks on a bigger group
  static Rank2Instance inst =
      build_rank2(catalog_group("Dihedral(4)"), catalog_group("Cyclic(2)"), 2);
  return inst;
}

using Rank2Fn = const Rank2Instance& (*)();

void BM_verify_rank2(benchmark::State& state, Rank2Fn get, VerifyLevel level,
                     ExecMode mode) {
  const Rank2Instance& inst = get();  // built once, outside the timed loop
  for (auto _ : state) {
    auto checks = verify_rank2(inst, level, mode);
    benchmark::DoNotOptimize(checks);
  }
}

const RankKInstance& rank3_sample() {
  static RankKInstance inst = build_rankk(
      {catalog_group("Sym(3)"), catalog_group("Sym(3)"), catalog_group("Cyclic(2)")},
      1);
  return inst;
}

void BM_verify_rankk(benchmark::State& state, ExecMode mode) {
  const RankKInstance& inst = rank3_sample();
  for (auto _ : state) {
    auto checks = verify_rankk(inst, VerifyLevel::kFull, mode);
    benchmark::DoNotOptimize(checks);
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_scan, serial, ExecMode::kSerial)
    ->RangeMultiplier(16)
    ->Range(1 << 14, 1 << 22)
    ->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_scan, parallel, ExecMode::kParallel)
    ->RangeMultiplier(16)
    ->Range(1 << 14, 1 << 22)
    ->Unit(benchmark::kMicrosecond);

BENCHMARK_CAPTURE(BM_verify_rank2, full_serial, &rank2_small, VerifyLevel::kFull,
                  ExecMode::kSerial)
    ->Unit(benchmark::kMillisecond)
    ->MinTime(0.5);
BENCHMARK_CAPTURE(BM_verify_rank2, full_parallel, &rank2_small, VerifyLevel::kFull,
                  ExecMode::kParallel)
    ->Unit(benchmark::kMillisecond)
    ->MinTime(0.5);

BENCHMARK_CAPTURE(BM_verify_rank2, fast_serial, &rank2_mid, VerifyLevel::kFast,
                  ExecMode::kSerial)
    ->Unit(benchmark::kMillisecond)
    ->MinTime(0.5);
BENCHMARK_CAPTURE(BM_verify_rank2, fast_parallel, &rank2_mid, VerifyLevel::kFast,
                  ExecMode::kParallel)
    ->Unit(benchmark::kMillisecond)
    ->MinTime(0.5);

BENCHMARK_CAPTURE(BM_verify_rankk, full_serial, ExecMode::kSerial)
    ->Unit(benchmark::kMillisecond)
    ->MinTime(0.5);
BENCHMARK_CAPTURE(BM_verify_rankk, full_parallel, ExecMode::kParallel)
    ->Unit(benchmark::kMillisecond)
    ->MinTime(0.5);

BENCHMARK_MAIN();
