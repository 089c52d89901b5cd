// Serial reference vs OpenMP kernels. Set OMP_NUM_THREADS to compare thread counts.
// The geometric serial audit also skips the per-sample pruning, so it measures
// both the threading and the pruning.

#include <benchmark/benchmark.h>

#include "ewb/oracle.hpp"
#include "ewb/states.hpp"

using namespace ewb;

namespace {

const SubsystemDims kDims = SubsystemDims::qubits(3);

HermitianOperator w1(double r) { return r * ProjectorWitness{2.0 / 3.0, states::w(3), 5.0 / 9.0}.op(); }

template <class F>
void audit(benchmark::State& st, F f, const PureMeasure& m) {
  const auto w = w1(-2.0);
  const auto n = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(f(w, kDims, m, 1.0, n, 0, "").sampled_max);
  st.SetItemsProcessed(static_cast<std::int64_t>(n) * st.iterations());
}

void BM_AuditGeometricSerial(benchmark::State& st) { audit(st, oracle::serial::audit_legendre, GeometricMeasure{}); }
void BM_AuditGeometricParallel(benchmark::State& st) { audit(st, oracle::audit_legendre, GeometricMeasure{}); }
void BM_AuditEofSerial(benchmark::State& st) {
  audit(st, oracle::serial::audit_legendre, EofMeasure{{{0}}, LogBase::natural});
}
void BM_AuditEofParallel(benchmark::State& st) { audit(st, oracle::audit_legendre, EofMeasure{{{0}}, LogBase::natural}); }

void BM_GridSerial(benchmark::State& st) {
  const auto psi = states::w(3);
  for (auto _ : st) benchmark::DoNotOptimize(oracle::serial::grid_geometric(psi, static_cast<std::size_t>(st.range(0))));
}
void BM_GridParallel(benchmark::State& st) {
  const auto psi = states::w(3);
  for (auto _ : st) benchmark::DoNotOptimize(oracle::grid_geometric(psi, static_cast<std::size_t>(st.range(0))));
}

}  // namespace

BENCHMARK(BM_AuditGeometricSerial)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AuditGeometricParallel)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AuditEofSerial)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AuditEofParallel)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridSerial)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridParallel)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
