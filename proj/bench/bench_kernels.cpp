// Serial reference vs OpenMP versions of the hot loops. QBENCH_THREADS caps the team size.
#include <benchmark/benchmark.h>

#include "qbench/benchmark.hpp"
#include "qbench/cv.hpp"
#include "qbench/kernels.hpp"
#include "qbench/random.hpp"
#include "qbench/scenarios.hpp"

using namespace qb;

namespace {

struct SeesawInput {
  Mat m;
  std::vector<Vec> starts;
  int d;
};

SeesawInput seesaw_input(int d, int n_starts) {
  Rng rng(7);
  SeesawInput in{random_hermitian(d * d, rng), {}, d};
  for (int i = 0; i < n_starts; ++i) in.starts.push_back(random_unit_vector(d, rng));
  return in;
}

void BM_SeesawSerial(benchmark::State& st) {
  const auto in = seesaw_input(static_cast<int>(st.range(0)), 64);
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::seesaw_multistart_serial(in.m, in.d, in.d, in.starts, 1e-12, 2000));
}

void BM_SeesawParallel(benchmark::State& st) {
  const auto in = seesaw_input(static_cast<int>(st.range(0)), 64);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::seesaw_multistart(in.m, in.d, in.d, in.starts, 1e-12, 2000));
}

void BM_GridScanSerial(benchmark::State& st) {
  const auto in = seesaw_input(static_cast<int>(st.range(0)), 0);
  const kernels::SphereGrid g{in.d, 32, 64};
  for (auto _ : st) benchmark::DoNotOptimize(kernels::grid_scan_serial(in.m, in.d, in.d, g, true));
}

void BM_GridScanParallel(benchmark::State& st) {
  const auto in = seesaw_input(static_cast<int>(st.range(0)), 0);
  const kernels::SphereGrid g{in.d, 32, 64};
  for (auto _ : st) benchmark::DoNotOptimize(kernels::grid_scan(in.m, in.d, in.d, g, true));
}

struct CvInput {
  CvParams p{1.0, 1.0};
  FockCutoff cut{40, 1e-8};
  CvSetup s = build_setup(p, cut);
  Channel dev = make_device("heterodyne-mp", p, cut);
};

const CvInput& cv_input() {
  static const CvInput in;
  return in;
}

void BM_RunSetup(benchmark::State& st) {
  const auto& in = cv_input();
  const Exec ex = st.range(0) ? Exec::parallel : Exec::serial;
  for (auto _ : st) benchmark::DoNotOptimize(run_setup(in.s, in.dev, ex));
}

void BM_Oracle(benchmark::State& st) {
  const auto& in = cv_input();
  OracleConfig oc;
  oc.exec = st.range(0) ? Exec::parallel : Exec::serial;
  for (auto _ : st) benchmark::DoNotOptimize(average_fidelity_oracle(in.dev, in.p, in.cut, oc));
}

}  // namespace

BENCHMARK(BM_SeesawSerial)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SeesawParallel)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridScanSerial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridScanParallel)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunSetup)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Oracle)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(2);

int main(int argc, char** argv) {
  configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
