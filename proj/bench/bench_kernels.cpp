#include <benchmark/benchmark.h>

#include "lamcav/liouville.hpp"
#include "lamcav/schemes.hpp"

using namespace lamcav;

namespace {

MasterEquation model_for(int n_max, bool truncated) {
  auto p = preset(SchemeId::S1, 1.0, kTableGamma, kTableKappa, kTableGamma / 10.0);
  p.n_max = n_max;
  const auto space = build_space(n_max, truncated ? Truncation::max_excitations(1) : Truncation::none());
  return build_master_equation(p, space);
}

std::vector<MatC> jumps_of(const MasterEquation& me) {
  std::vector<MatC> out;
  for (const auto& l : me.lindblads) out.push_back(l.op.m);
  return out;
}

// Arg 0: dim 12 (single excitation), 1: dim 18, 2: dim 27.
MasterEquation model_arg(int64_t a) {
  if (a == 0) return model_for(1, true);
  return model_for(a == 1 ? 1 : 2, false);
}

void BM_AssembleSerial(benchmark::State& st) {
  const auto me = model_arg(st.range(0));
  const auto jumps = jumps_of(me);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::assemble_serial(me.H.m, jumps));
}

void BM_AssembleParallel(benchmark::State& st) {
  const auto me = model_arg(st.range(0));
  const auto jumps = jumps_of(me);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::assemble_parallel(me.H.m, jumps));
}

void BM_ApplySerial(benchmark::State& st) {
  const auto me = model_arg(st.range(0));
  const MatC L = kernels::assemble_serial(me.H.m, jumps_of(me));
  const VecC x = VecC::Random(L.cols());
  VecC y(L.rows());
  for (auto _ : st) {
    kernels::apply_serial(L, x, y);
    benchmark::DoNotOptimize(y.data());
  }
}

void BM_ApplyParallel(benchmark::State& st) {
  const auto me = model_arg(st.range(0));
  const MatC L = kernels::assemble_serial(me.H.m, jumps_of(me));
  const VecC x = VecC::Random(L.cols());
  VecC y(L.rows());
  for (auto _ : st) {
    kernels::apply_parallel(L, x, y);
    benchmark::DoNotOptimize(y.data());
  }
}

}  // namespace

BENCHMARK(BM_AssembleSerial)->DenseRange(0, 2);
BENCHMARK(BM_AssembleParallel)->DenseRange(0, 2);
BENCHMARK(BM_ApplySerial)->DenseRange(0, 2);
BENCHMARK(BM_ApplyParallel)->DenseRange(0, 2);

BENCHMARK_MAIN();
