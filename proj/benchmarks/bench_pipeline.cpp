#include <benchmark/benchmark.h>

#include <random>

#include "atlasfem/fem.hpp"
#include "atlasfem/hexmesh.hpp"
#include "atlasfem/nrrd_io.hpp"

using namespace atlasfem;

namespace {

LabelVolume block_volume(std::size_t n) {
  LabelVolume vol;
  vol.dims = {n, n, n};
  vol.voxels.assign(n * n * n, 1);
  return vol;
}

void BM_VoxelsToHexmesh(benchmark::State& state) {
  const LabelVolume vol = block_volume(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(voxels_to_hexmesh(vol, vol));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0) * state.range(0));
}
BENCHMARK(BM_VoxelsToHexmesh)->Arg(16)->Arg(32)->Arg(64);

void BM_Assemble(benchmark::State& state) {
  const LabelVolume vol = block_volume(static_cast<std::size_t>(state.range(0)));
  const HexMesh mesh = voxels_to_hexmesh(vol, vol);
  const std::vector<double> sigma(mesh.cell_count(), 0.33);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble(mesh, sigma));
  }
}
BENCHMARK(BM_Assemble)->Arg(8)->Arg(16)->Arg(32);

void BM_DipoleSolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const LabelVolume vol = block_volume(n);
  const HexMesh mesh = voxels_to_hexmesh(vol, vol);
  FemSystem system = assemble(mesh, std::vector<double>(mesh.cell_count(), 0.33));
  DipoleSource source;
  const double c = static_cast<double>(n) / 2.0;
  source.position_mm = {c, c, c};
  source.moment_Am = {1e-8, 0, 0};
  system.rhs = dipole_rhs(mesh, source);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(system, BoundaryConditions{}, 1e-8));
  }
}
BENCHMARK(BM_DipoleSolve)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_NrrdGzipRoundTrip(benchmark::State& state) {
  std::mt19937 rng(1);
  LabelVolume vol = block_volume(static_cast<std::size_t>(state.range(0)));
  std::uniform_int_distribution<Label> label(0, 300);
  for (auto& v : vol.voxels) v = label(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(read_nrrd(write_nrrd(vol, NrrdEncoding::gzip)));
  }
}
BENCHMARK(BM_NrrdGzipRoundTrip)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
