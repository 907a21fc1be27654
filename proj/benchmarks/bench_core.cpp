#include <benchmark/benchmark.h>

#include <numbers>

#include "nhlattice/dynamics.hpp"
#include "nhlattice/engineering.hpp"
#include "nhlattice/floquet.hpp"
#include "nhlattice/presets.hpp"
#include "nhlattice/spectral.hpp"

namespace {

nhl::LatticeSpec chain(int sites, double force = 0.0) {
  nhl::LatticeSpec s;
  s.sites = sites;
  s.force = force;
  return s;
}

void BM_BuildHamiltonian(benchmark::State& state) {
  const auto spec = chain(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(nhl::build_hamiltonian(spec));
}
BENCHMARK(BM_BuildHamiltonian)->Arg(16)->Arg(64)->Arg(256);

void BM_AnalyzeSpectrum(benchmark::State& state) {
  const auto h = nhl::build_hamiltonian(chain(static_cast<int>(state.range(0)), state.range(1) * 0.6));
  for (auto _ : state) benchmark::DoNotOptimize(nhl::analyze_spectrum(h));
}
BENCHMARK(BM_AnalyzeSpectrum)->Args({16, 0})->Args({16, 1})->Args({64, 0})->Args({64, 1});

void BM_BlochPresetRk4(benchmark::State& state) {
  const auto p = nhl::bloch_preset(nhl::BlochVariant::Unidirectional);
  for (auto _ : state) benchmark::DoNotOptimize(nhl::evolve_rk4(p.spec, p.initial, p.config));
}
BENCHMARK(BM_BlochPresetRk4)->Unit(benchmark::kMillisecond);

void BM_ClosedForm(benchmark::State& state) {
  const auto spec = chain(static_cast<int>(state.range(0)));
  const auto c0 = nhl::StateVector::site_excitation(spec, spec.last_site());
  const std::vector<double> times{0.5, 1.0, 2.0, 4.0};
  for (auto _ : state) benchmark::DoNotOptimize(nhl::evolve_closed_form(spec, c0, times));
}
BENCHMARK(BM_ClosedForm)->Arg(16)->Arg(128);

void BM_Monodromy(benchmark::State& state) {
  nhl::LatticeSpec spec;
  spec.geometry = nhl::Geometry::Ring;
  spec.sites = static_cast<int>(state.range(0));
  const nhl::FluxDrive drive{1.0, spec.sites};
  for (auto _ : state) benchmark::DoNotOptimize(nhl::monodromy(spec, drive, drive.period() / 1e4));
}
BENCHMARK(BM_Monodromy)->Arg(4)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_EffectiveHopping(benchmark::State& state) {
  const auto p = nhl::ModulationProtocol::from_dimensionless(std::numbers::pi / 2, 0.8, {3.0, 0.7}, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(nhl::effective_hopping(p, 1.0));
}
BENCHMARK(BM_EffectiveHopping);

}  // namespace

BENCHMARK_MAIN();
