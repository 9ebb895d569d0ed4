// Serial reference vs OpenMP validators on the example algebras.  Thread count
// follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <span>

#include "massey/construct.hpp"
#include "massey/dgalg.hpp"
#include "massey/engine.hpp"

using namespace massey;

namespace {

const DgAlgebra& hypercom() {
  static const DgAlgebra alg = heisenberg_hypercom();
  return alg;
}

const DgAlgebra& gerstenhaber() {
  static const DgAlgebra alg = heisenberg_gerstenhaber();
  return alg;
}

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

void BM_HypercomRelationDeclared(benchmark::State& state) {
  const auto& alg = hypercom();
  const auto gate = heisenberg_hypercom_gate(alg.basis());
  const std::span<const Tuple> scope(gate.relation_scope);
  const Relation& rel = alg.presentation().relation("hypercom");
  for (auto _ : state) benchmark::DoNotOptimize(check_relation(alg, rel, scope, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(scope.size()));
  label(state);
}

void BM_M3Symmetry(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(check_symmetry(hypercom(), "m3", mode(state)));
  label(state);
}

void BM_M3Derivation(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(check_derivation(hypercom(), "m3", mode(state)));
  label(state);
}

void BM_GerstenhaberRelations(benchmark::State& state) {
  const auto& alg = gerstenhaber();
  for (auto _ : state) {
    for (const auto& rel : alg.presentation().relations()) {
      benchmark::DoNotOptimize(check_relation(alg, rel, std::nullopt, mode(state)));
    }
  }
  label(state);
}

void BM_HypercomMasseyProduct(benchmark::State& state) {
  const MasseyEngine e(hypercom());
  const auto& b = hypercom().basis();
  MasseyProblem p{hypercom().presentation().relation("hypercom"), {}};
  for (const char* n : {"vw", "vx", "x", "x"}) {
    const std::size_t i = b.index_of(n);
    p.inputs.push_back(e.class_of(HVector::unit(b.degree(i), i)));
  }
  for (auto _ : state) benchmark::DoNotOptimize(e.massey_product(p));
}

}  // namespace

BENCHMARK(BM_HypercomRelationDeclared)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_M3Symmetry)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_M3Derivation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GerstenhaberRelations)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HypercomMasseyProduct)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
