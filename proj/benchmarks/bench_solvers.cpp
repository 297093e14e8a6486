#include <benchmark/benchmark.h>

#include "setevo/evolution.hpp"
#include "setevo/grid_solver.hpp"
#include "setevo/oracle.hpp"
#include "setevo/profile_solver.hpp"
#include "setevo/shape.hpp"
#include "setevo/verify.hpp"

namespace {

using namespace setevo;

StepProblem hexagon_step(int cells) {
  const double a = 5.0;
  const GridSpec g = GridSpec::standard(cells);
  StepProblem p;
  p.admissible = rasterize(shapes::RoundedPolygon{6, {0, 0}, 1.6, 0.0, 0.0}, g);
  p.g.assign(g.size(), -a);
  p.offset = a * volume(p.admissible);
  p.scheme = PerimeterScheme::isotropic;
  return p;
}

void BM_SingleStepHexagon(benchmark::State& state) {
  const StepProblem p = hexagon_step(static_cast<int>(state.range(0)));
  int iterations = 0;
  for (auto _ : state) {
    const auto r = single_step(p, {});
    iterations = r.iterations;
    benchmark::DoNotOptimize(r.value);
  }
  state.counters["pdhg_iterations"] = iterations;
}
BENCHMARK(BM_SingleStepHexagon)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_FixedStepsHexagon(benchmark::State& state) {
  const StepProblem p = hexagon_step(static_cast<int>(state.range(0)));
  SolveParams sp;
  sp.adaptive_steps = false;
  int iterations = 0;
  for (auto _ : state) {
    const auto r = single_step(p, sp);
    iterations = r.iterations;
    benchmark::DoNotOptimize(r.value);
  }
  state.counters["pdhg_iterations"] = iterations;
}
BENCHMARK(BM_FixedStepsHexagon)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_ProfileSolve(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const auto v = sample_obstacle(obstacles::f1, N);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_profile(v, 7.0, N).objective);
  }
}
BENCHMARK(BM_ProfileSolve)->Arg(100)->Arg(400)->Arg(1600)->Unit(benchmark::kMicrosecond);

void BM_StabilityAudit(benchmark::State& state) {
  const GridSpec g = GridSpec::standard(static_cast<int>(state.range(0)));
  const auto forcing = std::make_shared<ShapeForcing>([](double) { return Shape(shapes::Everything{}); });
  const BinaryField z = rasterize(oracle::compatible_rounded_square(5.0 / 1.3).to_shape({0, 0}), g);
  const StabilityContext ctx{Mode::brittle, 1.0, 5.0, forcing.get(), PerimeterScheme::isotropic};
  const auto family = stability_competitors(z, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_stability(0.0, z, ctx, family).worst);
  }
}
BENCHMARK(BM_StabilityAudit)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
