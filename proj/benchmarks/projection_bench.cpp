#include <benchmark/benchmark.h>

#include "sweep/projection.hpp"
#include "sweep/rng.hpp"

namespace {

using namespace sweep;

// Nonempty polyhedron with a known interior point, matching the test
// generator.
Polyhedron make_polyhedron(Rng& rng, int d, int p) {
  const Eigen::VectorXd interior = rng.uniform_vector(d, -1.0, 1.0);
  Eigen::MatrixXd normals(p, d);
  Eigen::VectorXd offsets(p);
  for (int i = 0; i < p; ++i) {
    Eigen::VectorXd n(d);
    for (int j = 0; j < d; ++j) n[j] = rng.gaussian();
    n.normalize();
    normals.row(i) = n;
    offsets[i] = n.dot(interior) - rng.uniform(0.0, 1.0);
  }
  return Polyhedron(std::move(normals), std::move(offsets));
}

void BM_ProjectCold(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  Rng rng(99);
  const Polyhedron poly = make_polyhedron(rng, d, p);
  const Eigen::VectorXd y = rng.uniform_vector(d, -3.0, 3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(project(y, poly));
  }
}
BENCHMARK(BM_ProjectCold)
    ->Args({4, 8})
    ->Args({16, 32})
    ->Args({40, 290})
    ->Args({300, 1600});

void BM_ProjectWarm(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  Rng rng(99);
  const Polyhedron poly = make_polyhedron(rng, d, p);
  const Eigen::VectorXd y = rng.uniform_vector(d, -3.0, 3.0);
  const ProjectionResult cold = project(y, poly);
  for (auto _ : state) {
    benchmark::DoNotOptimize(project(y, poly, &cold.multipliers));
  }
}
BENCHMARK(BM_ProjectWarm)->Args({4, 8})->Args({40, 290})->Args({300, 1600});

void BM_ProjectOracle(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  Rng rng(7);
  const Polyhedron poly = make_polyhedron(rng, d, p);
  const Eigen::VectorXd y = rng.uniform_vector(d, -3.0, 3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_oracle(y, poly));
  }
}
BENCHMARK(BM_ProjectOracle)->Args({4, 8})->Args({6, 12});

}  // namespace
