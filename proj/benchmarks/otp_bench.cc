// Copyright 2026 The OTP Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "otp/design.h"
#include "otp/problem.h"
#include "otp/prsgd.h"
#include "otp/rng.h"
#include "otp/smooth.h"

namespace otp {
namespace {

void BM_PrSgdSolve(benchmark::State& state) {
  const Newsvendor nv(NewsvendorSpec::Default(5, static_cast<int>(state.range(0))));
  PrSgdConfig c;
  c.iterations = 1000;
  const Vector x = nv.covariate_box().center();
  std::uint64_t id = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Solve(nv, x, c, RngStream{1, id++}).theta_bar);
  }
  state.SetItemsProcessed(state.iterations() * c.iterations);
}
BENCHMARK(BM_PrSgdSolve)->Arg(2)->Arg(10);

Matrix Labels(int n) {
  Rng rng(RngStream{2, 0});
  Matrix y(n, 5);
  for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] = rng.Normal();
  return y;
}

void BM_KrrFit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CovariateDesign d = FarthestPointDesign(Box::Cube(2, 0.0, 3.0), n, 10 * n, RngStream{3, 0});
  const Matrix y = Labels(n);
  KrrSpec spec;
  spec.kernel = KernelSpec{KernelFamily::kMatern52, 2.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(FittedSolutionMap::Fit(spec, d, y).size());
  }
}
BENCHMARK(BM_KrrFit)->Arg(50)->Arg(200)->Arg(800);

void BM_KrrPredict(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CovariateDesign d = FarthestPointDesign(Box::Cube(2, 0.0, 3.0), n, 10 * n, RngStream{3, 0});
  KrrSpec spec;
  spec.kernel = KernelSpec{KernelFamily::kMatern52, 2.0};
  const FittedSolutionMap m = FittedSolutionMap::Fit(spec, d, Labels(n));
  Rng rng(RngStream{3, 1});
  const Matrix xs = SampleUniform(d.domain, 256, rng);
  int i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.Predict(xs.row(i++ & 255).transpose()));
  }
}
BENCHMARK(BM_KrrPredict)->Arg(50)->Arg(800);

void BM_KnnQuery(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Box box = Box::Cube(10, 0.0, 3.0);
  Rng rng(RngStream{4, 0});
  const Matrix points = SampleUniform(box, n, rng);
  const Matrix xs = SampleUniform(box, 256, rng);
  int i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(KNearest(points, xs.row(i++ & 255).transpose(), 8));
  }
}
BENCHMARK(BM_KnnQuery)->Arg(1000)->Arg(10000);

void BM_FarthestPointDesign(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Box box = Box::Cube(2, 0.0, 3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(FarthestPointDesign(box, n, 10 * n, RngStream{5, 0}).fill_distance);
  }
}
BENCHMARK(BM_FarthestPointDesign)->Arg(100)->Arg(1000);

}  // namespace
}  // namespace otp

BENCHMARK_MAIN();
