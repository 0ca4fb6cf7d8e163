// Copyright 2026 The retrialq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <memory>

#include <benchmark/benchmark.h>

#include "retrialq/asymptotics.h"
#include "retrialq/inversion.h"
#include "retrialq/pgf.h"

namespace retrialq {
namespace {

void BM_InvertR11(benchmark::State& state) {
  const auto ctx = std::make_shared<const TransformContext>(reference_params());
  const PgfHandle pgf = marginal_r11_pgf(ctx);
  const PowerTail tail = tail_R11(*ctx).power_tail();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(invert(pgf, n, tail));
}
BENCHMARK(BM_InvertR11)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

void BM_InvertR0(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    const auto ctx = std::make_shared<const TransformContext>(reference_params());
    benchmark::DoNotOptimize(invert(r0_pgf(ctx), n, tail_R0(*ctx).power_tail()));
  }
}
BENCHMARK(BM_InvertR0)->Arg(1 << 12)->Arg(1 << 14)->Unit(benchmark::kMillisecond);

void BM_InvertJointMa(benchmark::State& state) {
  const auto ctx = std::make_shared<const TransformContext>(reference_params());
  const PgfHandle pgf = ma_pgf(ctx);
  for (auto _ : state) benchmark::DoNotOptimize(invert_joint(pgf, 64, 64));
}
BENCHMARK(BM_InvertJointMa)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace retrialq
