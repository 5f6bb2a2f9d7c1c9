/*
 * Copyright 2026 The JCCH Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include "jcch/coefficients.hpp"
#include "jcch/dataset.hpp"

namespace {

jcch::LabelMatrix Labels(std::size_t n, std::size_t c) {
  jcch::SynthSpec spec;
  spec.n = n;
  spec.num_labels = c;
  spec.d1 = spec.d2 = 1;
  spec.label_model = jcch::LabelModel::kChain;
  spec.seed = 1;
  return jcch::GenerateLabels(spec);
}

// Fixed anchor count, growing n: time should grow linearly.
void BM_EstimateFixedAnchors(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const jcch::LabelMatrix labels = Labels(n, 20);
  const jcch::AnchorSet anchors = jcch::AnchorSet::Sample(n, 100, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(jcch::EstimateCoefficients(labels, anchors, false));
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(BM_EstimateFixedAnchors)->RangeMultiplier(2)->Range(1000, 16000)->Complexity(benchmark::oN);

void BM_EstimateThreads(benchmark::State& state) {
  const jcch::LabelMatrix labels = Labels(8000, 20);
  const jcch::AnchorSet anchors = jcch::AnchorSet::Sample(8000, 400, 3);
  const unsigned threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(jcch::EstimateCoefficients(labels, anchors, false, threads));
  }
}
BENCHMARK(BM_EstimateThreads)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();

void BM_ExactSweep(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const jcch::LabelMatrix labels = Labels(n, 10);
  for (auto _ : state) benchmark::DoNotOptimize(jcch::ExactCoefficients(labels));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(BM_ExactSweep)->RangeMultiplier(2)->Range(100, 800)->Complexity(benchmark::oNSquared);

}  // namespace

BENCHMARK_MAIN();
