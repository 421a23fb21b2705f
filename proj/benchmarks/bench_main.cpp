// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include <cfonet/memory.hpp>
#include <cfonet/model.hpp>
#include <cfonet/synthetic.hpp>
#include <cfonet/trainer.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace cfonet;

namespace {

const std::vector<Dialogue>& corpus() {
    static const std::vector<Dialogue> dialogues = [] {
        SyntheticConfig config;
        config.dialogues = 64;
        return generate_synthetic(config, 7);
    }();
    return dialogues;
}

ModelConfig bench_config() {
    ModelConfig config;
    config.seed = 3;
    return config;
}

}  // namespace

static void BM_EncodeUtterance(benchmark::State& state) {
    const ModelConfig config = bench_config();
    CfoNet model(config, build_vocab(corpus(), 1));
    std::vector<int> tokens(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < tokens.size(); ++i) tokens[i] = 2 + static_cast<int>(i % 20);
    for (auto _ : state) {
        ag::Tape tape(false);
        benchmark::DoNotOptimize(model.encoder().encode_utterance(tape, tokens).value().data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EncodeUtterance)->Arg(5)->Arg(20)->Arg(60);

static void BM_ForwardTurn(benchmark::State& state) {
    ModelConfig config = bench_config();
    config.max_context = static_cast<int>(state.range(0));
    CfoNet model(config, build_vocab(corpus(), 1));
    const auto examples = make_examples(corpus().front(), config.max_context);
    for (auto _ : state) {
        ag::Tape tape(false);
        DialogueRunner runner(model, tape, Phase::eval);
        for (const auto& ex : examples) benchmark::DoNotOptimize(runner.forward_turn(ex).prediction.alpha.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(examples.size()));
}
BENCHMARK(BM_ForwardTurn)->Arg(2)->Arg(5)->Arg(10);

static void BM_TrainStep(benchmark::State& state) {
    const ModelConfig config = bench_config();
    CfoNet model(config, build_vocab(corpus(), 1));
    const auto examples = dialogue_examples(corpus(), config.max_context);
    std::vector<const std::vector<StrategyExample>*> batch;
    for (std::size_t i = 0; i < static_cast<std::size_t>(config.batch_size) && i < examples.size(); ++i)
        batch.push_back(&examples[i]);
    Adam adam({});
    for (auto _ : state) benchmark::DoNotOptimize(run_epoch(model, adam, {batch}));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(batch.size()));
}
BENCHMARK(BM_TrainStep)->Unit(benchmark::kMillisecond);

static void BM_MakeMasks(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vector alpha(kNumStrategies);
    for (int i = 0; i < kNumStrategies; ++i) alpha(i) = unit(rng);
    alpha /= alpha.sum();
    for (auto _ : state) benchmark::DoNotOptimize(make_masks(alpha, static_cast<int>(state.range(0))).pool.data());
}
BENCHMARK(BM_MakeMasks)->Arg(1)->Arg(2)->Arg(5);

BENCHMARK_MAIN();
