// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cfonet/corpus.hpp"
#include "cfonet/metrics.hpp"
#include "cfonet/model.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cfonet {

struct EpochLog {
    int epoch = 0;
    double train_loss = 0.0;
    double dev_strategy_f1 = 0.0;
    double dev_emotion_f1 = 0.0;
    double lr = 0.0;

    /// {"epoch", "train_loss", "dev_strategy_f1", "dev_emotion_f1", "lr"} on one line.
    std::string to_json() const;
};

struct TrainResult {
    std::vector<EpochLog> log;
    int best_epoch = 0;              // 0 when no epoch ran
    double best_dev_f1 = 0.0;
    bool stopped_early = false;
};

/// One labeled persuader turn after evaluation.
struct PredictionRecord {
    std::string dialogue_id;
    int target_turn = 0;
    Strategy gold_strategy = Strategy::none;
    int predicted_strategy = 0;
    Vector strategy_probs;
    Vector alpha;
    std::optional<Emotion> gold_emotion;
    std::optional<Vector> emotion_probs;
    Vector gamma_before;
    Vector gamma_after;
    bool gamma_updated = false;

    std::optional<int> predicted_emotion() const;
    std::string to_json() const;
};

struct Evaluation {
    std::vector<PredictionRecord> records;
    MetricsReport strategy;
    std::optional<MetricsReport> emotion;    // absent when no turn has a gold emotion
};

/// Examples of each dialogue, in turn order; dialogues without labeled
/// persuader turns are dropped.
std::vector<std::vector<StrategyExample>> dialogue_examples(const std::vector<Dialogue>& dialogues, int max_context);

/// beta1 * L_s + beta2 * L_e summed over a dialogue's turns (beta2 = 0 under
/// no_multitask). `turns` receives the number of strategy terms.
ag::Var dialogue_loss(const CfoNet& model, ag::Tape& tape, const std::vector<StrategyExample>& examples,
                      Phase phase, std::size_t* turns = nullptr);

/// One pass over `batches` (each a list of dialogues); returns the mean
/// per-turn loss, 0 for an empty list. Throws NumericError on a non-finite loss.
double run_epoch(CfoNet& model, Adam& optimizer, const std::vector<std::vector<const std::vector<StrategyExample>*>>& batches);

/// Adam over dialogue-coherent mini-batches; keeps the parameters of the
/// best dev strategy macro-F1 epoch and stops after `patience` epochs
/// without improvement.
TrainResult train(CfoNet& model, const std::vector<Dialogue>& train_set, const std::vector<Dialogue>& dev_set,
                  const std::function<void(const EpochLog&)>& on_epoch = {});

/// Predictions with the eval-phase memory source. Throws DataError when
/// the dialogues contain no labeled persuader turn.
Evaluation evaluate(const CfoNet& model, const std::vector<Dialogue>& dialogues);

}  // namespace cfonet
