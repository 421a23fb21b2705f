// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfonet/model.hpp"

#include "cfonet/errors.hpp"

namespace cfonet {

CfoNet::CfoNet(ModelConfig config, Vocab vocab) : config_(std::move(config)), vocab_(std::move(vocab)) {
    config_.validate();
    encoder_ = std::make_unique<Encoder>(config_.encoder, vocab_.size(), params_);
    memory_ = std::make_unique<MemoryModule>(config_.encoder.d_model(), params_);
    fusion_ = std::make_unique<Fusion>(config_.fusion, config_.encoder.d_model(), kNumStrategies, params_);
    initialize(config_.seed);
}

void CfoNet::initialize(std::uint64_t seed) {
    params_.initialize(seed);
    sync_frozen();
}

void CfoNet::sync_frozen() { encoder_->reset_padding_row(); }

DialogueRunner::DialogueRunner(const CfoNet& model, ag::Tape& tape, Phase phase)
    : model_(model),
      tape_(tape),
      phase_(phase),
      state_(static_cast<std::size_t>(model.config().pool_capacity)) {}

void DialogueRunner::reset() {
    state_.reset();
    cache_.clear();
}

ag::Var DialogueRunner::utterance_vector(const StrategyExample& example, std::size_t i) {
    const int key = example.context_begin + static_cast<int>(i);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const std::vector<int> tokens = model_.vocab().encode(example.context[i].text);
    ag::Var v = model_.encoder().encode_utterance(tape_, tokens);
    cache_.emplace(key, v);
    return v;
}

namespace {

Vector one_hot(int index, int size) {
    Vector v = Vector::Zero(size);
    v(index) = 1.0;
    return v;
}

int argmax(const Vector& v) {
    Eigen::Index i = 0;
    v.maxCoeff(&i);
    return static_cast<int>(i);
}

/// Gold strategy forced into the top slot, remaining k-1 slots from alpha.
Vector gold_pool_mask(const Vector& alpha, int gold, int k) {
    Vector mask = one_hot(gold, static_cast<int>(alpha.size()));
    if (k > 1) {
        Vector rest = alpha;
        rest(gold) = -1.0;
        for (int i : top_k_indices(rest, k - 1)) mask(i) = 1.0;
    }
    return mask;
}

}  // namespace

TurnOutput DialogueRunner::forward_turn(const StrategyExample& example) {
    if (example.context.empty()) throw ContractError("example has an empty context");
    if (state_.last_turn >= 0 && example.dialogue_id != state_.dialogue_id) {
        throw ContractError("example from dialogue '" + example.dialogue_id +
                            "' given to a runner bound to '" + state_.dialogue_id + "'; reset first");
    }
    if (example.target_turn <= state_.last_turn) {
        throw ContractError("turn " + std::to_string(example.target_turn) + " of dialogue '" +
                            example.dialogue_id + "' processed out of order");
    }
    if (state_.last_turn < 0 && !cache_.empty() && state_.dialogue_id != example.dialogue_id) {
        cache_.clear();
    }
    state_.dialogue_id = example.dialogue_id;

    const ModelConfig& cfg = model_.config();
    const MemorySource source = phase_ == Phase::train ? cfg.memory_source_train : cfg.memory_source_eval;
    const int d = cfg.encoder.d_model();
    const auto n = static_cast<Eigen::Index>(example.context.size());

    std::vector<ag::Var> vectors;
    std::vector<Speaker> speakers;
    for (std::size_t i = 0; i < example.context.size(); ++i) {
        vectors.push_back(utterance_vector(example, i));
        speakers.push_back(example.context[i].speaker);
    }
    const ContextEncoding enc = model_.encoder().contextualize(tape_, vectors, speakers);
    ag::Var contextual = enc.contextual;

    TurnOutput out;
    out.trace.gamma_before = state_.gamma;

    const Utterance* previous = example.preceding();
    const bool after_persuadee = previous != nullptr && previous->speaker == Speaker::persuadee;
    if (after_persuadee) {
        out.emotion_probs = model_.memory().predict_emotion(tape_, ag::slice_rows(contextual, 0, n - 1));
        out.prediction.emotion_probs = out.emotion_probs->value().col(0);
    }

    ag::Var emotion_aware;
    if (!cfg.ablation.no_memory) {
        ag::Var alpha = model_.memory().strategy_distribution(tape_, contextual);
        const Vector alpha_value = alpha.value().col(0);
        out.prediction.alpha = alpha_value;
        out.trace.masks = make_masks(alpha_value, cfg.top_k);
        ag::Var strategies = tape_.param(model_.memory().strategy_embedding());
        state_.strategy_pool.push(
            apply_mask(strategies, out.trace.masks.pool, cfg.straight_through ? alpha : ag::Var{}));

        if (after_persuadee) {
            std::optional<Vector> feedback;
            if (source == MemorySource::gold) {
                if (previous->emotion) feedback = one_hot(index_of(*previous->emotion), kNumEmotions);
            } else {
                feedback = out.emotion_probs->value().col(0);
            }
            if (feedback) {
                update_gamma(state_, out.trace.masks.feedback, *feedback, cfg.mu, cfg.gamma_bounds);
                out.trace.gamma_updated = true;
                out.trace.feedback = state_.feedback_pool.back();
            }
        }

        ag::Var pooled = aggregate_pool(tape_, state_, cfg.pool_aggregation, kNumStrategies, d);
        emotion_aware = emotion_aware_strategies(pooled, state_.gamma);

        if (source == MemorySource::gold) {
            const Vector mask = gold_pool_mask(alpha_value, index_of(example.gold_strategy), cfg.top_k);
            state_.strategy_pool.replace_last(apply_mask(strategies, mask));
        }
    } else {
        emotion_aware = tape_.constant(Matrix::Zero(kNumStrategies, d));
    }
    out.trace.gamma_after = state_.gamma;
    out.trace.pool_size = state_.strategy_pool.size();
    out.trace.emotion_aware = emotion_aware.value();

    const FusionResult fused = cfg.ablation.no_fusion
                                   ? model_.fusion().concat_direct(tape_, contextual, emotion_aware)
                                   : model_.fusion().fuse(tape_, contextual, emotion_aware);
    out.strategy_probs = fused.strategy_probs;
    out.prediction.strategy_probs = fused.strategy_probs.value().col(0);
    out.prediction.predicted_strategy = argmax(out.prediction.strategy_probs);
    out.trace.context_head = fused.context_head;
    out.trace.strategy_head = fused.strategy_head;

    state_.last_turn = example.target_turn;
    return out;
}

std::vector<TurnOutput> run_dialogue(const CfoNet& model, const std::vector<StrategyExample>& examples,
                                     ag::Tape& tape, Phase phase) {
    DialogueRunner runner(model, tape, phase);
    std::vector<TurnOutput> outputs;
    outputs.reserve(examples.size());
    for (const auto& ex : examples) outputs.push_back(runner.forward_turn(ex));
    return outputs;
}

}  // namespace cfonet
