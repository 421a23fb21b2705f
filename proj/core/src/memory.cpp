// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfonet/memory.hpp"

#include "cfonet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cfonet {

std::vector<int> top_k_indices(const Vector& scores, int k) {
    const int n = static_cast<int>(scores.size());
    if (k < 1 || k > n) {
        throw ConfigError("top-k requires 1 <= k <= " + std::to_string(n) + ", got " + std::to_string(k));
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
        if (scores(a) != scores(b)) return scores(a) > scores(b);
        return a < b;
    });
    order.resize(static_cast<std::size_t>(k));
    return order;
}

MaskPair make_masks(const Vector& alpha, int k) {
    const std::vector<int> top = top_k_indices(alpha, k);
    MaskPair masks{Vector::Zero(alpha.size()), Vector::Zero(alpha.size())};
    for (int i : top) masks.pool(i) = 1.0;
    masks.feedback(top.front()) = 1.0;
    return masks;
}

ag::Var apply_mask(ag::Var strategies, const Vector& mask, ag::Var straight_through) {
    return ag::mask_rows(strategies, mask, straight_through);
}

StrategyPool::StrategyPool(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw ConfigError("strategy pool capacity must be at least 1");
}

void StrategyPool::push(ag::Var masked) {
    entries_.push_back(masked);
    while (entries_.size() > capacity_) entries_.pop_front();
}

void StrategyPool::replace_last(ag::Var masked) {
    if (entries_.empty()) throw ContractError("replace_last on an empty strategy pool");
    entries_.back() = masked;
}

ag::Var StrategyPool::aggregate(ag::Tape& tape, PoolAggregation mode, Eigen::Index rows,
                                Eigen::Index cols) const {
    if (entries_.empty()) return tape.constant(Matrix::Zero(rows, cols));
    for (const ag::Var& v : entries_) {
        if (v.tape != &tape) throw ContractError("strategy pool entry recorded on another tape");
        if (v.value().rows() != rows || v.value().cols() != cols) throw ShapeError("pool entry shape");
    }
    const std::vector<ag::Var> items(entries_.begin(), entries_.end());
    if (mode == PoolAggregation::max) return ag::max_elementwise(items);
    if (items.size() == 1) return items.front();
    return ag::scale(ag::sum(items), 1.0 / static_cast<double>(items.size()));
}

MemoryState::MemoryState(std::size_t pool_capacity)
    : strategy_pool(pool_capacity), gamma(Vector::Ones(kNumStrategies)) {}

void MemoryState::reset() {
    strategy_pool.clear();
    feedback_pool.clear();
    gamma = Vector::Ones(kNumStrategies);
    dialogue_id.clear();
    last_turn = -1;
}

double feedback_delta(double confidence, double mu) { return mu * std::exp(-(1.0 - confidence)); }

const Vector& update_gamma(MemoryState& state, const Vector& mask_f, const Vector& emotion_probs,
                           double mu, const GammaBounds& bounds) {
    if (emotion_probs.size() != kNumEmotions) throw ShapeError("emotion distribution must have 3 entries");
    if (mask_f.size() != state.gamma.size()) throw ShapeError("mask_f length differs from gamma");
    if (!(mu > 0.0)) throw ConfigError("mu must be positive");
    if (!emotion_probs.allFinite() || emotion_probs.minCoeff() < 0.0 ||
        std::abs(emotion_probs.sum() - 1.0) > 1e-6) {
        throw ContractError("emotion scores must form a probability distribution");
    }
    Eigen::Index x = 0;
    emotion_probs.maxCoeff(&x);
    const Emotion emotion = emotion_from_index(static_cast<int>(x));
    const double confidence = emotion_probs(x);
    const double delta = feedback_delta(confidence, mu);
    if (emotion == Emotion::pos) {
        state.gamma += mask_f * delta;
    } else if (emotion == Emotion::neg) {
        state.gamma -= mask_f * delta;
    }
    state.gamma = state.gamma.cwiseMax(bounds.min).cwiseMin(bounds.max);
    Eigen::Index selected = 0;
    mask_f.maxCoeff(&selected);
    state.feedback_pool.push_back({static_cast<int>(selected), emotion, confidence});
    return state.gamma;
}

ag::Var aggregate_pool(ag::Tape& tape, const MemoryState& state, PoolAggregation mode,
                       Eigen::Index rows, Eigen::Index cols) {
    return state.strategy_pool.aggregate(tape, mode, rows, cols);
}

ag::Var emotion_aware_strategies(ag::Var pooled, const Vector& gamma) {
    return ag::scale_rows(pooled, gamma);
}

MemoryModule::MemoryModule(int d_model, ParameterStore& store) {
    strategies_ = &store.add("memory.strategy_embedding", kNumStrategies, d_model);
    strategy_head_ = Mlp::create(store, "memory.strategy_head", d_model, d_model, kNumStrategies);
    emotion_head_ = Mlp::create(store, "memory.emotion_head", d_model, d_model, kNumEmotions);
}

ag::Var MemoryModule::strategy_distribution(ag::Tape& tape, ag::Var contextual) const {
    return ag::softmax(strategy_head_.forward(tape, ag::mean_rows(contextual)));
}

ag::Var MemoryModule::predict_emotion(ag::Tape& tape, ag::Var history) const {
    return ag::softmax(emotion_head_.forward(tape, ag::mean_rows(history)));
}

}  // namespace cfonet
