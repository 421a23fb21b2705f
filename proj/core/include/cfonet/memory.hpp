// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0
//
// Feedback memory. A context-only strategy distribution selects the top-k
// rows of the strategy embedding (mask_p) for the strategy pool and the
// single best row (mask_f) for the feedback pool. The persuadee's predicted
// emotion moves the per-strategy weight gamma of the mask_f row up (pos) or
// down (neg) by mu * exp(-(1 - confidence)); the pooled strategies scaled
// by gamma form the emotion-aware strategy representation.

#pragma once

#include "cfonet/autograd.hpp"
#include "cfonet/labels.hpp"
#include "cfonet/layers.hpp"

#include <deque>
#include <optional>
#include <string>
#include <vector>

namespace cfonet {

struct MaskPair {
    Vector pool;        // mask_p: k ones
    Vector feedback;    // mask_f: one 1, contained in mask_p
};

/// Indices of the k largest entries in descending order; equal values keep
/// the lower index first.
std::vector<int> top_k_indices(const Vector& scores, int k);

MaskPair make_masks(const Vector& alpha, int k);

/// S with unselected rows zeroed. `straight_through`, when given, receives
/// the mask's gradient as if mask = alpha (the forward value stays hard).
ag::Var apply_mask(ag::Var strategies, const Vector& mask, ag::Var straight_through = {});

enum class PoolAggregation { mean, max };

/// FIFO of masked strategy matrices.
class StrategyPool {
public:
    explicit StrategyPool(std::size_t capacity = 10);

    void push(ag::Var masked);
    /// Replaces the newest entry (gold-history mode).
    void replace_last(ag::Var masked);
    void clear() { entries_.clear(); }

    std::size_t size() const { return entries_.size(); }
    std::size_t capacity() const { return capacity_; }
    const std::deque<ag::Var>& entries() const { return entries_; }

    /// Mean (or elementwise max) of the stored matrices; zero rows x cols
    /// matrix when empty.
    ag::Var aggregate(ag::Tape& tape, PoolAggregation mode, Eigen::Index rows, Eigen::Index cols) const;

private:
    std::size_t capacity_;
    std::deque<ag::Var> entries_;
};

struct FeedbackEntry {
    int strategy = 0;
    Emotion emotion = Emotion::neu;
    double confidence = 0.0;

    bool operator==(const FeedbackEntry&) const = default;
};

struct GammaBounds {
    double min = 0.0;
    double max = 2.0;
};

struct MemoryState {
    explicit MemoryState(std::size_t pool_capacity = 10);

    StrategyPool strategy_pool;
    std::vector<FeedbackEntry> feedback_pool;
    Vector gamma;
    std::string dialogue_id;
    int last_turn = -1;

    /// Empty pools, gamma = 1, no dialogue bound.
    void reset();
};

/// mu * exp(-(1 - confidence)); lies in (mu / e, mu] for confidence in (0, 1].
double feedback_delta(double confidence, double mu);

/// Applies one emotional-feedback update with x = argmax(emotion_probs) and
/// records (argmax mask_f, x, y_x) in the feedback pool. Returns the new gamma.
const Vector& update_gamma(MemoryState& state, const Vector& mask_f, const Vector& emotion_probs,
                           double mu, const GammaBounds& bounds = {});

ag::Var aggregate_pool(ag::Tape& tape, const MemoryState& state, PoolAggregation mode,
                       Eigen::Index rows, Eigen::Index cols);

/// Row i of S_m scaled by gamma_i.
ag::Var emotion_aware_strategies(ag::Var pooled, const Vector& gamma);

/// Strategy embedding plus the two context heads of the memory module.
class MemoryModule {
public:
    MemoryModule(int d_model, ParameterStore& store);

    Parameter& strategy_embedding() const { return *strategies_; }

    /// alpha = softmax(MLP(mean of C's rows)).
    ag::Var strategy_distribution(ag::Tape& tape, ag::Var contextual) const;
    /// y^e = softmax(MLP(mean of the given rows)); callers pass C without the target row.
    ag::Var predict_emotion(ag::Tape& tape, ag::Var history) const;

    const Mlp& strategy_head() const { return strategy_head_; }
    const Mlp& emotion_head() const { return emotion_head_; }

private:
    Parameter* strategies_ = nullptr;
    Mlp strategy_head_;
    Mlp emotion_head_;
};

}  // namespace cfonet
