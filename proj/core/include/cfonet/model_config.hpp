// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cfonet/corpus.hpp"
#include "cfonet/encoder.hpp"
#include "cfonet/fusion.hpp"
#include "cfonet/memory.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cfonet {

/// Where the memory takes its history from: the model's own predictions, or
/// gold strategy/emotion annotations (teacher-forced memory).
enum class MemorySource { predicted, gold };

std::string_view name_of(MemorySource s);
MemorySource parse_memory_source(std::string_view name);
std::string_view name_of(PoolAggregation a);
PoolAggregation parse_pool_aggregation(std::string_view name);

struct AblationFlags {
    bool no_memory = false;      // S' replaced by zeros; gamma and pools unused
    bool no_multitask = false;   // beta2 forced to 0
    bool no_fusion = false;      // pooled C and S' fed straight to the output layer

    bool operator==(const AblationFlags&) const = default;
};

struct ModelConfig {
    EncoderConfig encoder;

    int top_k = 2;
    double mu = 0.5;
    int pool_capacity = 10;
    PoolAggregation pool_aggregation = PoolAggregation::mean;
    GammaBounds gamma_bounds;
    bool straight_through = true;
    FusionVariant fusion = FusionVariant::double_head;
    MemorySource memory_source_train = MemorySource::gold;
    MemorySource memory_source_eval = MemorySource::predicted;

    double learning_rate = 1e-3;
    int batch_size = 8;          // dialogues per update
    int epochs = 20;
    int patience = 5;
    double grad_clip = 5.0;
    double beta1 = 0.5;
    double beta2 = 0.5;
    std::uint64_t seed = 13;
    int max_context = 5;
    int min_freq = 1;

    AblationFlags ablation;
    EmotionThresholds thresholds;

    /// Every violated constraint, one message each; empty when valid.
    std::vector<std::string> problems() const;
    /// Throws ConfigError listing all problems at once.
    void validate() const;
};

}  // namespace cfonet
