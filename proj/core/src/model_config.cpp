// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfonet/model_config.hpp"

#include "cfonet/errors.hpp"

#include <sstream>

namespace cfonet {

std::string_view name_of(MemorySource s) { return s == MemorySource::gold ? "gold" : "predicted"; }

MemorySource parse_memory_source(std::string_view name) {
    if (name == "gold") return MemorySource::gold;
    if (name == "predicted") return MemorySource::predicted;
    throw ConfigError("memory source must be 'gold' or 'predicted', got '" + std::string(name) + "'");
}

std::string_view name_of(PoolAggregation a) { return a == PoolAggregation::max ? "max" : "mean"; }

PoolAggregation parse_pool_aggregation(std::string_view name) {
    if (name == "mean") return PoolAggregation::mean;
    if (name == "max") return PoolAggregation::max;
    throw ConfigError("pool aggregation must be 'mean' or 'max', got '" + std::string(name) + "'");
}

std::vector<std::string> ModelConfig::problems() const {
    std::vector<std::string> out;
    auto need = [&](bool ok, const std::string& msg) {
        if (!ok) out.push_back(msg);
    };
    need(encoder.embed_dim >= 1, "model.embed_dim must be >= 1");
    need(encoder.hidden_dim >= 1, "model.hidden_dim must be >= 1");
    need(encoder.n_heads >= 1 && encoder.d_model() % encoder.n_heads == 0,
         "model.n_heads must divide d_model = 2 * hidden_dim");
    need(top_k >= 1 && top_k <= kNumStrategies, "model.top_k must lie in [1, 11]");
    need(mu > 0.0, "model.mu must be > 0");
    need(pool_capacity >= 1, "model.pool_capacity must be >= 1");
    need(gamma_bounds.min <= 1.0 && gamma_bounds.max >= 1.0,
         "model.gamma_min <= 1 <= model.gamma_max required (gamma starts at 1)");
    need(learning_rate > 0.0, "train.learning_rate must be > 0");
    need(batch_size >= 1, "train.batch_size must be >= 1");
    need(epochs >= 0, "train.epochs must be >= 0");
    need(patience >= 1, "train.patience must be >= 1");
    need(grad_clip > 0.0, "train.grad_clip must be > 0");
    need(beta1 >= 0.0, "train.beta1 must be >= 0");
    need(beta2 >= 0.0, "train.beta2 must be >= 0");
    need(max_context >= 2, "train.max_context must be >= 2");
    need(min_freq >= 1, "train.min_freq must be >= 1");
    need(thresholds.negative <= thresholds.positive,
         "data.emotion_threshold_neg must not exceed data.emotion_threshold_pos");
    return out;
}

void ModelConfig::validate() const {
    const auto list = problems();
    if (list.empty()) return;
    std::ostringstream msg;
    msg << list.size() << " invalid setting(s): ";
    for (std::size_t i = 0; i < list.size(); ++i) msg << (i ? "; " : "") << list[i];
    throw ConfigError(msg.str());
}

}  // namespace cfonet
