// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cfonet/corpus.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace cfonet {

/// Controls the seeded synthetic persuasion corpus. The persuader's strategy
/// at each turn depends on the previous strategy and the persuadee's reply:
///   after pos: repeat with p_repeat_after_pos, otherwise switch;
///   after neg: switch with p_avoid_after_neg, otherwise repeat;
///   after neu (and at the first turn): uniform over the allowed strategies.
/// A strategy that is switched away from after pos or neg feedback is never
/// used again in that dialogue, so reuse within the rest of the dialogue
/// happens exactly when the strategy is repeated at the next turn.
struct SyntheticConfig {
    int dialogues = 100;
    int persuader_turns = 6;             // each followed by one persuadee reply
    double p_repeat_after_pos = 0.63;
    double p_avoid_after_neg = 0.75;
    std::array<double, kNumEmotions> emotion_probs = {0.4, 0.2, 0.4};  // pos, neu, neg
    double p_ambiguous_strategy_text = 0.5;  // persuader turn uses filler words only
    double p_ambiguous_emotion_text = 0.1;   // persuadee turn uses filler words only
    double keyword_rate = 0.6;               // share of keyword tokens in informative turns
    int min_tokens = 4;
    int max_tokens = 7;

    /// Throws ConfigError listing every invalid field.
    void validate() const;
};

/// Disjoint keyword lists used as surface templates.
const std::array<std::vector<std::string>, kNumStrategies>& strategy_lexicon();
const std::array<std::vector<std::string>, kNumEmotions>& emotion_lexicon();
const std::vector<std::string>& filler_lexicon();

std::vector<Dialogue> generate_synthetic(const SyntheticConfig& config, std::mt19937_64& rng);
std::vector<Dialogue> generate_synthetic(const SyntheticConfig& config, std::uint64_t seed);

}  // namespace cfonet
