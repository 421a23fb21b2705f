// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace cfonet {

inline constexpr int kNumStrategies = 11;
inline constexpr int kNumEmotions = 3;

/// Persuasion strategies: seven appeals, three inquiries and a none category.
enum class Strategy : int {
    logical_appeal = 0,
    emotion_appeal,
    credibility_appeal,
    foot_in_the_door,
    self_modeling,
    personal_story,
    donation_information,
    task_related_inquiry,
    personal_related_inquiry,
    source_related_inquiry,
    none,
};

/// Order matches the emotion head's output units.
enum class Emotion : int { pos = 0, neu = 1, neg = 2 };

inline constexpr std::array<std::string_view, kNumStrategies> kStrategyNames = {
    "Logical appeal",       "Emotion appeal",           "Credibility appeal",
    "Foot-in-the-door",     "Self-modeling",            "Personal story",
    "Donation information", "Task-related inquiry",     "Personal-related inquiry",
    "Source-related inquiry", "None",
};

inline constexpr std::array<std::string_view, kNumEmotions> kEmotionNames = {"pos", "neu", "neg"};

constexpr int index_of(Strategy s) { return static_cast<int>(s); }
constexpr int index_of(Emotion e) { return static_cast<int>(e); }

Strategy strategy_from_index(int id);
Emotion emotion_from_index(int id);
std::string_view name_of(Strategy s);
std::string_view name_of(Emotion e);

/// Lowercases, drops punctuation and collapses hyphens, underscores and
/// whitespace so that "Logical-Appeal", "logical_appeal" and "logical appeal"
/// share one key.
std::string normalize_strategy_key(std::string_view raw);

struct StrategyParse {
    Strategy strategy = Strategy::none;
    /// False when the string matched nothing in the alias table and fell back to none.
    bool recognized = true;
};

/// Maps a raw annotation string onto the fixed taxonomy.
StrategyParse parse_strategy(std::string_view raw);

std::optional<Emotion> parse_emotion(std::string_view raw);

}  // namespace cfonet
