// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfonet/labels.hpp"

#include "cfonet/errors.hpp"

#include <cctype>
#include <unordered_map>

namespace cfonet {

Strategy strategy_from_index(int id) {
    if (id < 0 || id >= kNumStrategies) {
        throw DataError("strategy id " + std::to_string(id) + " outside [0, 11)");
    }
    return static_cast<Strategy>(id);
}

Emotion emotion_from_index(int id) {
    if (id < 0 || id >= kNumEmotions) throw DataError("emotion id " + std::to_string(id) + " outside [0, 3)");
    return static_cast<Emotion>(id);
}

std::string_view name_of(Strategy s) { return kStrategyNames[static_cast<std::size_t>(index_of(s))]; }
std::string_view name_of(Emotion e) { return kEmotionNames[static_cast<std::size_t>(index_of(e))]; }

std::string normalize_strategy_key(std::string_view raw) {
    std::string key;
    key.reserve(raw.size());
    for (char ch : raw) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) key.push_back(static_cast<char>(std::tolower(c)));
    }
    return key;
}

namespace {

const std::unordered_map<std::string, Strategy>& alias_table() {
    static const std::unordered_map<std::string, Strategy> table = [] {
        std::unordered_map<std::string, Strategy> t;
        for (int i = 0; i < kNumStrategies; ++i) {
            t.emplace(normalize_strategy_key(kStrategyNames[static_cast<std::size_t>(i)]),
                      static_cast<Strategy>(i));
        }
        const std::pair<const char*, Strategy> aliases[] = {
            {"logos", Strategy::logical_appeal},
            {"logic appeal", Strategy::logical_appeal},
            {"emotional appeal", Strategy::emotion_appeal},
            {"pathos", Strategy::emotion_appeal},
            {"credibility", Strategy::credibility_appeal},
            {"ethos", Strategy::credibility_appeal},
            {"foot in door", Strategy::foot_in_the_door},
            {"self modelling", Strategy::self_modeling},
            {"donation info", Strategy::donation_information},
            {"task inquiry", Strategy::task_related_inquiry},
            {"personal inquiry", Strategy::personal_related_inquiry},
            {"source inquiry", Strategy::source_related_inquiry},
            {"non strategy", Strategy::none},
            {"other", Strategy::none},
        };
        for (const auto& [alias, s] : aliases) t.emplace(normalize_strategy_key(alias), s);
        return t;
    }();
    return table;
}

}  // namespace

StrategyParse parse_strategy(std::string_view raw) {
    const auto& table = alias_table();
    auto it = table.find(normalize_strategy_key(raw));
    if (it == table.end()) return {Strategy::none, false};
    return {it->second, true};
}

std::optional<Emotion> parse_emotion(std::string_view raw) {
    const std::string key = normalize_strategy_key(raw);
    if (key == "pos" || key == "positive") return Emotion::pos;
    if (key == "neu" || key == "neutral") return Emotion::neu;
    if (key == "neg" || key == "negative") return Emotion::neg;
    return std::nullopt;
}

}  // namespace cfonet
