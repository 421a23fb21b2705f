// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cfonet/labels.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cfonet {

enum class Speaker { persuader, persuadee };

struct Utterance {
    Speaker speaker = Speaker::persuader;
    std::string text;
    int turn_index = 0;
    std::optional<Strategy> strategy;    // persuader turns only
    std::optional<double> sentiment;     // persuadee turns only, raw annotation
    std::optional<Emotion> emotion;      // derived from sentiment

    bool operator==(const Utterance&) const = default;
};

struct Dialogue {
    std::string id;
    std::vector<Utterance> utterances;

    bool operator==(const Dialogue&) const = default;
};

/// Throws DataError when speaker/label consistency or turn ordering is violated.
void validate(const Dialogue& dialogue);

struct EmotionThresholds {
    double negative = -0.1;
    double positive = 0.1;
};

/// score < negative -> neg, score > positive -> pos, otherwise neu.
Emotion derive_emotion_label(double score, const EmotionThresholds& thresholds);

/// Fills `emotion` on every persuadee utterance that carries a sentiment score.
void derive_emotions(std::vector<Dialogue>& dialogues, const EmotionThresholds& thresholds);

enum class CorpusFormat { jsonl, p4g_csv };

/// Column mapping for raw CSV ingestion. Strategy columns are tried in order
/// and the first non-empty cell wins (multi-label turns keep their first label).
struct ColumnMapping {
    std::string dialogue_id_column;
    std::string speaker_column;
    std::string text_column;
    std::vector<std::string> strategy_columns;
    std::string sentiment_column;
    std::string turn_column;            // optional; file order when empty
    std::string persuader_value;
    std::string persuadee_value;
    std::string strategy_separator;     // optional; splits multi-label cells
    double sentiment_min = -1.0;        // raw range mapped onto [-1, 1]
    double sentiment_max = 1.0;

    /// Reads a key=value mapping file (optionally under a [mapping] section).
    /// Missing required keys raise ConfigError naming the key.
    static ColumnMapping from_file(const std::filesystem::path& path);
    static ColumnMapping from_pairs(const std::map<std::string, std::string>& pairs);
};

struct LoadOptions {
    CorpusFormat format = CorpusFormat::jsonl;
    ColumnMapping mapping;              // p4g_csv only
    EmotionThresholds thresholds;
};

struct LoadReport {
    std::size_t unknown_strategies = 0;
    std::vector<std::string> warnings;
};

std::vector<Dialogue> load_dialogues(const std::filesystem::path& path, const LoadOptions& options,
                                     LoadReport* report = nullptr);

std::vector<Dialogue> read_jsonl(std::istream& in, const EmotionThresholds& thresholds,
                                 LoadReport* report = nullptr);
std::vector<Dialogue> read_p4g_csv(std::istream& in, const ColumnMapping& mapping,
                                   const EmotionThresholds& thresholds, LoadReport* report = nullptr);

/// One dialogue per line in the normalized schema; strategies use canonical names.
std::string to_jsonl_line(const Dialogue& dialogue);
void write_jsonl(std::ostream& out, const std::vector<Dialogue>& dialogues);
void save_dialogues(const std::filesystem::path& path, const std::vector<Dialogue>& dialogues);

struct StrategyExample {
    std::string dialogue_id;
    std::vector<Utterance> context;     // ends with the target persuader turn
    int target_turn = 0;                // index of the target within the dialogue
    int context_begin = 0;              // index of context.front() within the dialogue
    Strategy gold_strategy = Strategy::none;
    std::optional<Emotion> gold_emotion;

    const Utterance& target() const { return context.back(); }
    /// The utterance immediately before the target, when the context has one.
    const Utterance* preceding() const {
        return context.size() >= 2 ? &context[context.size() - 2] : nullptr;
    }
};

/// One example per labeled persuader utterance with the most recent
/// `max_context` utterances (target included) as context.
std::vector<StrategyExample> make_examples(const Dialogue& dialogue, int max_context);

struct SplitRatios {
    double train = 0.8;
    double dev = 0.1;
    double test = 0.1;
};

struct DatasetSplit {
    std::vector<Dialogue> train;
    std::vector<Dialogue> dev;
    std::vector<Dialogue> test;
};

/// Shuffles at dialogue granularity and assigns floor(n * ratio) dialogues to
/// dev and test; the remainder goes to train.
DatasetSplit split(const std::vector<Dialogue>& dialogues, const SplitRatios& ratios,
                   std::uint64_t seed);

}  // namespace cfonet
