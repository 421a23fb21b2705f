// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration: INI-style text with [model], [train],
// [ablation], [data], [synthetic] and [eval] sections. Overrides use the
// flat "section.key=value" form and are applied in order (last wins).

#pragma once

#include "cfonet/corpus.hpp"
#include "cfonet/model_config.hpp"
#include "cfonet/quadrant.hpp"
#include "cfonet/synthetic.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace cfonet {

struct DataConfig {
    CorpusFormat format = CorpusFormat::jsonl;
    std::string mapping;                 // mapping file for p4g_csv
    SplitRatios split;
    std::uint64_t split_seed = 7;
};

struct ExperimentConfig {
    ModelConfig model;
    DataConfig data;
    SyntheticConfig synthetic;
    ReuseWindow quadrant_window = ReuseWindow::remainder;

    /// Every "section.key" understood by set(), in output order.
    static const std::vector<std::string>& keys();

    /// Assigns one key; throws ConfigError on an unknown key or a bad value.
    void set(const std::string& key, const std::string& value);
    std::string get(const std::string& key) const;

    /// All problems in model, data and synthetic settings; empty when valid.
    std::vector<std::string> problems() const;
    void validate() const;

    /// Canonical text form; parse(to_text()) reproduces this config exactly.
    std::string to_text() const;
};

using Override = std::pair<std::string, std::string>;

/// "section.key=value" -> pair; throws ConfigError without '='.
Override parse_override(const std::string& text);

/// Reads `text` (may be empty) then applies `overrides` in order. Unknown
/// keys and unparsable values are collected and reported in one ConfigError,
/// as are the violated constraints of the final config.
ExperimentConfig parse_config(const std::string& text, const std::vector<Override>& overrides = {});
ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<Override>& overrides = {});

}  // namespace cfonet
