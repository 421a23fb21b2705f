// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cfonet/corpus.hpp>
#include <cfonet/model.hpp>
#include <cfonet/model_config.hpp>
#include <cfonet/vocab.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace fixture {

cfonet::Utterance er(const std::string& text, std::optional<cfonet::Strategy> strategy);
/// Persuadee turn; the emotion is derived from `sentiment` with the default thresholds.
cfonet::Utterance ee(const std::string& text, std::optional<double> sentiment);
/// Assigns consecutive turn indices.
cfonet::Dialogue dialogue(const std::string& id, std::vector<cfonet::Utterance> turns);

/// A d_model = 8 model configuration with two heads.
cfonet::ModelConfig tiny_config(cfonet::FusionVariant fusion = cfonet::FusionVariant::double_head);

std::vector<cfonet::Dialogue> synthetic(int dialogues, std::uint64_t seed, int persuader_turns = 4);

/// Overwrites every parameter (biases included) with uniform draws in
/// [-scale, scale] so that oracle comparisons exercise every term.
void randomize(cfonet::ParameterStore& store, std::uint64_t seed, double scale = 0.5);

/// Path to a file under the source tree.
std::filesystem::path source_path(const std::string& relative);

/// Removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace fixture
