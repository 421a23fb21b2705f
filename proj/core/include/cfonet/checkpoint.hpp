// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0
//
// Checkpoint layout (all integers little-endian):
//   magic    8 bytes  "CFONETCK"
//   version  u32
//   config   u64 length + UTF-8 text (canonical ExperimentConfig form)
//   vocab    u64 count, then per token: u64 length + bytes
//   params   u64 count, then per tensor: u64 name length + name,
//            u64 rows, u64 cols, rows*cols IEEE-754 doubles (column-major)
//   crc32    u32 over every preceding byte

#pragma once

#include "cfonet/config.hpp"
#include "cfonet/model.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

namespace cfonet {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct LoadedModel {
    ExperimentConfig config;
    std::unique_ptr<CfoNet> model;
};

/// `config.model` is replaced by the model's own configuration.
std::string serialize_checkpoint(const CfoNet& model, const ExperimentConfig& config);
/// VersionError on a different format version, CheckpointError on anything
/// malformed (bad magic, checksum, truncation, parameter mismatch).
LoadedModel deserialize_checkpoint(const std::string& bytes);

void save_checkpoint(const std::filesystem::path& path, const CfoNet& model, const ExperimentConfig& config);
LoadedModel load_checkpoint(const std::filesystem::path& path);

}  // namespace cfonet
