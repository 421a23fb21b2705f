// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include <cfonet/synthetic.hpp>

#include <atomic>
#include <fstream>
#include <random>
#include <sstream>

namespace fixture {

cfonet::Utterance er(const std::string& text, std::optional<cfonet::Strategy> strategy) {
    cfonet::Utterance u;
    u.speaker = cfonet::Speaker::persuader;
    u.text = text;
    u.strategy = strategy;
    return u;
}

cfonet::Utterance ee(const std::string& text, std::optional<double> sentiment) {
    cfonet::Utterance u;
    u.speaker = cfonet::Speaker::persuadee;
    u.text = text;
    u.sentiment = sentiment;
    if (sentiment) u.emotion = cfonet::derive_emotion_label(*sentiment, {});
    return u;
}

cfonet::Dialogue dialogue(const std::string& id, std::vector<cfonet::Utterance> turns) {
    cfonet::Dialogue d;
    d.id = id;
    for (std::size_t i = 0; i < turns.size(); ++i) turns[i].turn_index = static_cast<int>(i);
    d.utterances = std::move(turns);
    return d;
}

cfonet::ModelConfig tiny_config(cfonet::FusionVariant fusion) {
    cfonet::ModelConfig c;
    c.encoder.embed_dim = 6;
    c.encoder.hidden_dim = 4;
    c.encoder.n_heads = 2;
    c.fusion = fusion;
    c.max_context = 5;
    c.batch_size = 4;
    c.epochs = 3;
    c.seed = 5;
    return c;
}

std::vector<cfonet::Dialogue> synthetic(int dialogues, std::uint64_t seed, int persuader_turns) {
    cfonet::SyntheticConfig config;
    config.dialogues = dialogues;
    config.persuader_turns = persuader_turns;
    return cfonet::generate_synthetic(config, seed);
}

void randomize(cfonet::ParameterStore& store, std::uint64_t seed, double scale) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-scale, scale);
    store.for_each([&](cfonet::Parameter& p) {
        for (Eigen::Index i = 0; i < p.value.size(); ++i) p.value.data()[i] = unit(rng);
    });
}

std::filesystem::path source_path(const std::string& relative) {
    return std::filesystem::path(CFONET_SOURCE_DIR) / relative;
}

TempDir::TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("cfonet-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

}  // namespace fixture
