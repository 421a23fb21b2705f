// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cfonet/corpus.hpp"

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cfonet {

/// Lowercased whitespace and punctuation tokenization. Punctuation marks
/// become their own tokens.
std::vector<std::string> tokenize(std::string_view text);

class Vocab {
public:
    static constexpr int kPad = 0;
    static constexpr int kUnk = 1;

    Vocab();

    int add(const std::string& token);
    int id(const std::string& token) const;
    const std::string& token(int id) const { return tokens_.at(static_cast<std::size_t>(id)); }
    bool contains(const std::string& token) const { return index_.count(token) != 0; }
    int size() const { return static_cast<int>(tokens_.size()); }
    const std::vector<std::string>& tokens() const { return tokens_; }

    std::vector<int> encode(std::string_view text) const;

    bool operator==(const Vocab& other) const { return tokens_ == other.tokens_; }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, int> index_;
};

/// Tokens seen at least `min_freq` times, ordered by descending frequency
/// then lexicographically.
Vocab build_vocab(const std::vector<Dialogue>& dialogues, int min_freq);

}  // namespace cfonet
