// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfonet/vocab.hpp"

#include "cfonet/errors.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace cfonet {

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) out.push_back(std::move(current));
        current.clear();
    };
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isspace(c)) {
            flush();
        } else if (std::ispunct(c)) {
            flush();
            out.emplace_back(1, ch);
        } else {
            current.push_back(static_cast<char>(std::tolower(c)));
        }
    }
    flush();
    return out;
}

Vocab::Vocab() {
    add("<pad>");
    add("<unk>");
}

int Vocab::add(const std::string& token) {
    auto it = index_.find(token);
    if (it != index_.end()) return it->second;
    const int id = static_cast<int>(tokens_.size());
    tokens_.push_back(token);
    index_.emplace(token, id);
    return id;
}

int Vocab::id(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? kUnk : it->second;
}

std::vector<int> Vocab::encode(std::string_view text) const {
    std::vector<int> ids;
    for (const auto& tok : tokenize(text)) ids.push_back(id(tok));
    return ids;
}

Vocab build_vocab(const std::vector<Dialogue>& dialogues, int min_freq) {
    if (dialogues.empty()) throw DataError("build_vocab needs at least one dialogue");
    if (min_freq < 1) throw ConfigError("min_freq must be at least 1");
    std::map<std::string, int> counts;
    for (const Dialogue& d : dialogues) {
        for (const Utterance& u : d.utterances) {
            for (auto& tok : tokenize(u.text)) ++counts[tok];
        }
    }
    std::vector<std::pair<std::string, int>> kept;
    for (const auto& [tok, n] : counts) {
        if (n >= min_freq) kept.emplace_back(tok, n);
    }
    std::stable_sort(kept.begin(), kept.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    Vocab vocab;
    for (const auto& [tok, n] : kept) vocab.add(tok);
    return vocab;
}

}  // namespace cfonet
