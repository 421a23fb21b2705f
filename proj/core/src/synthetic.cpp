// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfonet/synthetic.hpp"

#include "cfonet/errors.hpp"

#include <cmath>
#include <sstream>

namespace cfonet {

void SyntheticConfig::validate() const {
    std::vector<std::string> problems;
    auto prob = [&](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0)) problems.push_back(std::string(name) + " must lie in [0, 1]");
    };
    prob(p_repeat_after_pos, "p_repeat_after_pos");
    prob(p_avoid_after_neg, "p_avoid_after_neg");
    prob(p_ambiguous_strategy_text, "p_ambiguous_strategy_text");
    prob(p_ambiguous_emotion_text, "p_ambiguous_emotion_text");
    prob(keyword_rate, "keyword_rate");
    double total = 0.0;
    for (double p : emotion_probs) {
        prob(p, "emotion_probs");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) problems.push_back("emotion_probs must sum to 1");
    if (dialogues < 0) problems.push_back("dialogues must be non-negative");
    if (persuader_turns < 1) problems.push_back("persuader_turns must be at least 1");
    if (min_tokens < 1 || max_tokens < min_tokens) problems.push_back("need 1 <= min_tokens <= max_tokens");
    if (!problems.empty()) {
        std::ostringstream msg;
        msg << "invalid synthetic config:";
        for (const auto& p : problems) msg << ' ' << p << ';';
        throw ConfigError(msg.str());
    }
}

const std::array<std::vector<std::string>, kNumStrategies>& strategy_lexicon() {
    static const std::array<std::vector<std::string>, kNumStrategies> lexicon = {{
        {"because", "evidence", "statistics", "percent", "reason", "facts"},
        {"imagine", "suffering", "heartbreaking", "hungry", "tears", "feel"},
        {"organization", "trusted", "reputation", "certified", "established", "transparent"},
        {"small", "cents", "little", "start", "tiny", "step"},
        {"myself", "pledge", "personally", "mine", "committed", "i"},
        {"story", "friend", "remember", "happened", "once", "neighbor"},
        {"donation", "deducted", "payment", "amount", "bonus", "directly"},
        {"survey", "hit", "task", "mturk", "finished", "questions"},
        {"kids", "family", "yourself", "hobbies", "live", "weekend"},
        {"heard", "website", "familiar", "charities", "savethechildren", "visited"},
        {"hello", "bye", "thanks", "nice", "morning", "cheers"},
    }};
    return lexicon;
}

const std::array<std::vector<std::string>, kNumEmotions>& emotion_lexicon() {
    static const std::array<std::vector<std::string>, kNumEmotions> lexicon = {{
        {"wonderful", "happy", "love", "agree", "glad", "great"},
        {"hmm", "okay", "perhaps", "see", "possibly", "noted"},
        {"no", "doubt", "annoying", "skeptical", "refuse", "unsure"},
    }};
    return lexicon;
}

const std::vector<std::string>& filler_lexicon() {
    static const std::vector<std::string> fillers = {
        "the", "we", "it", "so", "that", "really", "well", "think", "maybe", "could",
        "would", "about", "this", "there", "what", "just", "can", "be", "and", "to",
    };
    return fillers;
}

namespace {

template <class T>
const T& pick(const std::vector<T>& items, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> dist(0, items.size() - 1);
    return items[dist(rng)];
}

std::string render(const std::vector<std::string>* keywords, const SyntheticConfig& config,
                   std::mt19937_64& rng) {
    std::uniform_int_distribution<int> length(config.min_tokens, config.max_tokens);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = length(rng);
    std::vector<std::string> words;
    bool has_keyword = false;
    for (int i = 0; i < n; ++i) {
        if (keywords != nullptr && unit(rng) < config.keyword_rate) {
            words.push_back(pick(*keywords, rng));
            has_keyword = true;
        } else {
            words.push_back(pick(filler_lexicon(), rng));
        }
    }
    if (keywords != nullptr && !has_keyword) {
        std::uniform_int_distribution<int> slot(0, n - 1);
        words[static_cast<std::size_t>(slot(rng))] = pick(*keywords, rng);
    }
    std::string text;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) text.push_back(' ');
        text += words[i];
    }
    return text;
}

/// Uniform over strategies not in `banned` and not `exclude`; -1 when none is left.
int draw_allowed(const std::vector<bool>& banned, int exclude, std::mt19937_64& rng) {
    std::vector<int> allowed;
    for (int s = 0; s < kNumStrategies; ++s) {
        if (!banned[static_cast<std::size_t>(s)] && s != exclude) allowed.push_back(s);
    }
    if (allowed.empty()) return -1;
    std::uniform_int_distribution<std::size_t> dist(0, allowed.size() - 1);
    return allowed[dist(rng)];
}

}  // namespace

std::vector<Dialogue> generate_synthetic(const SyntheticConfig& config, std::mt19937_64& rng) {
    config.validate();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::discrete_distribution<int> emotion_dist(config.emotion_probs.begin(), config.emotion_probs.end());

    std::vector<Dialogue> out;
    out.reserve(static_cast<std::size_t>(config.dialogues));
    for (int n = 0; n < config.dialogues; ++n) {
        Dialogue d;
        d.id = "synth-" + std::to_string(n);
        int previous = -1;
        std::optional<Emotion> reply;
        std::vector<bool> banned(kNumStrategies, false);
        for (int t = 0; t < config.persuader_turns; ++t) {
            int strategy = 0;
            if (previous < 0 || !reply || *reply == Emotion::neu) {
                strategy = draw_allowed(banned, -1, rng);
            } else {
                const bool keep = *reply == Emotion::pos ? unit(rng) < config.p_repeat_after_pos
                                                         : unit(rng) >= config.p_avoid_after_neg;
                strategy = keep ? previous : draw_allowed(banned, previous, rng);
                if (!keep && strategy >= 0) banned[static_cast<std::size_t>(previous)] = true;
            }
            // Only reachable with more persuader turns than strategies.
            if (strategy < 0) strategy = previous >= 0 ? previous : 0;

            Utterance er;
            er.speaker = Speaker::persuader;
            er.turn_index = static_cast<int>(d.utterances.size());
            er.strategy = strategy_from_index(strategy);
            const bool ambiguous = unit(rng) < config.p_ambiguous_strategy_text;
            er.text = render(ambiguous ? nullptr : &strategy_lexicon()[static_cast<std::size_t>(strategy)],
                             config, rng);
            d.utterances.push_back(std::move(er));

            const Emotion emotion = emotion_from_index(emotion_dist(rng));
            Utterance ee;
            ee.speaker = Speaker::persuadee;
            ee.turn_index = static_cast<int>(d.utterances.size());
            const bool vague = unit(rng) < config.p_ambiguous_emotion_text;
            ee.text = render(vague ? nullptr : &emotion_lexicon()[static_cast<std::size_t>(index_of(emotion))],
                             config, rng);
            switch (emotion) {
                case Emotion::pos: ee.sentiment = 0.2 + 0.8 * unit(rng); break;
                case Emotion::neu: ee.sentiment = -0.05 + 0.1 * unit(rng); break;
                case Emotion::neg: ee.sentiment = -0.2 - 0.8 * unit(rng); break;
            }
            ee.emotion = emotion;
            d.utterances.push_back(std::move(ee));

            previous = strategy;
            reply = emotion;
        }
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<Dialogue> generate_synthetic(const SyntheticConfig& config, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return generate_synthetic(config, rng);
}

}  // namespace cfonet
