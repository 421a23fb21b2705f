// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfonet/quadrant.hpp"

#include "cfonet/errors.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <sstream>

namespace cfonet {

std::string_view name_of(ReuseWindow w) { return w == ReuseWindow::next_turn ? "next_turn" : "remainder"; }

ReuseWindow parse_reuse_window(std::string_view name) {
    if (name == "remainder") return ReuseWindow::remainder;
    if (name == "next_turn") return ReuseWindow::next_turn;
    throw ConfigError("reuse window must be 'remainder' or 'next_turn', got '" + std::string(name) + "'");
}

double QuadrantCell::reuse_rate() const {
    return total() == 0 ? 0.0 : static_cast<double>(reused) / static_cast<double>(total());
}

double QuadrantCell::not_reuse_rate() const {
    return total() == 0 ? 0.0 : static_cast<double>(not_reused) / static_cast<double>(total());
}

const QuadrantCell& QuadrantReport::cell(Emotion e) const {
    switch (e) {
        case Emotion::pos: return positive;
        case Emotion::neg: return negative;
        default: return neutral;
    }
}

QuadrantReport quadrant_analysis(const std::vector<Dialogue>& dialogues, ReuseWindow window) {
    QuadrantReport report;
    report.window = window;
    for (const auto& dialogue : dialogues) {
        const auto& turns = dialogue.utterances;
        for (std::size_t t = 0; t + 1 < turns.size(); ++t) {
            const Utterance& u = turns[t];
            const Utterance& reply = turns[t + 1];
            if (u.speaker != Speaker::persuader || !u.strategy) continue;
            if (reply.speaker != Speaker::persuadee || !reply.emotion) continue;

            bool any_later = false;
            bool reused = false;
            for (std::size_t j = t + 2; j < turns.size(); ++j) {
                if (turns[j].speaker != Speaker::persuader || !turns[j].strategy) continue;
                any_later = true;
                if (*turns[j].strategy == *u.strategy) reused = true;
                if (window == ReuseWindow::next_turn || reused) break;
            }
            if (!any_later) {
                ++report.skipped;
                continue;
            }
            QuadrantCell& cell = *reply.emotion == Emotion::pos   ? report.positive
                                 : *reply.emotion == Emotion::neg ? report.negative
                                                                  : report.neutral;
            ++(reused ? cell.reused : cell.not_reused);
        }
    }
    return report;
}

namespace {

nlohmann::json cell_json(const QuadrantCell& c) {
    return {{"reused", c.reused},
            {"not_reused", c.not_reused},
            {"total", c.total()},
            {"p_reuse", c.reuse_rate()},
            {"p_not_reuse", c.not_reuse_rate()}};
}

}  // namespace

std::string QuadrantReport::to_json() const {
    nlohmann::json j;
    j["window"] = std::string(name_of(window));
    j["pos"] = cell_json(positive);
    j["neu"] = cell_json(neutral);
    j["neg"] = cell_json(negative);
    j["skipped"] = skipped;
    return j.dump(2);
}

std::string QuadrantReport::to_text() const {
    std::ostringstream out;
    char line[128];
    out << "reuse window: " << name_of(window) << "\n";
    out << "emotion  reused  not_reused  P(reuse)  P(not_reuse)\n";
    for (Emotion e : {Emotion::pos, Emotion::neu, Emotion::neg}) {
        const QuadrantCell& c = cell(e);
        std::snprintf(line, sizeof line, "%-7s  %6zu  %10zu  %8.4f  %12.4f\n", std::string(name_of(e)).c_str(),
                      c.reused, c.not_reused, c.reuse_rate(), c.not_reuse_rate());
        out << line;
    }
    out << "skipped (no later persuader turn): " << skipped << "\n";
    return out.str();
}

std::string QuadrantReport::to_csv() const {
    std::ostringstream out;
    out << "emotion,outcome,count,rate\n";
    for (Emotion e : {Emotion::pos, Emotion::neu, Emotion::neg}) {
        const QuadrantCell& c = cell(e);
        const std::string n(name_of(e));
        out << n << ",reused," << c.reused << ',' << c.reuse_rate() << '\n';
        out << n << ",not_reused," << c.not_reused << ',' << c.not_reuse_rate() << '\n';
    }
    return out.str();
}

}  // namespace cfonet
