// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cfonet/corpus.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace cfonet {

/// How far ahead a strategy counts as "reused" after a persuadee reply.
enum class ReuseWindow {
    remainder,   // any later persuader turn of the dialogue
    next_turn,   // only the next persuader turn
};

std::string_view name_of(ReuseWindow w);
ReuseWindow parse_reuse_window(std::string_view name);

struct QuadrantCell {
    std::size_t reused = 0;
    std::size_t not_reused = 0;

    std::size_t total() const { return reused + not_reused; }
    double reuse_rate() const;       // 0 when total is 0
    double not_reuse_rate() const;   // 0 when total is 0
};

/// Reuse statistics split by the persuadee emotion that followed a strategy.
/// Pairs with no later persuader turn are counted in `skipped`.
struct QuadrantReport {
    QuadrantCell positive;
    QuadrantCell neutral;
    QuadrantCell negative;
    std::size_t skipped = 0;
    ReuseWindow window = ReuseWindow::remainder;

    const QuadrantCell& cell(Emotion e) const;

    std::string to_json() const;
    std::string to_text() const;
    /// emotion,outcome,count,rate rows for plotting.
    std::string to_csv() const;
};

/// For every persuader strategy at turn t followed by a persuadee emotion at
/// t+1, checks whether the strategy appears again within `window`.
/// Unlabeled strategies and replies without an emotion are ignored.
QuadrantReport quadrant_analysis(const std::vector<Dialogue>& dialogues,
                                 ReuseWindow window = ReuseWindow::remainder);

}  // namespace cfonet
