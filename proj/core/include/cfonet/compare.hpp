// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cfonet/metrics.hpp"

#include <string>
#include <vector>

namespace cfonet {

struct ComparisonRow {
    std::string label;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double delta_f1 = 0.0;       // macro_f1 - baseline macro_f1
};

struct ComparisonTable {
    std::string baseline;
    std::vector<ComparisonRow> rows;

    std::string to_text() const;
    std::string to_json() const;
};

/// Side-by-side macro scores with Delta(M-F1) against the row named
/// `baseline` (the first row when empty). Reports must share a class count.
ComparisonTable compare_runs(const std::vector<MetricsReport>& reports, const std::vector<std::string>& labels,
                             const std::string& baseline = {});

}  // namespace cfonet
