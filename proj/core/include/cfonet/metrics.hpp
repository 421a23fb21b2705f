// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cfonet/parameters.hpp"

#include <string>
#include <vector>

namespace cfonet {

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
    std::size_t true_positives = 0;
};

/// Per-class and macro scores. Macro values average over all classes,
/// including classes with zero support (they contribute 0).
struct MetricsReport {
    std::vector<std::string> class_names;
    std::vector<ClassMetrics> per_class;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double accuracy = 0.0;
    std::size_t n_examples = 0;
    std::vector<std::vector<std::size_t>> confusion;   // [gold][pred]

    std::size_t n_classes() const { return per_class.size(); }
    std::size_t zero_support_classes() const;

    std::string to_json() const;
    std::string to_text() const;
    static MetricsReport from_json(const std::string& text);
};

/// Throws DataError on length mismatch, empty input or labels outside
/// [0, n_classes). Names default to the class index.
MetricsReport compute_metrics(const std::vector<int>& preds, const std::vector<int>& golds, int n_classes,
                              std::vector<std::string> class_names = {});

/// Mean over examples of the k-th largest entry (k is 1-based).
double confidence_at_k(const std::vector<Vector>& distributions, int k);

}  // namespace cfonet
