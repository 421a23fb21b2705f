// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0
//
// Cross-channel fusion predictors combining the contextual encoding C
// (N x d) with the emotion-aware strategies S' (L x d). Variable-length row
// lists are mean-pooled to width d before any concatenation.

#pragma once

#include "cfonet/layers.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace cfonet {

enum class FusionVariant { mlp, double_head, co_attention };

std::string_view name_of(FusionVariant v);
FusionVariant parse_fusion_variant(std::string_view name);

struct FusionResult {
    ag::Var strategy_probs;                 // y^s
    std::optional<Vector> context_head;     // y^s_1 (double head)
    std::optional<Vector> strategy_head;    // y^s_2 (double head)
    std::optional<Matrix> row_attention;    // a: N x L, rows sum to 1 (co-attention)
    std::optional<Matrix> col_attention;    // b: N x L, columns sum to 1 (co-attention)
};

class Fusion {
public:
    /// Registers "fusion.*" parameters for `variant` plus the shared L x 2d
    /// output layer, which the direct-concatenation ablation also uses.
    Fusion(FusionVariant variant, int d_model, int n_labels, ParameterStore& store);

    FusionVariant variant() const { return variant_; }

    FusionResult fuse(ag::Tape& tape, ag::Var contextual, ag::Var strategies) const;

    /// g = MLP([mean C; mean S']), y^s = softmax(W^s g + b_s).
    FusionResult fuse_mlp(ag::Tape& tape, ag::Var contextual, ag::Var strategies) const;
    /// y^s = softmax(softmax(MLP_1(mean C)) + softmax(MLP_2(mean S'))).
    FusionResult fuse_double_head(ag::Tape& tape, ag::Var contextual, ag::Var strategies) const;
    /// Shared similarity A = C S'^T attended in both directions, then as fuse_mlp.
    FusionResult fuse_coattention(ag::Tape& tape, ag::Var contextual, ag::Var strategies) const;
    /// Ablation: y^s = softmax(W^s [mean C; mean S'] + b_s) with no fusion layer.
    FusionResult concat_direct(ag::Tape& tape, ag::Var contextual, ag::Var strategies) const;

private:
    FusionVariant variant_;
    int d_model_;
    Mlp joint_;         // mlp and co-attention: 2d -> d -> 2d
    Mlp context_head_;  // double head: d -> d -> L
    Mlp strategy_head_;
    SoftmaxLayer output_;
};

}  // namespace cfonet
