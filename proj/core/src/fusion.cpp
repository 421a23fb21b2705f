// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfonet/fusion.hpp"

#include "cfonet/errors.hpp"

namespace cfonet {

std::string_view name_of(FusionVariant v) {
    switch (v) {
        case FusionVariant::mlp: return "mlp";
        case FusionVariant::double_head: return "double_head";
        case FusionVariant::co_attention: return "co_attention";
    }
    return "unknown";
}

FusionVariant parse_fusion_variant(std::string_view name) {
    if (name == "mlp") return FusionVariant::mlp;
    if (name == "double_head") return FusionVariant::double_head;
    if (name == "co_attention") return FusionVariant::co_attention;
    throw ConfigError("unknown fusion variant '" + std::string(name) +
                      "' (expected mlp, double_head or co_attention)");
}

Fusion::Fusion(FusionVariant variant, int d_model, int n_labels, ParameterStore& store)
    : variant_(variant), d_model_(d_model) {
    if (variant == FusionVariant::double_head) {
        context_head_ = Mlp::create(store, "fusion.context_head", d_model, d_model, n_labels);
        strategy_head_ = Mlp::create(store, "fusion.strategy_head", d_model, d_model, n_labels);
    } else {
        joint_ = Mlp::create(store, "fusion.joint", 2 * d_model, d_model, 2 * d_model);
    }
    output_ = SoftmaxLayer::create(store, "fusion.out", 2 * d_model, n_labels);
}

namespace {

void check_inputs(ag::Var contextual, ag::Var strategies, int d) {
    if (contextual.value().rows() < 1) throw ShapeError("fusion needs at least one context row");
    if (contextual.value().cols() != d || strategies.value().cols() != d) {
        throw ShapeError("fusion inputs must have d_model columns");
    }
}

ag::Var pooled_pair(ag::Var a, ag::Var b) {
    const ag::Var parts[] = {ag::mean_rows(a), ag::mean_rows(b)};
    return ag::vcat(parts);
}

}  // namespace

FusionResult Fusion::fuse(ag::Tape& tape, ag::Var contextual, ag::Var strategies) const {
    switch (variant_) {
        case FusionVariant::mlp: return fuse_mlp(tape, contextual, strategies);
        case FusionVariant::double_head: return fuse_double_head(tape, contextual, strategies);
        case FusionVariant::co_attention: return fuse_coattention(tape, contextual, strategies);
    }
    throw ConfigError("unknown fusion variant");
}

FusionResult Fusion::fuse_mlp(ag::Tape& tape, ag::Var contextual, ag::Var strategies) const {
    if (joint_.w1 == nullptr) throw ConfigError("fusion was not built with the mlp layer");
    check_inputs(contextual, strategies, d_model_);
    ag::Var g = joint_.forward(tape, pooled_pair(contextual, strategies), true);
    return FusionResult{output_.forward(tape, g), {}, {}, {}, {}};
}

FusionResult Fusion::fuse_double_head(ag::Tape& tape, ag::Var contextual, ag::Var strategies) const {
    if (context_head_.w1 == nullptr) throw ConfigError("fusion was not built with double heads");
    check_inputs(contextual, strategies, d_model_);
    ag::Var y1 = ag::softmax(context_head_.forward(tape, ag::mean_rows(contextual)));
    ag::Var y2 = ag::softmax(strategy_head_.forward(tape, ag::mean_rows(strategies)));
    FusionResult r;
    r.strategy_probs = ag::softmax(ag::add(y1, y2));
    r.context_head = y1.value().col(0);
    r.strategy_head = y2.value().col(0);
    return r;
}

FusionResult Fusion::fuse_coattention(ag::Tape& tape, ag::Var contextual, ag::Var strategies) const {
    if (joint_.w1 == nullptr) throw ConfigError("fusion was not built with the co-attention layer");
    check_inputs(contextual, strategies, d_model_);
    ag::Var similarity = ag::matmul(contextual, ag::transpose(strategies));   // N x L
    ag::Var a = ag::softmax_rows(similarity);
    ag::Var b = ag::softmax_cols(similarity);
    ag::Var attended_context = ag::matmul(a, strategies);                     // N x d
    ag::Var attended_strategies = ag::matmul(ag::transpose(b), contextual);   // L x d
    ag::Var g = joint_.forward(tape, pooled_pair(attended_context, attended_strategies), true);
    FusionResult r;
    r.strategy_probs = output_.forward(tape, g);
    r.row_attention = a.value();
    r.col_attention = b.value();
    return r;
}

FusionResult Fusion::concat_direct(ag::Tape& tape, ag::Var contextual, ag::Var strategies) const {
    check_inputs(contextual, strategies, d_model_);
    return FusionResult{output_.forward(tape, pooled_pair(contextual, strategies)), {}, {}, {}, {}};
}

}  // namespace cfonet
