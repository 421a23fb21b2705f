// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0
//
// Hierarchical context encoder: a bidirectional LSTM turns each utterance
// into the concatenation of its final forward and backward hidden states,
// then one multi-head self-attention layer relates the utterances of a
// context window to each other.

#pragma once

#include "cfonet/autograd.hpp"
#include "cfonet/corpus.hpp"

#include <span>
#include <vector>

namespace cfonet {

struct EncoderConfig {
    int embed_dim = 64;
    int hidden_dim = 64;                  // per direction
    int n_heads = 4;
    bool positional_encoding = false;     // sinusoidal utterance positions
    bool role_embedding = true;           // learned persuader/persuadee offset
    bool residual_norm = false;           // LayerNorm(H + attention(H))

    int d_model() const { return 2 * hidden_dim; }
};

struct ContextEncoding {
    ag::Var contextual;                   // C: N x d_model
    ag::Var utterances;                   // H: N x d_model, pre-attention
    std::vector<Matrix> attention;        // one N x N row-stochastic matrix per head
};

struct AttentionResult {
    ag::Var output;
    std::vector<Matrix> weights;
};

class Encoder {
public:
    /// Registers parameters under "encoder.*". Rejects n_heads that do not
    /// divide d_model.
    Encoder(const EncoderConfig& config, int vocab_size, ParameterStore& store);

    const EncoderConfig& config() const { return config_; }
    int d_model() const { return config_.d_model(); }

    /// Zeroes the padding row of the embedding table.
    void reset_padding_row();

    /// Final [forward; backward] hidden state (d_model x 1). Trailing padding
    /// is stripped first; an all-padding input keeps a single padding token.
    ag::Var encode_utterance(ag::Tape& tape, std::span<const int> tokens) const;

    /// Scaled dot-product self-attention over the rows of H followed by the
    /// output projection.
    AttentionResult multi_head_attention(ag::Tape& tape, ag::Var utterances) const;

    /// Stacks already encoded utterances, adds role (and optional position)
    /// signals, then applies attention.
    ContextEncoding contextualize(ag::Tape& tape, std::span<const ag::Var> utterance_vectors,
                                  std::span<const Speaker> speakers) const;

    ContextEncoding encode_context(ag::Tape& tape, const std::vector<std::vector<int>>& tokens,
                                   std::span<const Speaker> speakers) const;

private:
    struct Direction {
        Parameter* w = nullptr;
        Parameter* u = nullptr;
        Parameter* b = nullptr;
    };

    ag::Var run_direction(ag::Tape& tape, const Direction& dir, std::span<const int> tokens,
                          bool reverse) const;

    EncoderConfig config_;
    Parameter* embedding_ = nullptr;
    Direction forward_;
    Direction backward_;
    Parameter* role_ = nullptr;
    Parameter* wq_ = nullptr;
    Parameter* bq_ = nullptr;
    Parameter* wk_ = nullptr;
    Parameter* bk_ = nullptr;
    Parameter* wv_ = nullptr;
    Parameter* bv_ = nullptr;
    Parameter* wo_ = nullptr;
    Parameter* bo_ = nullptr;
    Parameter* norm_gain_ = nullptr;
    Parameter* norm_bias_ = nullptr;
};

/// Sinusoidal encoding of `position` with `dim` entries.
Vector sinusoidal_position(int position, int dim);

}  // namespace cfonet
