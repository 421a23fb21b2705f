// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfonet/encoder.hpp"

#include "cfonet/errors.hpp"
#include "cfonet/vocab.hpp"

#include <cmath>

namespace cfonet {

using Init = ParameterStore::Init;

Encoder::Encoder(const EncoderConfig& config, int vocab_size, ParameterStore& store) : config_(config) {
    if (config.embed_dim < 1 || config.hidden_dim < 1) throw ConfigError("encoder dims must be positive");
    if (config.n_heads < 1 || config.d_model() % config.n_heads != 0) {
        throw ConfigError("n_heads (" + std::to_string(config.n_heads) + ") must divide d_model (" +
                          std::to_string(config.d_model()) + ")");
    }
    if (vocab_size < 2) throw ConfigError("vocabulary must hold at least the padding and unknown tokens");
    const int e = config.embed_dim;
    const int h = config.hidden_dim;
    const int d = config.d_model();
    embedding_ = &store.add("encoder.embedding", vocab_size, e);
    forward_ = {&store.add("encoder.fwd.W", 4 * h, e), &store.add("encoder.fwd.U", 4 * h, h),
                &store.add("encoder.fwd.b", 4 * h, 1, Init::zero)};
    backward_ = {&store.add("encoder.bwd.W", 4 * h, e), &store.add("encoder.bwd.U", 4 * h, h),
                 &store.add("encoder.bwd.b", 4 * h, 1, Init::zero)};
    if (config.role_embedding) role_ = &store.add("encoder.role", 2, d);
    wq_ = &store.add("encoder.attn.Wq", d, d);
    bq_ = &store.add("encoder.attn.bq", d, 1, Init::zero);
    wk_ = &store.add("encoder.attn.Wk", d, d);
    bk_ = &store.add("encoder.attn.bk", d, 1, Init::zero);
    wv_ = &store.add("encoder.attn.Wv", d, d);
    bv_ = &store.add("encoder.attn.bv", d, 1, Init::zero);
    wo_ = &store.add("encoder.attn.Wo", d, d);
    bo_ = &store.add("encoder.attn.bo", d, 1, Init::zero);
    if (config.residual_norm) {
        norm_gain_ = &store.add("encoder.norm.gain", d, 1, Init::one);
        norm_bias_ = &store.add("encoder.norm.bias", d, 1, Init::zero);
    }
}

void Encoder::reset_padding_row() { embedding_->value.row(Vocab::kPad).setZero(); }

ag::Var Encoder::run_direction(ag::Tape& tape, const Direction& dir, std::span<const int> tokens,
                               bool reverse) const {
    const int h = config_.hidden_dim;
    ag::Var table = tape.param(*embedding_);
    ag::Var w = tape.param(*dir.w);
    ag::Var u = tape.param(*dir.u);
    ag::Var b = tape.param(*dir.b);
    ag::Var state = tape.constant(Matrix::Zero(2 * h, 1));
    const auto n = tokens.size();
    for (std::size_t i = 0; i < n; ++i) {
        const int id = tokens[reverse ? n - 1 - i : i];
        ag::Var x = ag::embedding_lookup(table, id, Vocab::kPad);
        state = ag::lstm_step(x, state, w, u, b);
    }
    return ag::slice_rows(state, 0, h);
}

ag::Var Encoder::encode_utterance(ag::Tape& tape, std::span<const int> tokens) const {
    std::size_t length = tokens.size();
    while (length > 0 && tokens[length - 1] == Vocab::kPad) --length;
    static constexpr int kPadOnly[] = {Vocab::kPad};
    std::span<const int> kept = length == 0 ? std::span<const int>(kPadOnly) : tokens.first(length);
    ag::Var fwd = run_direction(tape, forward_, kept, false);
    ag::Var bwd = run_direction(tape, backward_, kept, true);
    const ag::Var parts[] = {fwd, bwd};
    return ag::vcat(parts);
}

AttentionResult Encoder::multi_head_attention(ag::Tape& tape, ag::Var utterances) const {
    const Matrix& H = utterances.value();
    const int d = config_.d_model();
    if (H.rows() < 1) throw ShapeError("attention over an empty context");
    if (H.cols() != d) throw ShapeError("attention input width differs from d_model");
    const int heads = config_.n_heads;
    const int dh = d / heads;
    ag::Var q = ag::linear_rows(utterances, tape.param(*wq_), tape.param(*bq_));
    ag::Var k = ag::linear_rows(utterances, tape.param(*wk_), tape.param(*bk_));
    ag::Var v = ag::linear_rows(utterances, tape.param(*wv_), tape.param(*bv_));
    AttentionResult result;
    std::vector<ag::Var> outputs;
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));
    for (int i = 0; i < heads; ++i) {
        ag::Var qh = ag::slice_cols(q, i * dh, dh);
        ag::Var kh = ag::slice_cols(k, i * dh, dh);
        ag::Var vh = ag::slice_cols(v, i * dh, dh);
        ag::Var weights = ag::softmax_rows(ag::scale(ag::matmul(qh, ag::transpose(kh)), inv_sqrt));
        result.weights.push_back(weights.value());
        outputs.push_back(ag::matmul(weights, vh));
    }
    ag::Var joined = heads == 1 ? outputs.front() : ag::hcat(outputs);
    ag::Var out = ag::linear_rows(joined, tape.param(*wo_), tape.param(*bo_));
    if (config_.residual_norm) {
        out = ag::layer_norm_rows(ag::add(utterances, out), tape.param(*norm_gain_),
                                  tape.param(*norm_bias_));
    }
    result.output = out;
    return result;
}

ContextEncoding Encoder::contextualize(ag::Tape& tape, std::span<const ag::Var> utterance_vectors,
                                       std::span<const Speaker> speakers) const {
    if (utterance_vectors.empty()) throw ShapeError("context must hold at least one utterance");
    if (speakers.size() != utterance_vectors.size()) throw ShapeError("one speaker per utterance required");
    const int d = config_.d_model();
    std::vector<ag::Var> rows;
    rows.reserve(utterance_vectors.size());
    ag::Var role_table = role_ != nullptr ? tape.param(*role_) : ag::Var{};
    for (std::size_t i = 0; i < utterance_vectors.size(); ++i) {
        ag::Var row = utterance_vectors[i];
        if (role_ != nullptr) {
            const int role = speakers[i] == Speaker::persuader ? 0 : 1;
            row = ag::add(row, ag::embedding_lookup(role_table, role, -1));
        }
        if (config_.positional_encoding) {
            row = ag::add(row, tape.constant(sinusoidal_position(static_cast<int>(i), d)));
        }
        rows.push_back(row);
    }
    ContextEncoding enc;
    enc.utterances = ag::stack_rows(rows);
    AttentionResult attn = multi_head_attention(tape, enc.utterances);
    enc.contextual = attn.output;
    enc.attention = std::move(attn.weights);
    return enc;
}

ContextEncoding Encoder::encode_context(ag::Tape& tape, const std::vector<std::vector<int>>& tokens,
                                        std::span<const Speaker> speakers) const {
    std::vector<ag::Var> vectors;
    vectors.reserve(tokens.size());
    for (const auto& t : tokens) vectors.push_back(encode_utterance(tape, t));
    return contextualize(tape, vectors, speakers);
}

Vector sinusoidal_position(int position, int dim) {
    Vector out(dim);
    for (int i = 0; i < dim; ++i) {
        const double rate = std::pow(10000.0, -static_cast<double>(2 * (i / 2)) / dim);
        out(i) = (i % 2 == 0) ? std::sin(position * rate) : std::cos(position * rate);
    }
    return out;
}

}  // namespace cfonet
