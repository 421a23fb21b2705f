// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cfonet/encoder.hpp>
#include <cfonet/errors.hpp>

using namespace cfonet;

namespace {

constexpr int kVocab = 12;

struct Rig {
    ParameterStore store;
    EncoderConfig config;
    std::unique_ptr<Encoder> encoder;

    explicit Rig(std::uint64_t seed, int heads = 2, bool role = true) {
        config.embed_dim = 5;
        config.hidden_dim = 4;
        config.n_heads = heads;
        config.role_embedding = role;
        encoder = std::make_unique<Encoder>(config, kVocab, store);
        fixture::randomize(store, seed);
        encoder->reset_padding_row();
    }

    oracle::Mat m(const std::string& name) { return oracle::to_mat(store.at(name).value); }
    oracle::Vec v(const std::string& name) { return oracle::to_vec(store.at(name).value); }

    oracle::Vec utterance(const std::vector<int>& tokens) {
        const oracle::Mat table = m("encoder.embedding");
        std::vector<oracle::Vec> xs;
        for (int t : tokens) xs.push_back(table[static_cast<std::size_t>(t)]);
        oracle::Vec out = oracle::lstm(xs, m("encoder.fwd.W"), m("encoder.fwd.U"), v("encoder.fwd.b"), 4);
        std::reverse(xs.begin(), xs.end());
        const oracle::Vec bwd = oracle::lstm(xs, m("encoder.bwd.W"), m("encoder.bwd.U"), v("encoder.bwd.b"), 4);
        out.insert(out.end(), bwd.begin(), bwd.end());
        return out;
    }

    oracle::Attention attention(const oracle::Mat& h) {
        return oracle::attention(h, m("encoder.attn.Wq"), v("encoder.attn.bq"), m("encoder.attn.Wk"),
                                 v("encoder.attn.bk"), m("encoder.attn.Wv"), v("encoder.attn.bv"),
                                 m("encoder.attn.Wo"), v("encoder.attn.bo"), config.n_heads);
    }
};

Matrix random_rows(int n, int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Matrix m(n, d);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = unit(rng);
    return m;
}

}  // namespace

TEST_CASE("single-token utterance is one step in each direction", "[encoder]") {
    Rig rig(1);
    ag::Tape tape(false);
    const std::vector<int> tokens = {4};
    const auto got = oracle::to_vec(rig.encoder->encode_utterance(tape, tokens).value());
    CHECK(got.size() == 8);
    CHECK(oracle::max_abs_diff(got, rig.utterance(tokens)) < 1e-12);
}

TEST_CASE("zero parameters give the zero vector", "[encoder]") {
    Rig rig(2);
    rig.store.set_zero();
    ag::Tape tape(false);
    const std::vector<int> tokens = {3, 7, 2};
    const Matrix out = rig.encoder->encode_utterance(tape, tokens).value();
    CHECK(out.isZero(0.0));
}

TEST_CASE("three-token utterance matches the recurrence oracle", "[encoder]") {
    for (std::uint64_t seed : {3u, 4u, 5u}) {
        Rig rig(seed);
        ag::Tape tape(false);
        const std::vector<int> tokens = {2, 9, 5};
        const auto got = oracle::to_vec(rig.encoder->encode_utterance(tape, tokens).value());
        CHECK(oracle::max_abs_diff(got, rig.utterance(tokens)) < 1e-6);
    }
}

TEST_CASE("trailing padding does not change the encoding", "[encoder]") {
    Rig rig(6);
    ag::Tape tape(false);
    const std::vector<int> plain = {5, 3, 8};
    const std::vector<int> padded = {5, 3, 8, Vocab::kPad, Vocab::kPad};
    const Matrix a = rig.encoder->encode_utterance(tape, plain).value();
    const Matrix b = rig.encoder->encode_utterance(tape, padded).value();
    CHECK(a == b);
    const std::vector<int> empty;
    const std::vector<int> pad = {Vocab::kPad};
    CHECK(rig.encoder->encode_utterance(tape, empty).value() == rig.encoder->encode_utterance(tape, pad).value());
}

TEST_CASE("out-of-range token ids are rejected", "[encoder]") {
    Rig rig(7);
    ag::Tape tape(false);
    const std::vector<int> bad = {2, kVocab};
    CHECK_THROWS_AS(rig.encoder->encode_utterance(tape, bad), DataError);
    const std::vector<int> negative = {-1};
    CHECK_THROWS_AS(rig.encoder->encode_utterance(tape, negative), DataError);
}

TEST_CASE("attention over one row is the projected value", "[encoder]") {
    Rig rig(8);
    ag::Tape tape(false);
    const Matrix h = random_rows(1, 8, 1);
    const auto result = rig.encoder->multi_head_attention(tape, tape.constant(h));
    for (const Matrix& w : result.weights) CHECK(w(0, 0) == 1.0);
    const auto hv = oracle::to_mat(h);
    oracle::Vec value = oracle::matvec(rig.m("encoder.attn.Wv"), hv[0]);
    const auto bv = rig.v("encoder.attn.bv");
    for (std::size_t i = 0; i < value.size(); ++i) value[i] += bv[i];
    oracle::Vec out = oracle::matvec(rig.m("encoder.attn.Wo"), value);
    const auto bo = rig.v("encoder.attn.bo");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += bo[i];
    CHECK(oracle::max_abs_diff(oracle::to_vec(result.output.value().transpose()), out) < 1e-12);
}

TEST_CASE("identical rows attend uniformly", "[encoder]") {
    Rig rig(9);
    ag::Tape tape(false);
    Matrix h(4, 8);
    for (int i = 0; i < 4; ++i) h.row(i) = random_rows(1, 8, 2).row(0);
    const auto result = rig.encoder->multi_head_attention(tape, tape.constant(h));
    for (const Matrix& w : result.weights) CHECK((w.array() - 0.25).abs().maxCoeff() < 1e-12);
}

TEST_CASE("multi-head attention matches the per-head loop oracle", "[encoder]") {
    for (int heads : {1, 2, 4}) {
        Rig rig(10 + static_cast<std::uint64_t>(heads), heads);
        ag::Tape tape(false);
        const Matrix h = random_rows(3, 8, 3);
        const auto result = rig.encoder->multi_head_attention(tape, tape.constant(h));
        const auto expected = rig.attention(oracle::to_mat(h));
        CHECK(oracle::max_abs_diff(oracle::to_mat(result.output.value()), expected.output) < 1e-6);
        REQUIRE(result.weights.size() == static_cast<std::size_t>(heads));
        for (int i = 0; i < heads; ++i) {
            CHECK(oracle::max_abs_diff(oracle::to_mat(result.weights[i]), expected.weights[i]) < 1e-9);
            CHECK((result.weights[i].rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
            CHECK(result.weights[i].minCoeff() >= 0.0);
        }
    }
}

TEST_CASE("n_heads must divide d_model", "[encoder]") {
    ParameterStore store;
    EncoderConfig config;
    config.hidden_dim = 3;
    config.n_heads = 4;
    CHECK_THROWS_AS(Encoder(config, kVocab, store), ConfigError);
}

TEST_CASE("one-utterance context is the projection of its own value", "[encoder]") {
    Rig rig(12, 2, false);
    ag::Tape tape(false);
    const std::vector<std::vector<int>> tokens = {{4, 5}};
    const Speaker speakers[] = {Speaker::persuader};
    const auto enc = rig.encoder->encode_context(tape, tokens, speakers);
    const auto expected = rig.attention({rig.utterance(tokens[0])});
    CHECK(oracle::max_abs_diff(oracle::to_mat(enc.contextual.value()), expected.output) < 1e-9);
}

TEST_CASE("context encoding is permutation-equivariant without positions", "[encoder]") {
    Rig rig(13);
    ag::Tape tape(false);
    const std::vector<std::vector<int>> tokens = {{2, 3}, {4}, {5, 6, 7}};
    const std::vector<Speaker> speakers = {Speaker::persuader, Speaker::persuadee, Speaker::persuader};
    const auto a = rig.encoder->encode_context(tape, tokens, speakers);
    const std::vector<std::vector<int>> swapped_tokens = {tokens[2], tokens[1], tokens[0]};
    const std::vector<Speaker> swapped_speakers = {speakers[2], speakers[1], speakers[0]};
    const auto b = rig.encoder->encode_context(tape, swapped_tokens, swapped_speakers);
    const Matrix& ca = a.contextual.value();
    const Matrix& cb = b.contextual.value();
    CHECK((ca.row(0) - cb.row(2)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((ca.row(1) - cb.row(1)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((ca.row(2) - cb.row(0)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("positional encoding breaks the equivariance", "[encoder]") {
    ParameterStore store;
    EncoderConfig config;
    config.embed_dim = 5;
    config.hidden_dim = 4;
    config.n_heads = 2;
    config.positional_encoding = true;
    Encoder encoder(config, kVocab, store);
    fixture::randomize(store, 14);
    ag::Tape tape(false);
    const std::vector<std::vector<int>> tokens = {{2, 3}, {5, 6, 7}};
    const std::vector<std::vector<int>> swapped = {{5, 6, 7}, {2, 3}};
    const Speaker speakers[] = {Speaker::persuader, Speaker::persuader};
    const Matrix a = encoder.encode_context(tape, tokens, speakers).contextual.value();
    const Matrix b = encoder.encode_context(tape, swapped, speakers).contextual.value();
    CHECK((a.row(0) - b.row(1)).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("four-utterance context composes the two oracles", "[encoder]") {
    Rig rig(15);
    ag::Tape tape(false);
    const std::vector<std::vector<int>> tokens = {{2, 3, 4}, {5}, {6, 7}, {8, 9, 10, 11}};
    const std::vector<Speaker> speakers = {Speaker::persuader, Speaker::persuadee, Speaker::persuader,
                                           Speaker::persuadee};
    const auto enc = rig.encoder->encode_context(tape, tokens, speakers);
    const oracle::Mat role = rig.m("encoder.role");
    oracle::Mat h;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        oracle::Vec row = rig.utterance(tokens[i]);
        const auto& r = role[speakers[i] == Speaker::persuader ? 0 : 1];
        for (std::size_t j = 0; j < row.size(); ++j) row[j] += r[j];
        h.push_back(row);
    }
    CHECK(oracle::max_abs_diff(oracle::to_mat(enc.utterances.value()), h) < 1e-9);
    CHECK(oracle::max_abs_diff(oracle::to_mat(enc.contextual.value()), rig.attention(h).output) < 1e-6);
    CHECK(enc.contextual.value().allFinite());
    CHECK(enc.contextual.value().rows() == 4);
}

TEST_CASE("encoder attention gradients match finite differences", "[encoder][grad]") {
    Rig rig(16);
    const std::vector<std::vector<int>> tokens = {{2, 3}, {4, 5, 6}, {7}};
    const Speaker speakers[] = {Speaker::persuader, Speaker::persuadee, Speaker::persuader};
    const Matrix weights = random_rows(3, 8, 4);
    auto loss = [&](ag::Tape& tape) {
        const auto enc = rig.encoder->encode_context(tape, tokens, speakers);
        return ag::sum_all(ag::cwise_mul(enc.contextual, tape.constant(weights)));
    };
    const auto result = oracle::grad_check(rig.store, loss);
    INFO(result.worst);
    CHECK(result.max_rel_error < 1e-3);
    CHECK(result.checked == rig.store.scalar_count());
    // The padding row never receives gradient.
    ag::Tape tape;
    rig.store.zero_grad();
    tape.backward(loss(tape));
    CHECK(rig.store.at("encoder.embedding").grad.row(Vocab::kPad).isZero(0.0));
}
