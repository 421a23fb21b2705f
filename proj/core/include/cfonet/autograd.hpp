// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0
//
// Minimal reverse-mode automatic differentiation over dense Eigen matrices.
//
// A Tape records every intermediate value of one forward computation together
// with a closure that propagates the output gradient to the inputs. Column
// vectors are n x 1 matrices; sequences of vectors are stacked as rows.
// Tapes are single-threaded; independent tapes may be used concurrently as
// long as they do not share parameters being written.

#pragma once

#include "cfonet/parameters.hpp"

#include <functional>
#include <span>
#include <vector>

namespace cfonet::ag {

class Tape;

/// Handle to a value recorded on a tape.
struct Var {
    Tape* tape = nullptr;
    int id = -1;

    const Matrix& value() const;
    bool valid() const { return tape != nullptr && id >= 0; }
};

class Tape {
public:
    using Backward = std::function<void(Tape&, const Matrix&)>;

    /// With `record_gradients == false` the tape only evaluates values; no
    /// closures are stored and backward() is unavailable.
    explicit Tape(bool record_gradients = true) : recording_(record_gradients) {}
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    Var constant(Matrix value);
    /// Leaf for a trainable parameter. Repeated calls return the same node.
    Var param(Parameter& p);

    /// Records a computed node. `backward` receives the node's gradient.
    Var push(Matrix value, bool requires_grad, Backward backward);

    /// Seeds d(root)/d(root) = 1 for a 1x1 root and accumulates into
    /// every parameter reached through the graph.
    void backward(Var root);

    const Matrix& value(int id) const { return nodes_[id].value; }
    const Matrix& grad(int id) const { return nodes_[id].grad; }
    bool requires_grad(int id) const { return nodes_[id].requires_grad; }
    bool recording() const { return recording_; }
    std::size_t size() const { return nodes_.size(); }

    /// Adds `g` into node `id`'s gradient; no-op for constants.
    void accumulate(int id, const Matrix& g);
    /// Mutable gradient buffer of node `id`, zero-initialized on first use.
    Matrix& grad_buffer(int id);

private:
    struct Node {
        Matrix value;
        Matrix grad;
        bool requires_grad = false;
        Backward backward;
        Parameter* param = nullptr;
    };

    std::vector<Node> nodes_;
    std::vector<std::pair<Parameter*, int>> param_nodes_;
    bool recording_;
};

// Elementwise and linear-algebra ops. All inputs must live on the same tape.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var cwise_mul(Var a, Var b);
Var scale(Var a, double factor);
Var matmul(Var a, Var b);
Var transpose(Var a);
/// W x + b with `b` (n x 1) broadcast over the columns of `x`.
Var affine(Var w, Var x, Var b);
/// X W^T + 1 b^T: applies a linear layer to every row of X.
Var linear_rows(Var x, Var w, Var b);

Var tanh(Var a);
Var sigmoid(Var a);

/// Softmax of a column vector.
Var softmax(Var a);
Var softmax_rows(Var a);
Var softmax_cols(Var a);

/// Column vector holding the mean of X's rows.
Var mean_rows(Var x);
/// Sum of all entries as a 1x1 value.
Var sum_all(Var x);
Var sum(std::span<const Var> terms);

Var vcat(std::span<const Var> parts);
Var hcat(std::span<const Var> parts);
/// Stacks column vectors as the rows of a matrix.
Var stack_rows(std::span<const Var> columns);
Var slice_rows(Var x, Eigen::Index begin, Eigen::Index count);
Var slice_cols(Var x, Eigen::Index begin, Eigen::Index count);

/// Multiplies row i of X by the constant weights(i).
Var scale_rows(Var x, const Vector& weights);

/// Row i of S kept when mask(i) == 1, zeroed otherwise. The mask is a
/// constant with respect to S. When `straight_through` is valid, the mask's
/// upstream gradient (d loss / d mask_i = <G_i, S_i>) is routed to it as if
/// the hard mask were the identity of `straight_through`.
Var mask_rows(Var s, const Vector& mask, Var straight_through = {});

/// Elementwise maximum across equally shaped inputs; ties go to the earliest.
Var max_elementwise(std::span<const Var> parts);

/// Row `index` of the embedding table as a column vector. Rows listed in
/// `frozen_row` (use -1 for none) receive no gradient.
Var embedding_lookup(Var table, int index, int frozen_row);

/// One fused LSTM step. `state` stacks [h; c] (2h x 1); W is 4h x in,
/// U is 4h x h, b is 4h x 1 with gate order (input, forget, cell, output).
/// Returns the next [h; c].
Var lstm_step(Var x, Var state, Var w, Var u, Var b);

/// Row-wise layer normalization with learned gain and bias (d x 1 each).
Var layer_norm_rows(Var x, Var gain, Var bias, double epsilon = 1e-5);

/// -log(max(p(index), floor)) as a 1x1 value.
Var neg_log_prob(Var p, int index, double floor);

}  // namespace cfonet::ag
