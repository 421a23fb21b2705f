// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cfonet/autograd.hpp"

#include <string>

namespace cfonet {

/// Two-layer perceptron: tanh(W1 x + b1) followed by W2 h + b2, optionally
/// squashed by a final tanh. Every head in the model uses this shape.
struct Mlp {
    Parameter* w1 = nullptr;
    Parameter* b1 = nullptr;
    Parameter* w2 = nullptr;
    Parameter* b2 = nullptr;

    static Mlp create(ParameterStore& store, const std::string& prefix, int in, int hidden, int out);

    ag::Var forward(ag::Tape& tape, ag::Var x, bool tanh_output = false) const;

    int input_dim() const { return static_cast<int>(w1->value.cols()); }
    int output_dim() const { return static_cast<int>(w2->value.rows()); }
};

/// Output layer y = softmax(W g + b) with W of shape L x in.
struct SoftmaxLayer {
    Parameter* w = nullptr;
    Parameter* b = nullptr;

    static SoftmaxLayer create(ParameterStore& store, const std::string& prefix, int in, int out);

    ag::Var forward(ag::Tape& tape, ag::Var g) const;
};

}  // namespace cfonet
