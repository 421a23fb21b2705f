// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfonet/layers.hpp"

namespace cfonet {

using Init = ParameterStore::Init;

Mlp Mlp::create(ParameterStore& store, const std::string& prefix, int in, int hidden, int out) {
    Mlp m;
    m.w1 = &store.add(prefix + ".w1", hidden, in);
    m.b1 = &store.add(prefix + ".b1", hidden, 1, Init::zero);
    m.w2 = &store.add(prefix + ".w2", out, hidden);
    m.b2 = &store.add(prefix + ".b2", out, 1, Init::zero);
    return m;
}

ag::Var Mlp::forward(ag::Tape& tape, ag::Var x, bool tanh_output) const {
    ag::Var h = ag::tanh(ag::affine(tape.param(*w1), x, tape.param(*b1)));
    ag::Var y = ag::affine(tape.param(*w2), h, tape.param(*b2));
    return tanh_output ? ag::tanh(y) : y;
}

SoftmaxLayer SoftmaxLayer::create(ParameterStore& store, const std::string& prefix, int in, int out) {
    SoftmaxLayer s;
    s.w = &store.add(prefix + ".W", out, in);
    s.b = &store.add(prefix + ".b", out, 1, Init::zero);
    return s;
}

ag::Var SoftmaxLayer::forward(ag::Tape& tape, ag::Var g) const {
    return ag::softmax(ag::affine(tape.param(*w), g, tape.param(*b)));
}

}  // namespace cfonet
