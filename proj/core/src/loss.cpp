// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfonet/loss.hpp"

#include "cfonet/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cfonet {

namespace {

double cross_entropy(const Vector& probs, int gold) {
    if (gold < 0 || gold >= probs.size()) throw DataError("gold label outside the class range");
    return -std::log(std::max(probs(gold), kLogFloor));
}

}  // namespace

double loss_strategy(const Vector& probs, int gold) { return cross_entropy(probs, gold); }
double loss_emotion(const Vector& probs, int gold) { return cross_entropy(probs, gold); }

double joint_loss(double strategy_loss, double emotion_loss, double beta1, double beta2) {
    return beta1 * strategy_loss + beta2 * emotion_loss;
}

ag::Var loss_strategy(ag::Var probs, int gold) {
    if (gold < 0 || gold >= probs.value().rows()) throw DataError("gold strategy outside the class range");
    return ag::neg_log_prob(probs, gold, kLogFloor);
}

ag::Var loss_emotion(ag::Var probs, int gold) {
    if (gold < 0 || gold >= probs.value().rows()) throw DataError("gold emotion outside the class range");
    return ag::neg_log_prob(probs, gold, kLogFloor);
}

}  // namespace cfonet
