// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cfonet/autograd.hpp"

namespace cfonet {

inline constexpr double kLogFloor = 1e-12;

/// -log(max(probs[gold], 1e-12)).
double loss_strategy(const Vector& probs, int gold);
double loss_emotion(const Vector& probs, int gold);
double joint_loss(double strategy_loss, double emotion_loss, double beta1, double beta2);

ag::Var loss_strategy(ag::Var probs, int gold);
ag::Var loss_emotion(ag::Var probs, int gold);

}  // namespace cfonet
