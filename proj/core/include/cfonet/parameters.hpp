// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace cfonet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A named trainable tensor with its gradient accumulator and Adam moments.
struct Parameter {
    std::string name;
    Matrix value;
    Matrix grad;
    Matrix first_moment;
    Matrix second_moment;

    void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

/// Owns every parameter of a model in registration order. Addresses are
/// stable for the store's lifetime, so modules keep raw `Parameter*`.
class ParameterStore {
public:
    ParameterStore() = default;
    ParameterStore(const ParameterStore&) = delete;
    ParameterStore& operator=(const ParameterStore&) = delete;
    ParameterStore(ParameterStore&&) = default;
    ParameterStore& operator=(ParameterStore&&) = default;

    enum class Init { glorot, zero, one };

    Parameter& add(std::string name, Eigen::Index rows, Eigen::Index cols,
                   Init init = Init::glorot);

    Parameter* find(const std::string& name);
    const Parameter* find(const std::string& name) const;
    Parameter& at(const std::string& name);

    std::size_t size() const { return params_.size(); }
    std::size_t scalar_count() const;

    template <class Fn>
    void for_each(Fn&& fn) {
        for (auto& p : params_) fn(*p);
    }
    template <class Fn>
    void for_each(Fn&& fn) const {
        for (const auto& p : params_) fn(static_cast<const Parameter&>(*p));
    }

    void zero_grad();
    void set_zero();
    /// Re-draws every parameter from its registered initializer.
    void initialize(std::uint64_t seed);

    /// Scales all gradients so their global L2 norm is at most `max_norm`.
    /// Returns the norm before clipping.
    double clip_grad_norm(double max_norm);

    std::vector<Matrix> snapshot() const;
    void restore(const std::vector<Matrix>& values);

private:
    std::vector<std::unique_ptr<Parameter>> params_;
    std::vector<Init> inits_;
};

struct AdamOptions {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

class Adam {
public:
    explicit Adam(AdamOptions options) : options_(options) {}

    void step(ParameterStore& store);
    std::int64_t steps() const { return steps_; }
    const AdamOptions& options() const { return options_; }

private:
    AdamOptions options_;
    std::int64_t steps_ = 0;
};

}  // namespace cfonet
