// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfonet/parameters.hpp"

#include "cfonet/errors.hpp"

#include <cmath>

namespace cfonet {

Parameter& ParameterStore::add(std::string name, Eigen::Index rows, Eigen::Index cols,
                               Init init) {
    if (find(name) != nullptr) {
        throw ConfigError("duplicate parameter name '" + name + "'");
    }
    auto p = std::make_unique<Parameter>();
    p->name = std::move(name);
    p->value = Matrix::Zero(rows, cols);
    p->grad = Matrix::Zero(rows, cols);
    p->first_moment = Matrix::Zero(rows, cols);
    p->second_moment = Matrix::Zero(rows, cols);
    params_.push_back(std::move(p));
    inits_.push_back(init);
    return *params_.back();
}

Parameter* ParameterStore::find(const std::string& name) {
    for (auto& p : params_) {
        if (p->name == name) return p.get();
    }
    return nullptr;
}

const Parameter* ParameterStore::find(const std::string& name) const {
    for (const auto& p : params_) {
        if (p->name == name) return p.get();
    }
    return nullptr;
}

Parameter& ParameterStore::at(const std::string& name) {
    Parameter* p = find(name);
    if (p == nullptr) throw ConfigError("unknown parameter '" + name + "'");
    return *p;
}

std::size_t ParameterStore::scalar_count() const {
    std::size_t n = 0;
    for (const auto& p : params_) n += static_cast<std::size_t>(p->value.size());
    return n;
}

void ParameterStore::zero_grad() {
    for (auto& p : params_) p->zero_grad();
}

void ParameterStore::set_zero() {
    for (auto& p : params_) p->value.setZero();
}

void ParameterStore::initialize(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < params_.size(); ++i) {
        Parameter& p = *params_[i];
        p.first_moment.setZero();
        p.second_moment.setZero();
        p.grad.setZero();
        if (inits_[i] == Init::zero) {
            p.value.setZero();
            continue;
        }
        if (inits_[i] == Init::one) {
            p.value.setOnes();
            continue;
        }
        const double fan = static_cast<double>(p.value.rows() + p.value.cols());
        const double limit = std::sqrt(6.0 / fan);
        std::uniform_real_distribution<double> dist(-limit, limit);
        for (Eigen::Index c = 0; c < p.value.cols(); ++c) {
            for (Eigen::Index r = 0; r < p.value.rows(); ++r) p.value(r, c) = dist(rng);
        }
    }
}

double ParameterStore::clip_grad_norm(double max_norm) {
    double squared = 0.0;
    for (const auto& p : params_) squared += p->grad.squaredNorm();
    const double norm = std::sqrt(squared);
    if (norm > max_norm && norm > 0.0) {
        const double factor = max_norm / norm;
        for (auto& p : params_) p->grad *= factor;
    }
    return norm;
}

std::vector<Matrix> ParameterStore::snapshot() const {
    std::vector<Matrix> out;
    out.reserve(params_.size());
    for (const auto& p : params_) out.push_back(p->value);
    return out;
}

void ParameterStore::restore(const std::vector<Matrix>& values) {
    if (values.size() != params_.size()) {
        throw ShapeError("parameter snapshot has " + std::to_string(values.size()) +
                         " tensors, store has " + std::to_string(params_.size()));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].rows() != params_[i]->value.rows() ||
            values[i].cols() != params_[i]->value.cols()) {
            throw ShapeError("shape mismatch restoring '" + params_[i]->name + "'");
        }
        params_[i]->value = values[i];
    }
}

void Adam::step(ParameterStore& store) {
    ++steps_;
    const double t = static_cast<double>(steps_);
    const double correction1 = 1.0 - std::pow(options_.beta1, t);
    const double correction2 = 1.0 - std::pow(options_.beta2, t);
    store.for_each([&](Parameter& p) {
        p.first_moment = options_.beta1 * p.first_moment + (1.0 - options_.beta1) * p.grad;
        p.second_moment = options_.beta2 * p.second_moment +
                          (1.0 - options_.beta2) * p.grad.cwiseProduct(p.grad);
        p.value.array() -= options_.learning_rate * (p.first_moment.array() / correction1) /
                           ((p.second_moment.array() / correction2).sqrt() + options_.epsilon);
    });
}

}  // namespace cfonet
