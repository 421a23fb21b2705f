// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oracle {

Mat to_mat(const cfonet::Matrix& m) {
    Mat out(static_cast<std::size_t>(m.rows()), Vec(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
    return out;
}

Vec to_vec(const cfonet::Matrix& m) {
    Vec out;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
    return out;
}

double max_abs_diff(const Mat& a, const Mat& b) {
    if (a.size() != b.size()) return INFINITY;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, max_abs_diff(a[i], b[i]));
    return worst;
}

double max_abs_diff(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) return INFINITY;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

Vec matvec(const Mat& m, const Vec& x) {
    Vec out(m.size(), 0.0);
    for (std::size_t r = 0; r < m.size(); ++r)
        for (std::size_t c = 0; c < x.size(); ++c) out[r] += m[r][c] * x[c];
    return out;
}

Mat matmul(const Mat& a, const Mat& b) {
    Mat out(a.size(), Vec(b.empty() ? 0 : b[0].size(), 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            for (std::size_t j = 0; j < b[0].size(); ++j) out[i][j] += a[i][k] * b[k][j];
    return out;
}

Mat transpose(const Mat& a) {
    Mat out(a.empty() ? 0 : a[0].size(), Vec(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[0].size(); ++j) out[j][i] = a[i][j];
    return out;
}

Vec softmax(const Vec& x) {
    double top = -INFINITY;
    for (double v : x) top = std::max(top, v);
    Vec out(x.size());
    double z = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) z += (out[i] = std::exp(x[i] - top));
    for (double& v : out) v /= z;
    return out;
}

Vec mean_rows(const Mat& m) {
    Vec out(m[0].size(), 0.0);
    for (const auto& row : m)
        for (std::size_t j = 0; j < row.size(); ++j) out[j] += row[j];
    for (double& v : out) v /= static_cast<double>(m.size());
    return out;
}

Vec mlp(const Vec& x, const Mat& w1, const Vec& b1, const Mat& w2, const Vec& b2, bool tanh_out) {
    Vec h = matvec(w1, x);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = std::tanh(h[i] + b1[i]);
    Vec y = matvec(w2, h);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] += b2[i];
        if (tanh_out) y[i] = std::tanh(y[i]);
    }
    return y;
}

Vec lstm(const std::vector<Vec>& inputs, const Mat& w, const Mat& u, const Vec& b, int hidden) {
    const auto n = static_cast<std::size_t>(hidden);
    Vec h(n, 0.0), c(n, 0.0);
    auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
    for (const Vec& x : inputs) {
        Vec z = matvec(w, x);
        const Vec r = matvec(u, h);
        for (std::size_t i = 0; i < z.size(); ++i) z[i] += r[i] + b[i];
        Vec next_h(n), next_c(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double ig = sig(z[j]);
            const double fg = sig(z[n + j]);
            const double gg = std::tanh(z[2 * n + j]);
            const double og = sig(z[3 * n + j]);
            next_c[j] = fg * c[j] + ig * gg;
            next_h[j] = og * std::tanh(next_c[j]);
        }
        h = next_h;
        c = next_c;
    }
    return h;
}

namespace {

Mat project_rows(const Mat& x, const Mat& w, const Vec& b) {
    Mat out;
    for (const Vec& row : x) {
        Vec y = matvec(w, row);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += b[i];
        out.push_back(y);
    }
    return out;
}

}  // namespace

Attention attention(const Mat& h, const Mat& wq, const Vec& bq, const Mat& wk, const Vec& bk, const Mat& wv,
                    const Vec& bv, const Mat& wo, const Vec& bo, int heads) {
    const Mat q = project_rows(h, wq, bq);
    const Mat k = project_rows(h, wk, bk);
    const Mat v = project_rows(h, wv, bv);
    const std::size_t n = h.size();
    const std::size_t d = q[0].size();
    const std::size_t dh = d / static_cast<std::size_t>(heads);
    Attention out;
    Mat joined(n, Vec(d, 0.0));
    for (int head = 0; head < heads; ++head) {
        const std::size_t off = static_cast<std::size_t>(head) * dh;
        Mat weights(n, Vec(n));
        for (std::size_t i = 0; i < n; ++i) {
            Vec scores(n);
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (std::size_t t = 0; t < dh; ++t) s += q[i][off + t] * k[j][off + t];
                scores[j] = s / std::sqrt(static_cast<double>(dh));
            }
            weights[i] = softmax(scores);
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t t = 0; t < dh; ++t) joined[i][off + t] += weights[i][j] * v[j][off + t];
        }
        out.weights.push_back(weights);
    }
    out.output = project_rows(joined, wo, bo);
    return out;
}

CoAttention co_attention(const Mat& c, const Mat& s) {
    const std::size_t n = c.size(), l = s.size(), d = c[0].size();
    Mat a(n, Vec(l));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < l; ++j) {
            double dot = 0.0;
            for (std::size_t t = 0; t < d; ++t) dot += c[i][t] * s[j][t];
            a[i][j] = dot;
        }
    CoAttention out;
    out.row_weights.assign(n, Vec(l));
    out.col_weights.assign(n, Vec(l));
    for (std::size_t i = 0; i < n; ++i) out.row_weights[i] = softmax(a[i]);
    for (std::size_t j = 0; j < l; ++j) {
        Vec column(n);
        for (std::size_t i = 0; i < n; ++i) column[i] = a[i][j];
        const Vec w = softmax(column);
        for (std::size_t i = 0; i < n; ++i) out.col_weights[i][j] = w[i];
    }
    out.attended_context.assign(n, Vec(d, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < l; ++j)
            for (std::size_t t = 0; t < d; ++t) out.attended_context[i][t] += out.row_weights[i][j] * s[j][t];
    out.attended_strategies.assign(l, Vec(d, 0.0));
    for (std::size_t j = 0; j < l; ++j)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t t = 0; t < d; ++t) out.attended_strategies[j][t] += out.col_weights[i][j] * c[i][t];
    return out;
}

std::vector<int> top_k_sorted(const Vec& scores, int k) {
    std::vector<int> idx(scores.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return scores[a] > scores[b]; });
    idx.resize(static_cast<std::size_t>(k));
    return idx;
}

double gamma_entry(double gamma, bool selected, int emotion, double confidence, double mu, double lo, double hi) {
    if (!selected || emotion == 1) return gamma;
    const double zeta = 1.0 - confidence;
    const double delta = mu * std::exp(-zeta);
    double next = emotion == 0 ? gamma + delta : gamma - delta;
    if (next < lo) next = lo;
    if (next > hi) next = hi;
    return next;
}

double cross_entropy(const Vec& p, int gold) {
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double target = static_cast<int>(i) == gold ? 1.0 : 0.0;
        total -= target * std::log(std::max(p[i], 1e-12));
    }
    return total;
}

GradCheck grad_check(cfonet::ParameterStore& store, const std::function<cfonet::ag::Var(cfonet::ag::Tape&)>& loss,
                     const std::vector<std::string>& names, double step, double floor) {
    std::vector<cfonet::Parameter*> targets;
    store.for_each([&](cfonet::Parameter& p) {
        if (names.empty() || std::find(names.begin(), names.end(), p.name) != names.end()) targets.push_back(&p);
    });

    store.zero_grad();
    {
        cfonet::ag::Tape tape;
        tape.backward(loss(tape));
    }
    auto evaluate = [&]() {
        cfonet::ag::Tape tape(false);
        return loss(tape).value()(0, 0);
    };

    GradCheck result;
    for (cfonet::Parameter* p : targets) {
        const cfonet::Matrix analytic = p->grad;
        for (Eigen::Index i = 0; i < p->value.size(); ++i) {
            double& x = p->value.data()[i];
            const double saved = x;
            x = saved + step;
            const double up = evaluate();
            x = saved - step;
            const double down = evaluate();
            x = saved;
            const double numeric = (up - down) / (2.0 * step);
            const double a = analytic.data()[i];
            const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
            ++result.checked;
            if (rel > result.max_rel_error) {
                result.max_rel_error = rel;
                result.worst = p->name + "[" + std::to_string(i) + "] analytic=" + std::to_string(a) +
                               " numeric=" + std::to_string(numeric);
            }
        }
    }
    return result;
}

}  // namespace oracle
