// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfonet/autograd.hpp"

#include "cfonet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

namespace cfonet::ag {

const Matrix& Var::value() const { return tape->value(id); }

Var Tape::constant(Matrix value) { return push(std::move(value), false, nullptr); }

Var Tape::param(Parameter& p) {
    for (const auto& [ptr, id] : param_nodes_) {
        if (ptr == &p) return Var{this, id};
    }
    Var v = push(p.value, recording_, nullptr);
    nodes_[v.id].param = &p;
    param_nodes_.emplace_back(&p, v.id);
    return v;
}

Var Tape::push(Matrix value, bool requires_grad, Backward backward) {
    Node node;
    node.value = std::move(value);
    node.requires_grad = recording_ && requires_grad;
    if (node.requires_grad) node.backward = std::move(backward);
    nodes_.push_back(std::move(node));
    return Var{this, static_cast<int>(nodes_.size()) - 1};
}

void Tape::accumulate(int id, const Matrix& g) {
    Node& node = nodes_[id];
    if (!node.requires_grad) return;
    if (node.grad.size() == 0) {
        node.grad = g;
    } else {
        node.grad += g;
    }
}

Matrix& Tape::grad_buffer(int id) {
    Node& node = nodes_[id];
    if (node.grad.size() == 0) node.grad = Matrix::Zero(node.value.rows(), node.value.cols());
    return node.grad;
}

void Tape::backward(Var root) {
    if (!recording_) throw ContractError("backward() on a tape created without gradients");
    if (root.tape != this) throw ContractError("backward() root belongs to another tape");
    if (nodes_[root.id].value.size() != 1) throw ShapeError("backward() root must be 1x1");
    if (!nodes_[root.id].requires_grad) return;
    nodes_[root.id].grad = Matrix::Ones(1, 1);
    for (int i = root.id; i >= 0; --i) {
        Node& node = nodes_[i];
        if (!node.requires_grad || node.grad.size() == 0 || !node.backward) continue;
        node.backward(*this, node.grad);
    }
    for (const auto& [param, id] : param_nodes_) {
        const Matrix& g = nodes_[id].grad;
        if (g.size() != 0) param->grad += g;
    }
}

namespace {

Tape& tape_of(std::initializer_list<Var> vars) {
    Tape* tape = nullptr;
    for (const Var& v : vars) {
        if (!v.valid()) throw ContractError("operation on an invalid Var");
        if (tape == nullptr) {
            tape = v.tape;
        } else if (tape != v.tape) {
            throw ContractError("operation mixes Vars from different tapes");
        }
    }
    return *tape;
}

bool any_grad(Tape& t, std::initializer_list<Var> vars) {
    if (!t.recording()) return false;
    for (const Var& v : vars) {
        if (t.requires_grad(v.id)) return true;
    }
    return false;
}

Tape& tape_of(std::span<const Var> vars) {
    if (vars.empty()) throw ContractError("operation on an empty Var list");
    Tape* tape = vars.front().tape;
    for (const Var& v : vars) {
        if (!v.valid() || v.tape != tape) throw ContractError("invalid or mixed-tape Var list");
    }
    return *tape;
}

bool any_grad(Tape& t, std::span<const Var> vars) {
    if (!t.recording()) return false;
    return std::any_of(vars.begin(), vars.end(), [&](const Var& v) { return t.requires_grad(v.id); });
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
    }
}

Vector softmax_vector(const Eigen::Ref<const Vector>& x) {
    const double m = x.maxCoeff();
    Vector e = (x.array() - m).exp();
    return e / e.sum();
}

}  // namespace

Var add(Var a, Var b) {
    Tape& t = tape_of({a, b});
    require_same_shape(a.value(), b.value(), "add");
    const int ia = a.id, ib = b.id;
    return t.push(a.value() + b.value(), any_grad(t, {a, b}), [ia, ib](Tape& tp, const Matrix& g) {
        tp.accumulate(ia, g);
        tp.accumulate(ib, g);
    });
}

Var sub(Var a, Var b) {
    Tape& t = tape_of({a, b});
    require_same_shape(a.value(), b.value(), "sub");
    const int ia = a.id, ib = b.id;
    return t.push(a.value() - b.value(), any_grad(t, {a, b}), [ia, ib](Tape& tp, const Matrix& g) {
        tp.accumulate(ia, g);
        tp.accumulate(ib, -g);
    });
}

Var cwise_mul(Var a, Var b) {
    Tape& t = tape_of({a, b});
    require_same_shape(a.value(), b.value(), "cwise_mul");
    const int ia = a.id, ib = b.id;
    return t.push(a.value().cwiseProduct(b.value()), any_grad(t, {a, b}),
                  [ia, ib](Tape& tp, const Matrix& g) {
                      if (tp.requires_grad(ia)) tp.accumulate(ia, g.cwiseProduct(tp.value(ib)));
                      if (tp.requires_grad(ib)) tp.accumulate(ib, g.cwiseProduct(tp.value(ia)));
                  });
}

Var scale(Var a, double factor) {
    Tape& t = tape_of({a});
    const int ia = a.id;
    return t.push(a.value() * factor, any_grad(t, {a}),
                  [ia, factor](Tape& tp, const Matrix& g) { tp.accumulate(ia, g * factor); });
}

Var matmul(Var a, Var b) {
    Tape& t = tape_of({a, b});
    if (a.value().cols() != b.value().rows()) throw ShapeError("matmul: inner dimensions differ");
    const int ia = a.id, ib = b.id;
    return t.push(a.value() * b.value(), any_grad(t, {a, b}), [ia, ib](Tape& tp, const Matrix& g) {
        if (tp.requires_grad(ia)) tp.accumulate(ia, g * tp.value(ib).transpose());
        if (tp.requires_grad(ib)) tp.accumulate(ib, tp.value(ia).transpose() * g);
    });
}

Var transpose(Var a) {
    Tape& t = tape_of({a});
    const int ia = a.id;
    return t.push(a.value().transpose(), any_grad(t, {a}),
                  [ia](Tape& tp, const Matrix& g) { tp.accumulate(ia, g.transpose()); });
}

Var affine(Var w, Var x, Var b) {
    Tape& t = tape_of({w, x, b});
    const Matrix& W = w.value();
    const Matrix& X = x.value();
    const Matrix& B = b.value();
    if (W.cols() != X.rows() || B.rows() != W.rows() || B.cols() != 1) {
        throw ShapeError("affine: incompatible shapes");
    }
    Matrix out = W * X;
    out.colwise() += B.col(0);
    const int iw = w.id, ix = x.id, ib = b.id;
    return t.push(std::move(out), any_grad(t, {w, x, b}), [iw, ix, ib](Tape& tp, const Matrix& g) {
        if (tp.requires_grad(iw)) tp.accumulate(iw, g * tp.value(ix).transpose());
        if (tp.requires_grad(ix)) tp.accumulate(ix, tp.value(iw).transpose() * g);
        if (tp.requires_grad(ib)) tp.accumulate(ib, g.rowwise().sum());
    });
}

Var linear_rows(Var x, Var w, Var b) {
    Tape& t = tape_of({x, w, b});
    const Matrix& X = x.value();
    const Matrix& W = w.value();
    const Matrix& B = b.value();
    if (W.cols() != X.cols() || B.rows() != W.rows() || B.cols() != 1) {
        throw ShapeError("linear_rows: incompatible shapes");
    }
    Matrix out = X * W.transpose();
    out.rowwise() += B.col(0).transpose();
    const int ix = x.id, iw = w.id, ib = b.id;
    return t.push(std::move(out), any_grad(t, {x, w, b}), [ix, iw, ib](Tape& tp, const Matrix& g) {
        if (tp.requires_grad(ix)) tp.accumulate(ix, g * tp.value(iw));
        if (tp.requires_grad(iw)) tp.accumulate(iw, g.transpose() * tp.value(ix));
        if (tp.requires_grad(ib)) tp.accumulate(ib, g.colwise().sum().transpose());
    });
}

Var tanh(Var a) {
    Tape& t = tape_of({a});
    Matrix out = a.value().array().tanh().matrix();
    const int ia = a.id;
    const int io = static_cast<int>(t.size());
    return t.push(std::move(out), any_grad(t, {a}), [ia, io](Tape& tp, const Matrix& g) {
        const Matrix& y = tp.value(io);
        tp.accumulate(ia, (g.array() * (1.0 - y.array().square())).matrix());
    });
}

Var sigmoid(Var a) {
    Tape& t = tape_of({a});
    Matrix out = (1.0 / (1.0 + (-a.value().array()).exp())).matrix();
    const int ia = a.id;
    const int io = static_cast<int>(t.size());
    return t.push(std::move(out), any_grad(t, {a}), [ia, io](Tape& tp, const Matrix& g) {
        const Matrix& y = tp.value(io);
        tp.accumulate(ia, (g.array() * y.array() * (1.0 - y.array())).matrix());
    });
}

Var softmax(Var a) {
    Tape& t = tape_of({a});
    if (a.value().cols() != 1) throw ShapeError("softmax expects a column vector");
    Matrix out = softmax_vector(a.value().col(0));
    const int ia = a.id;
    const int io = static_cast<int>(t.size());
    return t.push(std::move(out), any_grad(t, {a}), [ia, io](Tape& tp, const Matrix& g) {
        const Matrix& y = tp.value(io);
        const double dot = (g.array() * y.array()).sum();
        tp.accumulate(ia, (y.array() * (g.array() - dot)).matrix());
    });
}

Var softmax_rows(Var a) {
    Tape& t = tape_of({a});
    const Matrix& x = a.value();
    Matrix out(x.rows(), x.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        out.row(r) = softmax_vector(x.row(r).transpose()).transpose();
    }
    const int ia = a.id;
    const int io = static_cast<int>(t.size());
    return t.push(std::move(out), any_grad(t, {a}), [ia, io](Tape& tp, const Matrix& g) {
        const Matrix& y = tp.value(io);
        Matrix dx(y.rows(), y.cols());
        for (Eigen::Index r = 0; r < y.rows(); ++r) {
            const double dot = g.row(r).dot(y.row(r));
            dx.row(r) = (y.row(r).array() * (g.row(r).array() - dot)).matrix();
        }
        tp.accumulate(ia, dx);
    });
}

Var softmax_cols(Var a) {
    Tape& t = tape_of({a});
    const Matrix& x = a.value();
    Matrix out(x.rows(), x.cols());
    for (Eigen::Index c = 0; c < x.cols(); ++c) out.col(c) = softmax_vector(x.col(c));
    const int ia = a.id;
    const int io = static_cast<int>(t.size());
    return t.push(std::move(out), any_grad(t, {a}), [ia, io](Tape& tp, const Matrix& g) {
        const Matrix& y = tp.value(io);
        Matrix dx(y.rows(), y.cols());
        for (Eigen::Index c = 0; c < y.cols(); ++c) {
            const double dot = g.col(c).dot(y.col(c));
            dx.col(c) = (y.col(c).array() * (g.col(c).array() - dot)).matrix();
        }
        tp.accumulate(ia, dx);
    });
}

Var mean_rows(Var x) {
    Tape& t = tape_of({x});
    const Matrix& X = x.value();
    if (X.rows() == 0) throw ShapeError("mean_rows of an empty matrix");
    Matrix out = X.colwise().mean().transpose();
    const int ix = x.id;
    const Eigen::Index n = X.rows();
    return t.push(std::move(out), any_grad(t, {x}), [ix, n](Tape& tp, const Matrix& g) {
        Matrix dx = g.transpose().replicate(n, 1) / static_cast<double>(n);
        tp.accumulate(ix, dx);
    });
}

Var sum_all(Var x) {
    Tape& t = tape_of({x});
    Matrix out(1, 1);
    out(0, 0) = x.value().sum();
    const int ix = x.id;
    const Eigen::Index r = x.value().rows(), c = x.value().cols();
    return t.push(std::move(out), any_grad(t, {x}), [ix, r, c](Tape& tp, const Matrix& g) {
        tp.accumulate(ix, Matrix::Constant(r, c, g(0, 0)));
    });
}

Var sum(std::span<const Var> terms) {
    Tape& t = tape_of(terms);
    Matrix out = terms.front().value();
    for (std::size_t i = 1; i < terms.size(); ++i) {
        require_same_shape(out, terms[i].value(), "sum");
        out += terms[i].value();
    }
    std::vector<int> ids;
    ids.reserve(terms.size());
    for (const Var& v : terms) ids.push_back(v.id);
    return t.push(std::move(out), any_grad(t, terms), [ids](Tape& tp, const Matrix& g) {
        for (int id : ids) tp.accumulate(id, g);
    });
}

Var vcat(std::span<const Var> parts) {
    Tape& t = tape_of(parts);
    const Eigen::Index cols = parts.front().value().cols();
    Eigen::Index rows = 0;
    for (const Var& v : parts) {
        if (v.value().cols() != cols) throw ShapeError("vcat: column counts differ");
        rows += v.value().rows();
    }
    Matrix out(rows, cols);
    std::vector<std::pair<int, Eigen::Index>> layout;
    Eigen::Index offset = 0;
    for (const Var& v : parts) {
        out.middleRows(offset, v.value().rows()) = v.value();
        layout.emplace_back(v.id, offset);
        offset += v.value().rows();
    }
    return t.push(std::move(out), any_grad(t, parts), [layout](Tape& tp, const Matrix& g) {
        for (const auto& [id, off] : layout) {
            if (tp.requires_grad(id)) tp.accumulate(id, g.middleRows(off, tp.value(id).rows()));
        }
    });
}

Var hcat(std::span<const Var> parts) {
    Tape& t = tape_of(parts);
    const Eigen::Index rows = parts.front().value().rows();
    Eigen::Index cols = 0;
    for (const Var& v : parts) {
        if (v.value().rows() != rows) throw ShapeError("hcat: row counts differ");
        cols += v.value().cols();
    }
    Matrix out(rows, cols);
    std::vector<std::pair<int, Eigen::Index>> layout;
    Eigen::Index offset = 0;
    for (const Var& v : parts) {
        out.middleCols(offset, v.value().cols()) = v.value();
        layout.emplace_back(v.id, offset);
        offset += v.value().cols();
    }
    return t.push(std::move(out), any_grad(t, parts), [layout](Tape& tp, const Matrix& g) {
        for (const auto& [id, off] : layout) {
            if (tp.requires_grad(id)) tp.accumulate(id, g.middleCols(off, tp.value(id).cols()));
        }
    });
}

Var stack_rows(std::span<const Var> columns) {
    Tape& t = tape_of(columns);
    const Eigen::Index d = columns.front().value().rows();
    Matrix out(static_cast<Eigen::Index>(columns.size()), d);
    std::vector<int> ids;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        const Matrix& v = columns[i].value();
        if (v.cols() != 1 || v.rows() != d) throw ShapeError("stack_rows expects equal column vectors");
        out.row(static_cast<Eigen::Index>(i)) = v.col(0).transpose();
        ids.push_back(columns[i].id);
    }
    return t.push(std::move(out), any_grad(t, columns), [ids](Tape& tp, const Matrix& g) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (tp.requires_grad(ids[i])) {
                tp.accumulate(ids[i], g.row(static_cast<Eigen::Index>(i)).transpose());
            }
        }
    });
}

Var slice_rows(Var x, Eigen::Index begin, Eigen::Index count) {
    Tape& t = tape_of({x});
    const Matrix& X = x.value();
    if (begin < 0 || count < 0 || begin + count > X.rows()) throw ShapeError("slice_rows out of range");
    const int ix = x.id;
    return t.push(X.middleRows(begin, count), any_grad(t, {x}),
                  [ix, begin, count](Tape& tp, const Matrix& g) {
                      tp.grad_buffer(ix).middleRows(begin, count) += g;
                  });
}

Var slice_cols(Var x, Eigen::Index begin, Eigen::Index count) {
    Tape& t = tape_of({x});
    const Matrix& X = x.value();
    if (begin < 0 || count < 0 || begin + count > X.cols()) throw ShapeError("slice_cols out of range");
    const int ix = x.id;
    return t.push(X.middleCols(begin, count), any_grad(t, {x}),
                  [ix, begin, count](Tape& tp, const Matrix& g) {
                      tp.grad_buffer(ix).middleCols(begin, count) += g;
                  });
}

Var scale_rows(Var x, const Vector& weights) {
    Tape& t = tape_of({x});
    const Matrix& X = x.value();
    if (weights.size() != X.rows()) throw ShapeError("scale_rows: weight count differs from rows");
    Matrix out = weights.asDiagonal() * X;
    const int ix = x.id;
    return t.push(std::move(out), any_grad(t, {x}), [ix, weights](Tape& tp, const Matrix& g) {
        tp.accumulate(ix, weights.asDiagonal() * g);
    });
}

Var mask_rows(Var s, const Vector& mask, Var straight_through) {
    Tape& t = tape_of({s});
    const Matrix& S = s.value();
    if (mask.size() != S.rows()) throw ShapeError("mask_rows: mask length differs from rows");
    const bool st = straight_through.valid();
    if (st) {
        if (straight_through.tape != &t) throw ContractError("mask_rows: mixed tapes");
        if (straight_through.value().rows() != S.rows() || straight_through.value().cols() != 1) {
            throw ShapeError("mask_rows: straight-through source must be L x 1");
        }
    }
    Matrix out = mask.asDiagonal() * S;
    const int is = s.id;
    const int ia = st ? straight_through.id : -1;
    const bool needs = st ? any_grad(t, {s, straight_through}) : any_grad(t, {s});
    return t.push(std::move(out), needs, [is, ia, mask](Tape& tp, const Matrix& g) {
        if (tp.requires_grad(is)) tp.accumulate(is, mask.asDiagonal() * g);
        if (ia >= 0 && tp.requires_grad(ia)) {
            tp.accumulate(ia, g.cwiseProduct(tp.value(is)).rowwise().sum());
        }
    });
}

Var max_elementwise(std::span<const Var> parts) {
    Tape& t = tape_of(parts);
    Matrix out = parts.front().value();
    Eigen::MatrixXi winner = Eigen::MatrixXi::Zero(out.rows(), out.cols());
    for (std::size_t k = 1; k < parts.size(); ++k) {
        const Matrix& v = parts[k].value();
        require_same_shape(out, v, "max_elementwise");
        for (Eigen::Index c = 0; c < out.cols(); ++c) {
            for (Eigen::Index r = 0; r < out.rows(); ++r) {
                if (v(r, c) > out(r, c)) {
                    out(r, c) = v(r, c);
                    winner(r, c) = static_cast<int>(k);
                }
            }
        }
    }
    std::vector<int> ids;
    for (const Var& v : parts) ids.push_back(v.id);
    return t.push(std::move(out), any_grad(t, parts), [ids, winner](Tape& tp, const Matrix& g) {
        for (std::size_t k = 0; k < ids.size(); ++k) {
            if (!tp.requires_grad(ids[k])) continue;
            Matrix dk = (winner.array() == static_cast<int>(k)).cast<double>().matrix().cwiseProduct(g);
            tp.accumulate(ids[k], dk);
        }
    });
}

Var embedding_lookup(Var table, int index, int frozen_row) {
    Tape& t = tape_of({table});
    const Matrix& E = table.value();
    if (index < 0 || index >= E.rows()) {
        throw DataError("token id " + std::to_string(index) + " outside vocabulary of size " +
                        std::to_string(E.rows()));
    }
    const int it = table.id;
    const bool needs = any_grad(t, {table}) && index != frozen_row;
    return t.push(E.row(index).transpose(), needs, [it, index](Tape& tp, const Matrix& g) {
        tp.grad_buffer(it).row(index) += g.col(0).transpose();
    });
}

Var lstm_step(Var x, Var state, Var w, Var u, Var b) {
    Tape& t = tape_of({x, state, w, u, b});
    const Matrix& X = x.value();
    const Matrix& HC = state.value();
    const Matrix& W = w.value();
    const Matrix& U = u.value();
    const Eigen::Index h = U.cols();
    if (HC.rows() != 2 * h || HC.cols() != 1 || W.rows() != 4 * h || U.rows() != 4 * h ||
        W.cols() != X.rows() || X.cols() != 1 || b.value().rows() != 4 * h) {
        throw ShapeError("lstm_step: incompatible shapes");
    }
    const auto h_prev = HC.col(0).head(h);
    const auto c_prev = HC.col(0).tail(h);
    Vector z = W * X.col(0) + U * h_prev + b.value().col(0);
    Vector gi = (1.0 / (1.0 + (-z.segment(0, h).array()).exp())).matrix();
    Vector gf = (1.0 / (1.0 + (-z.segment(h, h).array()).exp())).matrix();
    Vector gg = z.segment(2 * h, h).array().tanh().matrix();
    Vector go = (1.0 / (1.0 + (-z.segment(3 * h, h).array()).exp())).matrix();
    Vector c = gf.cwiseProduct(c_prev) + gi.cwiseProduct(gg);
    Vector tc = c.array().tanh().matrix();
    Matrix out(2 * h, 1);
    out.col(0).head(h) = go.cwiseProduct(tc);
    out.col(0).tail(h) = c;
    const int ix = x.id, is = state.id, iw = w.id, iu = u.id, ib = b.id;
    return t.push(std::move(out), any_grad(t, {x, state, w, u, b}),
                  [=](Tape& tp, const Matrix& g) {
                      const Vector dh = g.col(0).head(h);
                      const Vector dc_out = g.col(0).tail(h);
                      const Vector c_in = tp.value(is).col(0).tail(h);
                      const Vector h_in = tp.value(is).col(0).head(h);
                      const Vector d_o = dh.cwiseProduct(tc);
                      const Vector dc = dc_out + dh.cwiseProduct(go).cwiseProduct(
                                                     (1.0 - tc.array().square()).matrix());
                      Vector dz(4 * h);
                      dz.segment(0, h) = dc.cwiseProduct(gg).array() * gi.array() * (1.0 - gi.array());
                      dz.segment(h, h) = dc.cwiseProduct(c_in).array() * gf.array() * (1.0 - gf.array());
                      dz.segment(2 * h, h) = dc.cwiseProduct(gi).array() * (1.0 - gg.array().square());
                      dz.segment(3 * h, h) = d_o.array() * go.array() * (1.0 - go.array());
                      if (tp.requires_grad(iw)) tp.grad_buffer(iw).noalias() += dz * tp.value(ix).transpose();
                      if (tp.requires_grad(iu)) tp.grad_buffer(iu).noalias() += dz * h_in.transpose();
                      if (tp.requires_grad(ib)) tp.grad_buffer(ib).col(0) += dz;
                      if (tp.requires_grad(ix)) tp.grad_buffer(ix).col(0).noalias() += tp.value(iw).transpose() * dz;
                      if (tp.requires_grad(is)) {
                          Matrix& ds = tp.grad_buffer(is);
                          ds.col(0).head(h).noalias() += tp.value(iu).transpose() * dz;
                          ds.col(0).tail(h) += dc.cwiseProduct(gf);
                      }
                  });
}

Var layer_norm_rows(Var x, Var gain, Var bias, double epsilon) {
    Tape& t = tape_of({x, gain, bias});
    const Matrix& X = x.value();
    const Eigen::Index d = X.cols();
    if (gain.value().rows() != d || bias.value().rows() != d) throw ShapeError("layer_norm_rows: bad gain/bias");
    Matrix xhat(X.rows(), d);
    Vector inv_std(X.rows());
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
        const double mean = X.row(r).mean();
        const double var = (X.row(r).array() - mean).square().mean();
        inv_std(r) = 1.0 / std::sqrt(var + epsilon);
        xhat.row(r) = (X.row(r).array() - mean) * inv_std(r);
    }
    Matrix out = xhat * gain.value().col(0).asDiagonal();
    out.rowwise() += bias.value().col(0).transpose();
    const int ix = x.id, ig = gain.id, ib = bias.id;
    return t.push(std::move(out), any_grad(t, {x, gain, bias}),
                  [=](Tape& tp, const Matrix& g) {
                      const Vector gam = tp.value(ig).col(0);
                      if (tp.requires_grad(ig)) {
                          tp.accumulate(ig, (g.cwiseProduct(xhat)).colwise().sum().transpose());
                      }
                      if (tp.requires_grad(ib)) tp.accumulate(ib, g.colwise().sum().transpose());
                      if (tp.requires_grad(ix)) {
                          Matrix dx(xhat.rows(), d);
                          const double n = static_cast<double>(d);
                          for (Eigen::Index r = 0; r < xhat.rows(); ++r) {
                              const Eigen::RowVectorXd gh = g.row(r).cwiseProduct(gam.transpose());
                              const double s1 = gh.sum();
                              const double s2 = gh.dot(xhat.row(r));
                              dx.row(r) = inv_std(r) / n *
                                          (n * gh.array() - s1 - xhat.row(r).array() * s2);
                          }
                          tp.accumulate(ix, dx);
                      }
                  });
}

Var neg_log_prob(Var p, int index, double floor) {
    Tape& t = tape_of({p});
    const Matrix& P = p.value();
    if (P.cols() != 1 || index < 0 || index >= P.rows()) throw ShapeError("neg_log_prob: bad index");
    const double pi = P(index, 0);
    Matrix out(1, 1);
    out(0, 0) = -std::log(std::max(pi, floor));
    const int ip = p.id;
    const Eigen::Index n = P.rows();
    return t.push(std::move(out), any_grad(t, {p}), [=](Tape& tp, const Matrix& g) {
        if (pi <= floor) return;
        Matrix dp = Matrix::Zero(n, 1);
        dp(index, 0) = -g(0, 0) / pi;
        tp.accumulate(ip, dp);
    });
}

}  // namespace cfonet::ag
