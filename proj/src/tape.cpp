#include "bta/tape.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "bta/ops.hpp"

namespace bta {

Tape::Node Tape::push(Matrix value, bool needs_grad, std::function<void(Tape&)> back) {
    nodes_.push_back(Rec{std::move(value), Matrix(), needs_grad, false, std::move(back)});
    return static_cast<Node>(nodes_.size() - 1);
}

Matrix& Tape::grad_buf(Node n) {
    Rec& r = nodes_[n];
    if (!r.grad_alloc) {
        r.grad = Matrix(r.value.rows(), r.value.cols());
        r.grad_alloc = true;
    }
    return r.grad;
}

const Matrix& Tape::grad(Node n) { return grad_buf(n); }

void Tape::accumulate(Node n, const Matrix& g) {
    if (!nodes_[n].needs_grad) return;
    Matrix& buf = grad_buf(n);
    for (size_t i = 0; i < buf.size(); ++i) buf[i] += g[i];
}

Tape::Node Tape::constant(Matrix m) { return push(std::move(m), false, {}); }

Tape::Node Tape::leaf(Matrix m) { return push(std::move(m), true, {}); }

Tape::Node Tape::matmul(Node a, Node b) {
    Node n = push(bta::matmul(value(a), value(b)),
                  nodes_[a].needs_grad || nodes_[b].needs_grad, {});
    nodes_[n].back = [n, a, b](Tape& t) {
        const Matrix& g = t.nodes_[n].grad;
        if (t.nodes_[a].needs_grad) t.accumulate(a, bta::matmul(g, bta::transpose(t.value(b))));
        if (t.nodes_[b].needs_grad) t.accumulate(b, bta::matmul(bta::transpose(t.value(a)), g));
    };
    return n;
}

Tape::Node Tape::add(Node a, Node b) {
    Node n = push(bta::add(value(a), value(b)),
                  nodes_[a].needs_grad || nodes_[b].needs_grad, {});
    nodes_[n].back = [n, a, b](Tape& t) {
        const Matrix& g = t.nodes_[n].grad;
        t.accumulate(a, g);
        t.accumulate(b, g);
    };
    return n;
}

Tape::Node Tape::sub(Node a, Node b) {
    Node n = push(bta::sub(value(a), value(b)),
                  nodes_[a].needs_grad || nodes_[b].needs_grad, {});
    nodes_[n].back = [n, a, b](Tape& t) {
        const Matrix& g = t.nodes_[n].grad;
        t.accumulate(a, g);
        if (t.nodes_[b].needs_grad) t.accumulate(b, bta::scale(g, -1.0));
    };
    return n;
}

Tape::Node Tape::mul(Node a, Node b) {
    Node n = push(bta::hadamard(value(a), value(b)),
                  nodes_[a].needs_grad || nodes_[b].needs_grad, {});
    nodes_[n].back = [n, a, b](Tape& t) {
        const Matrix& g = t.nodes_[n].grad;
        if (t.nodes_[a].needs_grad) t.accumulate(a, bta::hadamard(g, t.value(b)));
        if (t.nodes_[b].needs_grad) t.accumulate(b, bta::hadamard(g, t.value(a)));
    };
    return n;
}

Tape::Node Tape::scale(Node a, double c) {
    Node n = push(bta::scale(value(a), c), nodes_[a].needs_grad, {});
    nodes_[n].back = [n, a, c](Tape& t) {
        t.accumulate(a, bta::scale(t.nodes_[n].grad, c));
    };
    return n;
}

Tape::Node Tape::add_rowvec(Node a, Node row) {
    const Matrix& m = value(a);
    const Matrix& r = value(row);
    if (r.rows() != 1 || r.cols() != m.cols())
        throw dimension_error("add_rowvec: shape mismatch " + m.shape_str() + " vs " +
                              r.shape_str());
    Matrix out = m;
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < out.cols(); ++j) out(i, j) += r(0, j);
    Node n = push(std::move(out), nodes_[a].needs_grad || nodes_[row].needs_grad, {});
    nodes_[n].back = [n, a, row](Tape& t) {
        const Matrix& g = t.nodes_[n].grad;
        t.accumulate(a, g);
        if (t.nodes_[row].needs_grad) {
            Matrix gr(1, g.cols());
            for (int i = 0; i < g.rows(); ++i)
                for (int j = 0; j < g.cols(); ++j) gr(0, j) += g(i, j);
            t.accumulate(row, gr);
        }
    };
    return n;
}

Tape::Node Tape::transpose(Node a) {
    Node n = push(bta::transpose(value(a)), nodes_[a].needs_grad, {});
    nodes_[n].back = [n, a](Tape& t) {
        t.accumulate(a, bta::transpose(t.nodes_[n].grad));
    };
    return n;
}

Tape::Node Tape::reshape(Node a, int rows, int cols) {
    const Matrix& m = value(a);
    if (static_cast<size_t>(rows) * cols != m.size())
        throw dimension_error("reshape: element count mismatch " + m.shape_str() + " -> " +
                              std::to_string(rows) + "x" + std::to_string(cols));
    std::vector<double> buf(m.data(), m.data() + m.size());
    Node n = push(Matrix::from_rows(rows, cols, std::move(buf)), nodes_[a].needs_grad, {});
    nodes_[n].back = [n, a](Tape& t) {
        const Matrix& g = t.nodes_[n].grad;
        const Matrix& src = t.value(a);
        std::vector<double> gb(g.data(), g.data() + g.size());
        t.accumulate(a, Matrix::from_rows(src.rows(), src.cols(), std::move(gb)));
    };
    return n;
}

Tape::Node Tape::concat_cols(const std::vector<Node>& parts) {
    if (parts.empty()) throw dimension_error("concat_cols: no operands");
    const int rows = value(parts[0]).rows();
    int cols = 0;
    bool ng = false;
    for (Node p : parts) {
        if (value(p).rows() != rows)
            throw dimension_error("concat_cols: row mismatch " + value(parts[0]).shape_str() +
                                  " vs " + value(p).shape_str());
        cols += value(p).cols();
        ng = ng || nodes_[p].needs_grad;
    }
    Matrix out(rows, cols);
    int off = 0;
    for (Node p : parts) {
        const Matrix& m = value(p);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < m.cols(); ++j) out(i, off + j) = m(i, j);
        off += m.cols();
    }
    Node n = push(std::move(out), ng, {});
    std::vector<Node> ps = parts;
    nodes_[n].back = [n, ps](Tape& t) {
        const Matrix& g = t.nodes_[n].grad;
        int off2 = 0;
        for (Node p : ps) {
            const Matrix& m = t.value(p);
            if (t.nodes_[p].needs_grad) {
                Matrix gp(m.rows(), m.cols());
                for (int i = 0; i < m.rows(); ++i)
                    for (int j = 0; j < m.cols(); ++j) gp(i, j) = g(i, off2 + j);
                t.accumulate(p, gp);
            }
            off2 += m.cols();
        }
    };
    return n;
}

Tape::Node Tape::concat_rows(const std::vector<Node>& parts) {
    if (parts.empty()) throw dimension_error("concat_rows: no operands");
    const int cols = value(parts[0]).cols();
    int rows = 0;
    bool ng = false;
    for (Node p : parts) {
        if (value(p).cols() != cols)
            throw dimension_error("concat_rows: column mismatch " + value(parts[0]).shape_str() +
                                  " vs " + value(p).shape_str());
        rows += value(p).rows();
        ng = ng || nodes_[p].needs_grad;
    }
    Matrix out(rows, cols);
    int off = 0;
    for (Node p : parts) {
        const Matrix& m = value(p);
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < cols; ++j) out(off + i, j) = m(i, j);
        off += m.rows();
    }
    Node n = push(std::move(out), ng, {});
    std::vector<Node> ps = parts;
    nodes_[n].back = [n, ps](Tape& t) {
        const Matrix& g = t.nodes_[n].grad;
        int off2 = 0;
        for (Node p : ps) {
            const Matrix& m = t.value(p);
            if (t.nodes_[p].needs_grad) {
                Matrix gp(m.rows(), m.cols());
                for (int i = 0; i < m.rows(); ++i)
                    for (int j = 0; j < m.cols(); ++j) gp(i, j) = g(off2 + i, j);
                t.accumulate(p, gp);
            }
            off2 += m.rows();
        }
    };
    return n;
}

Tape::Node Tape::row_softmax(Node a) {
    const Matrix& m = value(a);
    Matrix out(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i) {
        double mx = m(i, 0);
        for (int j = 1; j < m.cols(); ++j) mx = std::max(mx, m(i, j));
        double denom = 0.0;
        for (int j = 0; j < m.cols(); ++j) denom += std::exp(m(i, j) - mx);
        for (int j = 0; j < m.cols(); ++j) out(i, j) = std::exp(m(i, j) - mx) / denom;
    }
    Node n = push(std::move(out), nodes_[a].needs_grad, {});
    nodes_[n].back = [n, a](Tape& t) {
        const Matrix& g = t.nodes_[n].grad;
        const Matrix& y = t.value(n);
        Matrix ga(y.rows(), y.cols());
        for (int i = 0; i < y.rows(); ++i) {
            double dot = 0.0;
            for (int j = 0; j < y.cols(); ++j) dot += g(i, j) * y(i, j);
            for (int j = 0; j < y.cols(); ++j) ga(i, j) = y(i, j) * (g(i, j) - dot);
        }
        t.accumulate(a, ga);
    };
    return n;
}

Tape::Node Tape::gelu(Node a) {
    const Matrix& m = value(a);
    Matrix out = m;
    for (size_t i = 0; i < out.size(); ++i) out[i] = bta::gelu(out[i]);
    Node n = push(std::move(out), nodes_[a].needs_grad, {});
    nodes_[n].back = [n, a](Tape& t) {
        const Matrix& g = t.nodes_[n].grad;
        const Matrix& x = t.value(a);
        Matrix ga(x.rows(), x.cols());
        for (size_t i = 0; i < ga.size(); ++i) ga[i] = g[i] * bta::gelu_derivative(x[i]);
        t.accumulate(a, ga);
    };
    return n;
}

Tape::Node Tape::log(Node a) {
    const Matrix& m = value(a);
    Matrix out = m;
    for (size_t i = 0; i < out.size(); ++i) out[i] = std::log(out[i]);
    Node n = push(std::move(out), nodes_[a].needs_grad, {});
    nodes_[n].back = [n, a](Tape& t) {
        const Matrix& g = t.nodes_[n].grad;
        const Matrix& x = t.value(a);
        Matrix ga(x.rows(), x.cols());
        for (size_t i = 0; i < ga.size(); ++i) ga[i] = g[i] / x[i];
        t.accumulate(a, ga);
    };
    return n;
}

Tape::Node Tape::clamp(Node a, double lo, double hi) {
    const Matrix& m = value(a);
    Matrix out = m;
    for (size_t i = 0; i < out.size(); ++i) out[i] = std::min(hi, std::max(lo, out[i]));
    Node n = push(std::move(out), nodes_[a].needs_grad, {});
    nodes_[n].back = [n, a, lo, hi](Tape& t) {
        const Matrix& g = t.nodes_[n].grad;
        const Matrix& x = t.value(a);
        Matrix ga(x.rows(), x.cols());
        for (size_t i = 0; i < ga.size(); ++i)
            ga[i] = (x[i] > lo && x[i] < hi) ? g[i] : 0.0;
        t.accumulate(a, ga);
    };
    return n;
}

Tape::Node Tape::sum(Node a) {
    const Matrix& m = value(a);
    double s = 0.0;
    for (size_t i = 0; i < m.size(); ++i) s += m[i];
    Node n = push(Matrix(1, 1, s), nodes_[a].needs_grad, {});
    nodes_[n].back = [n, a](Tape& t) {
        const double g = t.nodes_[n].grad(0, 0);
        const Matrix& x = t.value(a);
        t.accumulate(a, Matrix(x.rows(), x.cols(), g));
    };
    return n;
}

Tape::Node Tape::batch_norm(Node a, Node gamma, Node beta, BatchNormState& state,
                            BnMode mode) {
    const Matrix& x = value(a);
    const int S = x.rows();
    const int C = x.cols();
    const Matrix& gm = value(gamma);
    const Matrix& bt = value(beta);
    if (gm.rows() != 1 || gm.cols() != C || bt.rows() != 1 || bt.cols() != C)
        throw dimension_error("batch_norm: gamma/beta must be 1x" + std::to_string(C));
    if (state.running_mean.cols() != C)
        throw dimension_error("batch_norm: state tracks " +
                              std::to_string(state.running_mean.cols()) +
                              " coordinates, input has " + std::to_string(C));

    Matrix xhat(S, C);
    Matrix inv_std(1, C);
    if (mode == BnMode::train) {
        if (S < 2) throw error("batch_norm: train mode requires batch size >= 2");
        for (int c = 0; c < C; ++c) {
            double mean = 0.0;
            for (int r = 0; r < S; ++r) mean += x(r, c);
            mean /= S;
            double var = 0.0;
            for (int r = 0; r < S; ++r) {
                const double d = x(r, c) - mean;
                var += d * d;
            }
            var /= S;
            const double is = 1.0 / std::sqrt(var + state.eps);
            inv_std(0, c) = is;
            for (int r = 0; r < S; ++r) xhat(r, c) = (x(r, c) - mean) * is;
            // unbiased variance feeds the running estimate
            const double var_unbiased = var * static_cast<double>(S) / (S - 1);
            state.running_mean(0, c) =
                (1.0 - state.momentum) * state.running_mean(0, c) + state.momentum * mean;
            state.running_var(0, c) =
                (1.0 - state.momentum) * state.running_var(0, c) + state.momentum * var_unbiased;
        }
    } else {
        for (int c = 0; c < C; ++c) {
            const double is = 1.0 / std::sqrt(state.running_var(0, c) + state.eps);
            inv_std(0, c) = is;
            for (int r = 0; r < S; ++r)
                xhat(r, c) = (x(r, c) - state.running_mean(0, c)) * is;
        }
    }
    Matrix out(S, C);
    for (int c = 0; c < C; ++c)
        for (int r = 0; r < S; ++r) out(r, c) = gm(0, c) * xhat(r, c) + bt(0, c);

    bool ng = nodes_[a].needs_grad || nodes_[gamma].needs_grad || nodes_[beta].needs_grad;
    Node n = push(std::move(out), ng, {});
    // backward needs the normalized values and scale factors from this pass
    auto xhat_c = std::make_shared<Matrix>(std::move(xhat));
    auto inv_c = std::make_shared<Matrix>(std::move(inv_std));
    nodes_[n].back = [n, a, gamma, beta, xhat_c, inv_c, mode](Tape& t) {
        const Matrix& g = t.nodes_[n].grad;
        const Matrix& gm2 = t.value(gamma);
        const int S2 = g.rows();
        const int C2 = g.cols();
        if (t.nodes_[gamma].needs_grad) {
            Matrix gg(1, C2);
            for (int c = 0; c < C2; ++c) {
                double s = 0.0;
                for (int r = 0; r < S2; ++r) s += g(r, c) * (*xhat_c)(r, c);
                gg(0, c) = s;
            }
            t.accumulate(gamma, gg);
        }
        if (t.nodes_[beta].needs_grad) {
            Matrix gb(1, C2);
            for (int c = 0; c < C2; ++c) {
                double s = 0.0;
                for (int r = 0; r < S2; ++r) s += g(r, c);
                gb(0, c) = s;
            }
            t.accumulate(beta, gb);
        }
        if (t.nodes_[a].needs_grad) {
            Matrix ga(S2, C2);
            if (mode == BnMode::train) {
                for (int c = 0; c < C2; ++c) {
                    double sum_dxhat = 0.0;
                    double sum_dxhat_xhat = 0.0;
                    for (int r = 0; r < S2; ++r) {
                        const double dxh = g(r, c) * gm2(0, c);
                        sum_dxhat += dxh;
                        sum_dxhat_xhat += dxh * (*xhat_c)(r, c);
                    }
                    for (int r = 0; r < S2; ++r) {
                        const double dxh = g(r, c) * gm2(0, c);
                        ga(r, c) = (*inv_c)(0, c) / S2 *
                                   (S2 * dxh - sum_dxhat - (*xhat_c)(r, c) * sum_dxhat_xhat);
                    }
                }
            } else {
                for (int c = 0; c < C2; ++c)
                    for (int r = 0; r < S2; ++r)
                        ga(r, c) = g(r, c) * gm2(0, c) * (*inv_c)(0, c);
            }
            t.accumulate(a, ga);
        }
    };
    return n;
}

void Tape::backward(Node loss) {
    const Matrix& lv = value(loss);
    if (lv.rows() != 1 || lv.cols() != 1)
        throw dimension_error("backward: loss must be 1x1, got " + lv.shape_str());
    grad_buf(loss)(0, 0) = 1.0;
    for (Node n = loss; n >= 0; --n) {
        Rec& r = nodes_[n];
        if (r.grad_alloc && r.back) r.back(*this);
    }
}

}  // namespace bta
