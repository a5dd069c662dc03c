#pragma once

#include <functional>
#include <vector>

#include "bta/matrix.hpp"

namespace bta {

/// Running statistics for one batch-norm layer, normalizing each of the C
/// coordinates over the batch dimension.
struct BatchNormState {
    Matrix running_mean;  // 1 x C
    Matrix running_var;   // 1 x C
    double momentum = 0.1;
    double eps = 1e-5;

    explicit BatchNormState(int coords = 0)
        : running_mean(1, coords, 0.0), running_var(1, coords, 1.0) {}
};

enum class BnMode { train, eval };

/// Reverse-mode autodiff over Matrix values. A tape is built per forward
/// pass; backward() walks it once and leaves gradients on every node that
/// needs them. Each operation's backward closure is its analytic gradient,
/// which the finite-difference harness checks end to end.
class Tape {
public:
    using Node = int;

    /// Value that does not receive a gradient (inputs, masks, targets).
    Node constant(Matrix m);
    /// Differentiated value (parameters).
    Node leaf(Matrix m);

    const Matrix& value(Node n) const { return nodes_[n].value; }
    /// Gradient of the backward()'d scalar w.r.t. node n (zeros if untouched).
    const Matrix& grad(Node n);

    Node matmul(Node a, Node b);
    Node add(Node a, Node b);
    Node sub(Node a, Node b);
    Node mul(Node a, Node b);  // elementwise
    Node scale(Node a, double c);
    /// Broadcast-add a 1 x C row vector to every row of an R x C matrix.
    Node add_rowvec(Node a, Node row);
    Node transpose(Node a);
    /// Reinterpret the row-major buffer under a new shape (element count fixed).
    Node reshape(Node a, int rows, int cols);
    Node concat_cols(const std::vector<Node>& parts);
    Node concat_rows(const std::vector<Node>& parts);
    /// Numerically stable softmax applied to each row independently.
    Node row_softmax(Node a);
    Node gelu(Node a);
    Node log(Node a);
    Node clamp(Node a, double lo, double hi);
    /// Sum of all entries -> 1 x 1.
    Node sum(Node a);
    /// Column-wise batch normalization over the rows of a (S x C). Train mode
    /// uses batch statistics (S >= 2) and updates `state`; eval mode reads
    /// `state`. gamma and beta are 1 x C.
    Node batch_norm(Node a, Node gamma, Node beta, BatchNormState& state, BnMode mode);

    /// Backpropagate from a 1 x 1 loss node.
    void backward(Node loss);

    size_t node_count() const { return nodes_.size(); }

private:
    struct Rec {
        Matrix value;
        Matrix grad;
        bool needs_grad = false;
        bool grad_alloc = false;
        std::function<void(Tape&)> back;  // empty for inputs
    };

    Node push(Matrix value, bool needs_grad, std::function<void(Tape&)> back);
    void accumulate(Node n, const Matrix& g);
    Matrix& grad_buf(Node n);

    std::vector<Rec> nodes_;
};

}  // namespace bta
