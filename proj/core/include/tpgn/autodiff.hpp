#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "tpgn/tensor.hpp"

namespace tpgn::ad {

class Tape;

/// Handle to a value recorded on a Tape. Cheap to copy; only valid while
/// the owning tape is alive.
class Var {
public:
    Var() = default;

    const Tensor& value() const;
    std::size_t id() const noexcept { return id_; }
    Tape* tape() const noexcept { return tape_; }
    bool valid() const noexcept { return tape_ != nullptr; }

private:
    friend class Tape;
    Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

    Tape* tape_ = nullptr;
    std::size_t id_ = 0;
};

enum class Op {
    leaf,
    constant,
    contract3,
    contract4,
    matvec,
    matvec_transposed,
    column,
    block_diag_matvec,
    outer,
    logistic,
    tanh,
    hadamard,
    add,
    sub,
    scale,
    reshape,
    softmax_xent,
    sum_squares,
};

/// Records coarse tensor primitives in evaluation order and propagates
/// gradients of a scalar loss back to every leaf.
///
/// One tape per loss evaluation; a tape is not thread-safe. With
/// `record_gradients = false` the tape only evaluates (inference mode) and
/// backward() is rejected.
class Tape {
public:
    explicit Tape(bool record_gradients = true) : recording_(record_gradients) {}

    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    /// Differentiable input (a parameter).
    Var leaf(Tensor value);
    /// Input that never receives a gradient.
    Var constant(Tensor value);

    Var record(Op op, Tensor value, std::array<std::size_t, 2> inputs, double aux = 0.0);

    const Tensor& value(std::size_t id) const { return nodes_[id].value; }
    std::size_t size() const noexcept { return nodes_.size(); }
    bool recording() const noexcept { return recording_; }
    bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }

    /// Reverse sweep from a scalar loss. Gradients accumulate into fresh
    /// buffers on every call.
    void backward(Var loss);

    /// Gradient of the last backward() loss with respect to `v`; zeros if
    /// `v` did not influence the loss.
    Tensor grad(Var v) const;

    /// Re-evaluates every recorded primitive from its recorded inputs and
    /// returns true when all outputs reproduce bit-identically.
    bool replay_matches() const;

private:
    struct Node {
        Op op;
        std::array<std::size_t, 2> inputs;
        double aux;
        bool requires_grad;
        Tensor value;
    };

    Tensor evaluate(const Node& node) const;
    void propagate(std::size_t id);
    Tensor& grad_buffer(std::size_t id);

    bool recording_;
    std::vector<Node> nodes_;
    std::vector<Tensor> grads_;
};

Var contract3(Var T, Var v);
Var contract4(Var U, Var M);
Var matvec(Var M, Var v);
Var matvec_transposed(Var M, Var v);
/// Column `index` of M: M times the one-hot vector e_index.
Var column(Var M, std::size_t index);
Var block_diag_matvec(Var S, Var u);
Var outer(Var f, Var r);
Var logistic(Var x);
Var tanh(Var x);
Var hadamard(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var scale(Var x, double alpha);
Var reshape(Var x, Shape shape);
/// -log softmax(logits)[target], a scalar.
Var softmax_cross_entropy(Var logits, std::size_t target);
Var sum_squares(Var x);

inline Var operator+(Var a, Var b) { return add(a, b); }
inline Var operator-(Var a, Var b) { return sub(a, b); }

}  // namespace tpgn::ad
