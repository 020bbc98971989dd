#include "tpgn/autodiff.hpp"

#include <algorithm>
#include <cmath>

#include "tpgn/errors.hpp"
#include "tpgn/tensor_ops.hpp"

namespace tpgn::ad {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

double softmax_xent_value(const Tensor& logits, std::size_t target) {
    const double m = *std::max_element(logits.data().begin(), logits.data().end());
    double total = 0.0;
    for (double z : logits.data()) total += std::exp(z - m);
    return m + std::log(total) - logits[target];
}

Tape& common_tape(Var a, Var b) {
    TPGN_REQUIRE(a.valid() && b.valid(), "operation on an unbound Var");
    TPGN_REQUIRE(a.tape() == b.tape(), "operands recorded on different tapes");
    return *a.tape();
}

Tape& tape_of(Var a) {
    TPGN_REQUIRE(a.valid(), "operation on an unbound Var");
    return *a.tape();
}

}  // namespace

const Tensor& Var::value() const {
    TPGN_REQUIRE(tape_ != nullptr, "value() on an unbound Var");
    return tape_->value(id_);
}

Var Tape::leaf(Tensor value) {
    nodes_.push_back(Node{Op::leaf, {kNone, kNone}, 0.0, recording_, std::move(value)});
    return Var(this, nodes_.size() - 1);
}

Var Tape::constant(Tensor value) {
    nodes_.push_back(Node{Op::constant, {kNone, kNone}, 0.0, false, std::move(value)});
    return Var(this, nodes_.size() - 1);
}

Var Tape::record(Op op, Tensor value, std::array<std::size_t, 2> inputs, double aux) {
    bool needs = false;
    if (recording_) {
        for (auto in : inputs)
            if (in != kNone && nodes_[in].requires_grad) needs = true;
    }
    nodes_.push_back(Node{op, inputs, aux, needs, std::move(value)});
    return Var(this, nodes_.size() - 1);
}

Tensor& Tape::grad_buffer(std::size_t id) {
    Tensor& g = grads_[id];
    if (g.empty()) g = Tensor::zeros_like(nodes_[id].value);
    return g;
}

void Tape::backward(Var loss) {
    TPGN_REQUIRE(loss.tape() == this, "loss was not recorded on this tape");
    TPGN_REQUIRE(recording_, "backward() on a tape created without gradient recording");
    TPGN_REQUIRE(nodes_[loss.id()].value.size() == 1,
                 "backward() needs a scalar loss, got shape " +
                     shape_string(nodes_[loss.id()].value.shape()));
    grads_.assign(nodes_.size(), Tensor());
    grad_buffer(loss.id()).fill(1.0);
    for (std::size_t id = loss.id() + 1; id-- > 0;) {
        if (!grads_[id].empty() && nodes_[id].requires_grad) propagate(id);
    }
}

Tensor Tape::grad(Var v) const {
    TPGN_REQUIRE(v.tape() == this, "grad() of a Var from another tape");
    if (v.id() < grads_.size() && !grads_[v.id()].empty()) return grads_[v.id()];
    return Tensor::zeros_like(nodes_[v.id()].value);
}

void Tape::propagate(std::size_t id) {
    const Node& node = nodes_[id];
    const Tensor& g = grads_[id];
    const std::size_t a = node.inputs[0];
    const std::size_t b = node.inputs[1];
    auto wants = [&](std::size_t in) { return in != kNone && nodes_[in].requires_grad; };

    switch (node.op) {
        case Op::leaf:
        case Op::constant:
            break;
        case Op::contract3:
        case Op::contract4: {
            // out[ij] = sum_q T[ij, q] x[q] with the trailing indices of T flattened.
            const Tensor& T = nodes_[a].value;
            const Tensor& x = nodes_[b].value;
            const std::size_t outer_n = g.size();
            const std::size_t inner_n = x.size();
            if (wants(a)) {
                Tensor& dT = grad_buffer(a);
                for (std::size_t ij = 0; ij < outer_n; ++ij)
                    for (std::size_t q = 0; q < inner_n; ++q) dT[ij * inner_n + q] += g[ij] * x[q];
            }
            if (wants(b)) {
                Tensor& dx = grad_buffer(b);
                for (std::size_t ij = 0; ij < outer_n; ++ij)
                    for (std::size_t q = 0; q < inner_n; ++q) dx[q] += g[ij] * T[ij * inner_n + q];
            }
            break;
        }
        case Op::matvec: {
            const Tensor& M = nodes_[a].value;
            const Tensor& v = nodes_[b].value;
            const std::size_t rows = M.dim(0), cols = M.dim(1);
            if (wants(a)) {
                Tensor& dM = grad_buffer(a);
                for (std::size_t i = 0; i < rows; ++i)
                    for (std::size_t j = 0; j < cols; ++j) dM.at(i, j) += g[i] * v[j];
            }
            if (wants(b)) {
                Tensor& dv = grad_buffer(b);
                for (std::size_t i = 0; i < rows; ++i)
                    for (std::size_t j = 0; j < cols; ++j) dv[j] += g[i] * M.at(i, j);
            }
            break;
        }
        case Op::matvec_transposed: {
            const Tensor& M = nodes_[a].value;
            const Tensor& v = nodes_[b].value;
            const std::size_t rows = M.dim(0), cols = M.dim(1);
            if (wants(a)) {
                Tensor& dM = grad_buffer(a);
                for (std::size_t i = 0; i < rows; ++i)
                    for (std::size_t j = 0; j < cols; ++j) dM.at(i, j) += v[i] * g[j];
            }
            if (wants(b)) {
                Tensor& dv = grad_buffer(b);
                for (std::size_t i = 0; i < rows; ++i)
                    for (std::size_t j = 0; j < cols; ++j) dv[i] += M.at(i, j) * g[j];
            }
            break;
        }
        case Op::column: {
            if (wants(a)) {
                Tensor& dM = grad_buffer(a);
                const auto idx = static_cast<std::size_t>(node.aux);
                for (std::size_t i = 0; i < g.size(); ++i) dM.at(i, idx) += g[i];
            }
            break;
        }
        case Op::block_diag_matvec: {
            const Tensor& S = nodes_[a].value;
            const Tensor& u = nodes_[b].value;
            const std::size_t d = S.dim(0);
            if (wants(a)) {
                Tensor& dS = grad_buffer(a);
                for (std::size_t c = 0; c < d; ++c)
                    for (std::size_t i = 0; i < d; ++i)
                        for (std::size_t j = 0; j < d; ++j) dS.at(i, j) += g[c * d + i] * u[c * d + j];
            }
            if (wants(b)) {
                Tensor& du = grad_buffer(b);
                for (std::size_t c = 0; c < d; ++c)
                    for (std::size_t i = 0; i < d; ++i)
                        for (std::size_t j = 0; j < d; ++j) du[c * d + j] += S.at(i, j) * g[c * d + i];
            }
            break;
        }
        case Op::outer: {
            const Tensor& f = nodes_[a].value;
            const Tensor& r = nodes_[b].value;
            if (wants(a)) {
                Tensor& df = grad_buffer(a);
                for (std::size_t i = 0; i < f.size(); ++i)
                    for (std::size_t j = 0; j < r.size(); ++j) df[i] += g.at(i, j) * r[j];
            }
            if (wants(b)) {
                Tensor& dr = grad_buffer(b);
                for (std::size_t i = 0; i < f.size(); ++i)
                    for (std::size_t j = 0; j < r.size(); ++j) dr[j] += g.at(i, j) * f[i];
            }
            break;
        }
        case Op::logistic: {
            Tensor& dx = grad_buffer(a);
            const Tensor& y = node.value;
            for (std::size_t i = 0; i < y.size(); ++i) dx[i] += g[i] * y[i] * (1.0 - y[i]);
            break;
        }
        case Op::tanh: {
            Tensor& dx = grad_buffer(a);
            const Tensor& y = node.value;
            for (std::size_t i = 0; i < y.size(); ++i) dx[i] += g[i] * (1.0 - y[i] * y[i]);
            break;
        }
        case Op::hadamard: {
            const Tensor& x = nodes_[a].value;
            const Tensor& y = nodes_[b].value;
            if (wants(a)) {
                Tensor& dx = grad_buffer(a);
                for (std::size_t i = 0; i < g.size(); ++i) dx[i] += g[i] * y[i];
            }
            if (wants(b)) {
                Tensor& dy = grad_buffer(b);
                for (std::size_t i = 0; i < g.size(); ++i) dy[i] += g[i] * x[i];
            }
            break;
        }
        case Op::add:
        case Op::sub: {
            const double sign = node.op == Op::add ? 1.0 : -1.0;
            if (wants(a)) {
                Tensor& dx = grad_buffer(a);
                for (std::size_t i = 0; i < g.size(); ++i) dx[i] += g[i];
            }
            if (wants(b)) {
                Tensor& dy = grad_buffer(b);
                for (std::size_t i = 0; i < g.size(); ++i) dy[i] += sign * g[i];
            }
            break;
        }
        case Op::scale: {
            Tensor& dx = grad_buffer(a);
            for (std::size_t i = 0; i < g.size(); ++i) dx[i] += node.aux * g[i];
            break;
        }
        case Op::reshape: {
            Tensor& dx = grad_buffer(a);
            for (std::size_t i = 0; i < g.size(); ++i) dx[i] += g[i];
            break;
        }
        case Op::softmax_xent: {
            Tensor& dz = grad_buffer(a);
            const Tensor p = ops::softmax(nodes_[a].value);
            const auto target = static_cast<std::size_t>(node.aux);
            const double upstream = g[0];
            for (std::size_t i = 0; i < p.size(); ++i)
                dz[i] += upstream * (p[i] - (i == target ? 1.0 : 0.0));
            break;
        }
        case Op::sum_squares: {
            Tensor& dx = grad_buffer(a);
            const Tensor& x = nodes_[a].value;
            for (std::size_t i = 0; i < x.size(); ++i) dx[i] += 2.0 * g[0] * x[i];
            break;
        }
    }
}

Tensor Tape::evaluate(const Node& node) const {
    const auto in = [&](std::size_t k) -> const Tensor& { return nodes_[node.inputs[k]].value; };
    switch (node.op) {
        case Op::leaf:
        case Op::constant:
            return node.value;
        case Op::contract3: return ops::contract3(in(0), in(1));
        case Op::contract4: return ops::contract4(in(0), in(1));
        case Op::matvec: return ops::matvec(in(0), in(1));
        case Op::matvec_transposed: return ops::matvec_transposed(in(0), in(1));
        case Op::column: return ops::column(in(0), static_cast<std::size_t>(node.aux));
        case Op::block_diag_matvec: return ops::block_diag_matvec(in(0), in(1));
        case Op::outer: return ops::outer(in(0), in(1));
        case Op::logistic: return ops::logistic(in(0));
        case Op::tanh: return ops::tanh(in(0));
        case Op::hadamard: return ops::hadamard(in(0), in(1));
        case Op::add: return ops::add(in(0), in(1));
        case Op::sub: return ops::sub(in(0), in(1));
        case Op::scale: return ops::scale(in(0), node.aux);
        case Op::reshape: return in(0).reshaped(node.value.shape());
        case Op::softmax_xent:
            return Tensor::scalar(softmax_xent_value(in(0), static_cast<std::size_t>(node.aux)));
        case Op::sum_squares: {
            double s = 0.0;
            for (double x : in(0).data()) s += x * x;
            return Tensor::scalar(s);
        }
    }
    return {};
}

bool Tape::replay_matches() const {
    for (const Node& node : nodes_) {
        if (!(evaluate(node) == node.value)) return false;
    }
    return true;
}

Var contract3(Var T, Var v) {
    Tape& t = common_tape(T, v);
    return t.record(Op::contract3, ops::contract3(T.value(), v.value()), {T.id(), v.id()});
}

Var contract4(Var U, Var M) {
    Tape& t = common_tape(U, M);
    return t.record(Op::contract4, ops::contract4(U.value(), M.value()), {U.id(), M.id()});
}

Var matvec(Var M, Var v) {
    Tape& t = common_tape(M, v);
    return t.record(Op::matvec, ops::matvec(M.value(), v.value()), {M.id(), v.id()});
}

Var matvec_transposed(Var M, Var v) {
    Tape& t = common_tape(M, v);
    return t.record(Op::matvec_transposed, ops::matvec_transposed(M.value(), v.value()),
                    {M.id(), v.id()});
}

Var column(Var M, std::size_t index) {
    Tape& t = tape_of(M);
    return t.record(Op::column, ops::column(M.value(), index), {M.id(), kNone},
                    static_cast<double>(index));
}

Var block_diag_matvec(Var S, Var u) {
    Tape& t = common_tape(S, u);
    return t.record(Op::block_diag_matvec, ops::block_diag_matvec(S.value(), u.value()),
                    {S.id(), u.id()});
}

Var outer(Var f, Var r) {
    Tape& t = common_tape(f, r);
    return t.record(Op::outer, ops::outer(f.value(), r.value()), {f.id(), r.id()});
}

Var logistic(Var x) {
    return tape_of(x).record(Op::logistic, ops::logistic(x.value()), {x.id(), kNone});
}

Var tanh(Var x) { return tape_of(x).record(Op::tanh, ops::tanh(x.value()), {x.id(), kNone}); }

Var hadamard(Var a, Var b) {
    return common_tape(a, b).record(Op::hadamard, ops::hadamard(a.value(), b.value()),
                                    {a.id(), b.id()});
}

Var add(Var a, Var b) {
    return common_tape(a, b).record(Op::add, ops::add(a.value(), b.value()), {a.id(), b.id()});
}

Var sub(Var a, Var b) {
    return common_tape(a, b).record(Op::sub, ops::sub(a.value(), b.value()), {a.id(), b.id()});
}

Var scale(Var x, double alpha) {
    return tape_of(x).record(Op::scale, ops::scale(x.value(), alpha), {x.id(), kNone}, alpha);
}

Var reshape(Var x, Shape shape) {
    return tape_of(x).record(Op::reshape, x.value().reshaped(std::move(shape)), {x.id(), kNone});
}

Var softmax_cross_entropy(Var logits, std::size_t target) {
    Tape& t = tape_of(logits);
    TPGN_REQUIRE(logits.value().rank() == 1, "softmax_cross_entropy needs a vector of logits");
    TPGN_REQUIRE(target < logits.value().size(), "softmax_cross_entropy target out of range");
    return t.record(Op::softmax_xent, Tensor::scalar(softmax_xent_value(logits.value(), target)),
                    {logits.id(), kNone}, static_cast<double>(target));
}

Var sum_squares(Var x) {
    double s = 0.0;
    for (double v : x.value().data()) s += v * v;
    return tape_of(x).record(Op::sum_squares, Tensor::scalar(s), {x.id(), kNone});
}

}  // namespace tpgn::ad
