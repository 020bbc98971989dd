#include "tpgn/model.hpp"

#include <algorithm>

#include "tpgn/errors.hpp"
#include "tpgn/tensor_ops.hpp"

namespace tpgn {

TpgnVars bind_params(ad::Tape& tape, const TpgnParams& params) {
    TpgnVars vars;
    for_each_weight([&](const std::string&, const Tensor& t, ad::Var& v) { v = tape.leaf(t); }, params,
                    vars);
    return vars;
}

TpgnParams collect_grads(const ad::Tape& tape, const TpgnVars& vars) {
    TpgnParams grads;
    for_each_weight([&](const std::string&, const ad::Var& v, Tensor& g) { g = tape.grad(v); }, vars,
                    grads);
    return grads;
}

std::vector<WordId> DecodeTrace::words() const {
    std::vector<WordId> out;
    out.reserve(steps.size());
    for (const auto& s : steps) out.push_back(s.word);
    return out;
}

std::vector<WordId> DecodeTrace::caption(WordId end_id) const {
    std::vector<WordId> out;
    for (const auto& s : steps) {
        if (s.word == end_id) break;
        out.push_back(s.word);
    }
    return out;
}

namespace graph {

using ad::Var;

EncoderVars init_sentence_state(const TpgnVars& w, Var centred_features) {
    return encoder_state_from(w, ad::contract3(w.C_s, centred_features));
}

EncoderVars encoder_state_from(const TpgnVars& w, Var S_hat0) {
    ad::Tape& tape = *w.C_s.tape();
    TPGN_REQUIRE(S_hat0.value().shape() == w.b1.f.value().shape(), "initial state must be d x d");
    return EncoderVars{S_hat0, tape.constant(Tensor::zeros_like(S_hat0.value()))};
}

UnbinderVars initial_unbinder_state(const TpgnVars& w) {
    ad::Tape& tape = *w.w2.f.tape();
    const Tensor zero = Tensor::zeros_like(w.b2.f.value());
    return UnbinderVars{tape.constant(zero), tape.constant(zero)};
}

namespace {

// W p - D W_e x + U S_hat + b, with the minus sign on the word term kept as written.
Var encoder_preactivation(Var W, Var D, Var U, Var b, Var p_prev, Var x_embed, Var S_prev) {
    return ((ad::contract3(W, p_prev) - ad::contract3(D, x_embed)) + ad::contract4(U, S_prev)) + b;
}

// S_hat w - D W_e x + U p + b
Var unbinder_preactivation(Var w2, Var D, Var U, Var b, Var S_prev, Var x_embed, Var p_prev) {
    return ((ad::matvec(S_prev, w2) - ad::matvec(D, x_embed)) + ad::matvec(U, p_prev)) + b;
}

}  // namespace

EncoderVars encoder_step(const TpgnVars& w, const EncoderVars& prev, Var p_prev, Var x_embed) {
    const Var f = ad::logistic(
        encoder_preactivation(w.W1.f, w.D1.f, w.U1.f, w.b1.f, p_prev, x_embed, prev.S_hat));
    const Var i = ad::logistic(
        encoder_preactivation(w.W1.i, w.D1.i, w.U1.i, w.b1.i, p_prev, x_embed, prev.S_hat));
    const Var o = ad::logistic(
        encoder_preactivation(w.W1.o, w.D1.o, w.U1.o, w.b1.o, p_prev, x_embed, prev.S_hat));
    const Var g =
        ad::tanh(encoder_preactivation(w.W1.c, w.D1.c, w.U1.c, w.b1.c, p_prev, x_embed, prev.S_hat));
    const Var c = ad::hadamard(f, prev.c1) + ad::hadamard(i, g);
    return EncoderVars{ad::hadamard(o, ad::tanh(c)), c};
}

UnbinderVars unbinder_step(const TpgnVars& w, const UnbinderVars& prev, Var S_hat_prev, Var x_embed) {
    const Var f = ad::logistic(
        unbinder_preactivation(w.w2.f, w.D2.f, w.U2.f, w.b2.f, S_hat_prev, x_embed, prev.p));
    const Var i = ad::logistic(
        unbinder_preactivation(w.w2.i, w.D2.i, w.U2.i, w.b2.i, S_hat_prev, x_embed, prev.p));
    const Var o = ad::logistic(
        unbinder_preactivation(w.w2.o, w.D2.o, w.U2.o, w.b2.o, S_hat_prev, x_embed, prev.p));
    const Var g =
        ad::tanh(unbinder_preactivation(w.w2.c, w.D2.c, w.U2.c, w.b2.c, S_hat_prev, x_embed, prev.p));
    const Var c = ad::hadamard(f, prev.c2) + ad::hadamard(i, g);
    return UnbinderVars{ad::hadamard(o, ad::tanh(c)), c};
}

Var unbinding_vector(const TpgnVars& w, Var p) { return ad::tanh(ad::matvec(w.W_u, p) + w.b_u); }

Var unbind_filler(Var S_hat, Var u) { return ad::block_diag_matvec(S_hat, u); }

Var word_logits(const TpgnVars& w, Var f) { return ad::matvec_transposed(w.E_out, f); }

Var sequence_loss(const TpgnVars& w, const EncoderVars& init, WordId start_id,
                  std::span<const WordId> targets) {
    TPGN_REQUIRE(!targets.empty(), "sequence_loss needs a non-empty target");
    const std::size_t V = w.E_gate.value().dim(1);
    EncoderVars enc = init;
    UnbinderVars unb = initial_unbinder_state(w);
    WordId prev_word = start_id;
    Var total;
    for (WordId target : targets) {
        TPGN_REQUIRE(target < V, "target word id out of range");
        const Var x_embed = ad::column(w.E_gate, prev_word);
        const EncoderVars enc_next = encoder_step(w, enc, unb.p, x_embed);
        const UnbinderVars unb_next = unbinder_step(w, unb, enc.S_hat, x_embed);
        const Var u = unbinding_vector(w, unb_next.p);
        const Var f = unbind_filler(enc_next.S_hat, u);
        const Var term = ad::softmax_cross_entropy(word_logits(w, f), target);
        total = total.valid() ? total + term : term;
        enc = enc_next;
        unb = unb_next;
        prev_word = target;
    }
    return ad::scale(total, 1.0 / static_cast<double>(targets.size()));
}

}  // namespace graph

namespace {

void require_word(const TpgnParams& params, WordId x) {
    TPGN_REQUIRE(x < params.E_gate.dim(1), "word id " + std::to_string(x) + " outside vocabulary");
}

}  // namespace

EncoderState init_sentence_state(const TpgnParams& params, const Tensor& v, const Tensor& v_bar) {
    TPGN_REQUIRE(v.shape() == v_bar.shape(), "feature vector and mean differ in shape");
    ad::Tape tape(false);
    const TpgnVars w = bind_params(tape, params);
    const auto s = graph::init_sentence_state(w, tape.constant(ops::sub(v, v_bar)));
    return {s.S_hat.value(), s.c1.value()};
}

EncoderState encoder_step(const TpgnParams& params, const EncoderState& prev, const Tensor& p_prev,
                          WordId x_prev) {
    require_word(params, x_prev);
    ad::Tape tape(false);
    const TpgnVars w = bind_params(tape, params);
    const graph::EncoderVars state{tape.constant(prev.S_hat), tape.constant(prev.c1)};
    const auto next =
        graph::encoder_step(w, state, tape.constant(p_prev), ad::column(w.E_gate, x_prev));
    return {next.S_hat.value(), next.c1.value()};
}

UnbinderState unbinder_step(const TpgnParams& params, const UnbinderState& prev,
                            const Tensor& S_hat_prev, WordId x_prev) {
    require_word(params, x_prev);
    ad::Tape tape(false);
    const TpgnVars w = bind_params(tape, params);
    const graph::UnbinderVars state{tape.constant(prev.p), tape.constant(prev.c2)};
    const auto next =
        graph::unbinder_step(w, state, tape.constant(S_hat_prev), ad::column(w.E_gate, x_prev));
    return {next.p.value(), next.c2.value()};
}

Tensor unbinding_vector(const TpgnParams& params, const Tensor& p) {
    return ops::tanh(ops::add(ops::matvec(params.W_u, p), params.b_u));
}

Tensor unbind_filler(const Tensor& S_hat, const Tensor& u) { return ops::block_diag_matvec(S_hat, u); }

WordDistribution decode_word(const TpgnParams& params, const Tensor& f) {
    Tensor logits = ops::matvec_transposed(params.E_out, f);
    Tensor probs = ops::softmax(logits);
    return {std::move(logits), std::move(probs)};
}

namespace {

WordId argmax_lowest(const Tensor& logits) {
    WordId best = 0;
    for (WordId i = 1; i < logits.size(); ++i)
        if (logits[i] > logits[best]) best = i;
    return best;
}

DecodeTrace greedy_decode(const TpgnVars& w, const TpgnConfig& config,
                          graph::EncoderVars enc) {
    DecodeTrace trace;
    graph::UnbinderVars unb = graph::initial_unbinder_state(w);
    WordId prev_word = config.start_id;
    for (std::size_t t = 0; t < config.max_len; ++t) {
        const ad::Var x_embed = ad::column(w.E_gate, prev_word);
        const auto enc_next = graph::encoder_step(w, enc, unb.p, x_embed);
        const auto unb_next = graph::unbinder_step(w, unb, enc.S_hat, x_embed);
        const ad::Var u = graph::unbinding_vector(w, unb_next.p);
        const ad::Var f = graph::unbind_filler(enc_next.S_hat, u);
        const ad::Var logits = graph::word_logits(w, f);
        DecodeStep step{enc_next.S_hat.value(), unb_next.p.value(), u.value(), f.value(),
                        logits.value(), argmax_lowest(logits.value())};
        prev_word = step.word;
        trace.steps.push_back(std::move(step));
        if (prev_word == config.end_id) break;
        enc = enc_next;
        unb = unb_next;
    }
    return trace;
}

}  // namespace

DecodeTrace generate_caption(const TpgnParams& params, const TpgnConfig& config, const Tensor& v,
                             const Tensor& v_bar) {
    TPGN_REQUIRE(v.size() == config.feature_dim && v_bar.size() == config.feature_dim,
                 "feature vector length does not match config.feature_dim");
    ad::Tape tape(false);
    const TpgnVars w = bind_params(tape, params);
    return greedy_decode(w, config,
                         graph::init_sentence_state(w, tape.constant(ops::sub(v, v_bar))));
}

DecodeTrace generate_from_state(const TpgnParams& params, const TpgnConfig& config,
                                const Tensor& S_hat0) {
    ad::Tape tape(false);
    const TpgnVars w = bind_params(tape, params);
    return greedy_decode(w, config, graph::encoder_state_from(w, tape.constant(S_hat0)));
}

}  // namespace tpgn
