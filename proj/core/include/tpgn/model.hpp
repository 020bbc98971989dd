#pragma once

#include <span>
#include <vector>

#include "tpgn/autodiff.hpp"
#include "tpgn/params.hpp"

namespace tpgn {

using TpgnVars = TpgnWeights<ad::Var>;

/// Registers every parameter as a leaf on `tape`.
TpgnVars bind_params(ad::Tape& tape, const TpgnParams& params);

/// Gradients for every parameter, read back after tape.backward().
TpgnParams collect_grads(const ad::Tape& tape, const TpgnVars& vars);

struct EncoderState {
    Tensor S_hat;  ///< (d, d)
    Tensor c1;     ///< (d, d)
};

struct UnbinderState {
    Tensor p;   ///< (d)
    Tensor c2;  ///< (d)
};

struct WordDistribution {
    Tensor logits;
    Tensor probs;
};

struct DecodeStep {
    Tensor S_hat;  ///< S_hat_t, the block used to unbind at this step
    Tensor p;
    Tensor u;  ///< unbinding vector, length d^2 (after tanh)
    Tensor f;  ///< unbound filler, length d^2
    Tensor logits;
    WordId word = 0;
};

struct DecodeTrace {
    std::vector<DecodeStep> steps;

    std::vector<WordId> words() const;
    /// Words up to but excluding the end token.
    std::vector<WordId> caption(WordId end_id) const;
};

/// The generator equations recorded on a tape, shared by inference and
/// training. All functions assume `w` was bound on the same tape as the
/// state arguments.
namespace graph {

struct EncoderVars {
    ad::Var S_hat, c1;
};

struct UnbinderVars {
    ad::Var p, c2;
};

/// S_hat_0 = C_s (v - v_bar), c1_0 = 0.
EncoderVars init_sentence_state(const TpgnVars& w, ad::Var centred_features);
/// Encoder state from an externally supplied d x d initial state (used by
/// pre-training, where the sentence code z is reshaped into S_hat_0).
EncoderVars encoder_state_from(const TpgnVars& w, ad::Var S_hat0);
UnbinderVars initial_unbinder_state(const TpgnVars& w);

EncoderVars encoder_step(const TpgnVars& w, const EncoderVars& prev, ad::Var p_prev, ad::Var x_embed);
UnbinderVars unbinder_step(const TpgnVars& w, const UnbinderVars& prev, ad::Var S_hat_prev,
                           ad::Var x_embed);
ad::Var unbinding_vector(const TpgnVars& w, ad::Var p);
ad::Var unbind_filler(ad::Var S_hat, ad::Var u);
ad::Var word_logits(const TpgnVars& w, ad::Var f);

/// Teacher-forced mean cross-entropy of `targets` given the initial encoder
/// state. targets[t] is the word emitted at step t+1; the input at step 1
/// is `start_id`.
ad::Var sequence_loss(const TpgnVars& w, const EncoderVars& init, WordId start_id,
                      std::span<const WordId> targets);

}  // namespace graph

EncoderState init_sentence_state(const TpgnParams& params, const Tensor& v, const Tensor& v_bar);

EncoderState encoder_step(const TpgnParams& params, const EncoderState& prev, const Tensor& p_prev,
                          WordId x_prev);

UnbinderState unbinder_step(const TpgnParams& params, const UnbinderState& prev,
                            const Tensor& S_hat_prev, WordId x_prev);

/// u = tanh(W_u p + b_u), length d^2.
Tensor unbinding_vector(const TpgnParams& params, const Tensor& p);

/// f = S u where S is block-diagonal with d copies of S_hat; computed
/// chunk by chunk.
Tensor unbind_filler(const Tensor& S_hat, const Tensor& u);

/// logits = E_out^T f, probs = softmax(logits).
WordDistribution decode_word(const TpgnParams& params, const Tensor& f);

/// Greedy decoding from x_0 = start_id until end_id or max_len words.
/// Argmax ties go to the lowest word id.
DecodeTrace generate_caption(const TpgnParams& params, const TpgnConfig& config, const Tensor& v,
                             const Tensor& v_bar);

/// Greedy decoding from an explicit initial state S_hat_0.
DecodeTrace generate_from_state(const TpgnParams& params, const TpgnConfig& config,
                                const Tensor& S_hat0);

}  // namespace tpgn
