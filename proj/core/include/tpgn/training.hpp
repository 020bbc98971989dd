#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tpgn/autodiff.hpp"
#include "tpgn/model.hpp"

namespace tpgn {

struct TrainConfig {
    enum class Phase { pretrain, main };

    double learning_rate = 0.5;
    std::size_t epochs = 20;
    std::size_t batch_size = 8;
    std::uint64_t seed = 0;
    double clip_norm = 5.0;
    /// The output embedding doubles as the decoder weight; when false both
    /// embedding matrices stay at their initial (pre-defined) values.
    bool train_embeddings = false;
    Phase phase = Phase::main;

    void validate() const;
};

/// One supervised pair: scene features and a target word sequence that
/// ends with the end token.
struct Example {
    std::string id;
    Tensor features;
    std::vector<WordId> target;
};

struct CorpusStats {
    Tensor v_bar;

    static CorpusStats from_features(std::span<const Tensor> features);
};

/// Teacher-forced caption loss for one example, kept alive with its tape
/// so gradients can be read back.
class CaptionLoss {
public:
    CaptionLoss(const TpgnParams& params, const TpgnConfig& config, const Tensor& v,
                const Tensor& v_bar, std::span<const WordId> target);

    double value() const { return loss_.value().item(); }
    /// Runs the reverse sweep and returns d loss / d params.
    TpgnParams gradients();
    ad::Tape& tape() { return *tape_; }

private:
    std::unique_ptr<ad::Tape> tape_;
    TpgnVars vars_;
    ad::Var loss_;
};

/// Checks the caption-loss target contract: non-empty, ends with end_id,
/// at most max_len words, all ids inside the vocabulary.
void validate_target(const TpgnConfig& config, std::span<const WordId> target);

// Parameter-set arithmetic used by the optimizer.
TpgnParams zeros_like(const TpgnParams& params);
void accumulate(TpgnParams& acc, const TpgnParams& grads, double alpha = 1.0);
double global_norm(const TpgnParams& grads, bool include_embeddings = true);

/// Rescales grads so their global norm is at most `threshold`; returns the
/// norm before clipping.
double clip_global_norm(TpgnParams& grads, double threshold, bool include_embeddings = true);

/// params -= lr * grads (embeddings skipped unless train_embeddings).
void sgd_step(TpgnParams& params, const TpgnParams& grads, double learning_rate,
              bool train_embeddings);

struct EpochResult {
    std::size_t epoch = 0;
    double mean_loss = 0.0;
    double seconds = 0.0;
};

/// One pass of minibatch SGD in a seeded shuffle order. The reported loss
/// is the mean of per-example losses measured before each update.
/// Throws NumericalError naming the example if a loss is not finite.
EpochResult train_epoch(TpgnParams& params, const TpgnConfig& config, std::span<const Example> data,
                        const Tensor& v_bar, const TrainConfig& train, std::size_t epoch);

double evaluate_loss(const TpgnParams& params, const TpgnConfig& config,
                     std::span<const Example> data, const Tensor& v_bar);

/// "epoch<TAB>mean_loss<TAB>seconds"
std::string format_log_line(const EpochResult& r);

// --- pre-training ---------------------------------------------------------

/// Single-layer LSTM with hidden width d^2 that reads a sentence (through
/// E_gate) and outputs its final hidden state z.
template <class T>
struct SentenceEncoderWeights {
    Gates<T> Wx;  ///< (d^2, d)
    Gates<T> Wh;  ///< (d^2, d^2)
    Gates<T> b;   ///< (d^2)
};

using SentenceEncoderParams = SentenceEncoderWeights<Tensor>;

template <class F, class... W>
void for_each_encoder_weight(F&& fn, W&&... weights) {
    fn("enc_Wx_f", weights.Wx.f...);
    fn("enc_Wx_i", weights.Wx.i...);
    fn("enc_Wx_o", weights.Wx.o...);
    fn("enc_Wx_c", weights.Wx.c...);
    fn("enc_Wh_f", weights.Wh.f...);
    fn("enc_Wh_i", weights.Wh.i...);
    fn("enc_Wh_o", weights.Wh.o...);
    fn("enc_Wh_c", weights.Wh.c...);
    fn("enc_b_f", weights.b.f...);
    fn("enc_b_i", weights.b.i...);
    fn("enc_b_o", weights.b.o...);
    fn("enc_b_c", weights.b.c...);
}

SentenceEncoderParams init_sentence_encoder(const TpgnConfig& config, std::uint64_t seed);

/// z in R^{d^2}: final hidden state of the sentence encoder.
ad::Var encode_sentence(const SentenceEncoderWeights<ad::Var>& enc, ad::Var E_gate,
                        std::span<const WordId> words);

/// S_hat_0 = reshape(z) for a sentence given without its end token
/// (inference only).
Tensor sentence_initial_state(const TpgnParams& params, const SentenceEncoderParams& encoder,
                              const TpgnConfig& config, std::span<const WordId> words);

/// Loss of the pre-training system on one sentence: the sentence is
/// encoded to z, S_hat_0 = reshape(z) (no image input), and the generator
/// must reproduce the sentence.
double pretrain_loss(const TpgnParams& params, const SentenceEncoderParams& encoder,
                     const TpgnConfig& config, std::span<const WordId> target,
                     TpgnParams* grads = nullptr, SentenceEncoderParams* encoder_grads = nullptr);

/// One pre-training epoch over sentences (each ends with end_id).
EpochResult pretrain_epoch(TpgnParams& params, SentenceEncoderParams& encoder,
                           const TpgnConfig& config,
                           std::span<const std::vector<WordId>> sentences, const TrainConfig& train,
                           std::size_t epoch);

/// Runs train.epochs pre-training epochs and returns the per-epoch log.
/// Afterwards the caller continues with train_epoch (z = 0, scene input).
std::vector<EpochResult> pretrain(TpgnParams& params, SentenceEncoderParams& encoder,
                                  const TpgnConfig& config,
                                  std::span<const std::vector<WordId>> sentences,
                                  const TrainConfig& train);

}  // namespace tpgn
