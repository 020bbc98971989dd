#include "tpgn/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "tpgn/errors.hpp"
#include "tpgn/tensor_ops.hpp"

namespace tpgn {

void TrainConfig::validate() const {
    TPGN_REQUIRE(learning_rate >= 0.0, "learning rate must be non-negative");
    TPGN_REQUIRE(clip_norm > 0.0, "clip threshold must be positive");
    TPGN_REQUIRE(batch_size >= 1, "batch size must be at least 1");
}

CorpusStats CorpusStats::from_features(std::span<const Tensor> features) {
    TPGN_REQUIRE(!features.empty(), "corpus statistics need at least one feature vector");
    Tensor mean = Tensor::zeros_like(features.front());
    for (const Tensor& v : features) mean = ops::add(mean, v);
    return CorpusStats{ops::scale(mean, 1.0 / static_cast<double>(features.size()))};
}

void validate_target(const TpgnConfig& config, std::span<const WordId> target) {
    TPGN_REQUIRE(!target.empty(), "caption target is empty");
    TPGN_REQUIRE(target.back() == config.end_id, "caption target must end with the end token");
    TPGN_REQUIRE(target.size() <= config.max_len,
                 "caption target longer than max_len (" + std::to_string(config.max_len) + ")");
    for (WordId w : target) TPGN_REQUIRE(w < config.vocab, "caption target word outside vocabulary");
}

CaptionLoss::CaptionLoss(const TpgnParams& params, const TpgnConfig& config, const Tensor& v,
                         const Tensor& v_bar, std::span<const WordId> target)
    : tape_(std::make_unique<ad::Tape>()) {
    validate_target(config, target);
    TPGN_REQUIRE(v.size() == config.feature_dim && v_bar.size() == config.feature_dim,
                 "feature vector length does not match config.feature_dim");
    vars_ = bind_params(*tape_, params);
    const auto init = graph::init_sentence_state(vars_, tape_->constant(ops::sub(v, v_bar)));
    loss_ = graph::sequence_loss(vars_, init, config.start_id, target);
}

TpgnParams CaptionLoss::gradients() {
    tape_->backward(loss_);
    return collect_grads(*tape_, vars_);
}

TpgnParams zeros_like(const TpgnParams& params) {
    TpgnParams out;
    for_each_weight([](const std::string&, const Tensor& p, Tensor& o) { o = Tensor::zeros_like(p); },
                    params, out);
    return out;
}

void accumulate(TpgnParams& acc, const TpgnParams& grads, double alpha) {
    for_each_weight(
        [&](const std::string&, Tensor& a, const Tensor& g) {
            for (std::size_t i = 0; i < a.size(); ++i) a[i] += alpha * g[i];
        },
        acc, grads);
}

double global_norm(const TpgnParams& grads, bool include_embeddings) {
    double sq = 0.0;
    for_each_weight(
        [&](const std::string& name, const Tensor& g) {
            if (!include_embeddings && is_embedding(name)) return;
            for (double x : g.data()) sq += x * x;
        },
        grads);
    return std::sqrt(sq);
}

double clip_global_norm(TpgnParams& grads, double threshold, bool include_embeddings) {
    const double norm = global_norm(grads, include_embeddings);
    if (norm > threshold) {
        const double factor = threshold / norm;
        for_each_weight([&](const std::string&, Tensor& g) {
            for (double& x : g.data()) x *= factor;
        }, grads);
    }
    return norm;
}

void sgd_step(TpgnParams& params, const TpgnParams& grads, double learning_rate,
              bool train_embeddings) {
    for_each_weight(
        [&](const std::string& name, Tensor& p, const Tensor& g) {
            if (!train_embeddings && is_embedding(name)) return;
            for (std::size_t i = 0; i < p.size(); ++i) p[i] -= learning_rate * g[i];
        },
        params, grads);
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t seed, std::size_t epoch) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(epoch), 0x7a9e5u};
    std::mt19937_64 rng(seq);
    std::shuffle(order.begin(), order.end(), rng);
    return order;
}

void require_finite(double loss, const std::string& what) {
    if (!std::isfinite(loss)) throw NumericalError("non-finite loss on " + what);
}

}  // namespace

EpochResult train_epoch(TpgnParams& params, const TpgnConfig& config, std::span<const Example> data,
                        const Tensor& v_bar, const TrainConfig& train, std::size_t epoch) {
    train.validate();
    TPGN_REQUIRE(!data.empty(), "training corpus is empty");
    const auto start = std::chrono::steady_clock::now();
    const auto order = shuffled_order(data.size(), train.seed, epoch);

    double loss_sum = 0.0;
    std::size_t pos = 0;
    while (pos < order.size()) {
        const std::size_t end = std::min(order.size(), pos + train.batch_size);
        TpgnParams batch_grad = zeros_like(params);
        for (std::size_t k = pos; k < end; ++k) {
            const Example& ex = data[order[k]];
            CaptionLoss loss(params, config, ex.features, v_bar, ex.target);
            require_finite(loss.value(), "example '" + ex.id + "' (epoch " + std::to_string(epoch) + ")");
            loss_sum += loss.value();
            accumulate(batch_grad, loss.gradients());
        }
        for_each_weight([&](const std::string&, Tensor& g) {
            for (double& x : g.data()) x /= static_cast<double>(end - pos);
        }, batch_grad);
        clip_global_norm(batch_grad, train.clip_norm, train.train_embeddings);
        sgd_step(params, batch_grad, train.learning_rate, train.train_embeddings);
        pos = end;
    }
    return EpochResult{epoch, loss_sum / static_cast<double>(data.size()), seconds_since(start)};
}

double evaluate_loss(const TpgnParams& params, const TpgnConfig& config,
                     std::span<const Example> data, const Tensor& v_bar) {
    TPGN_REQUIRE(!data.empty(), "evaluation corpus is empty");
    double total = 0.0;
    for (const Example& ex : data) {
        ad::Tape tape(false);
        const TpgnVars w = bind_params(tape, params);
        const auto init = graph::init_sentence_state(w, tape.constant(ops::sub(ex.features, v_bar)));
        total += graph::sequence_loss(w, init, config.start_id, ex.target).value().item();
    }
    return total / static_cast<double>(data.size());
}

std::string format_log_line(const EpochResult& r) {
    std::ostringstream os;
    os.precision(10);
    os << r.epoch << '\t' << r.mean_loss << '\t';
    os.precision(4);
    os << std::fixed << r.seconds;
    return os.str();
}

// --- pre-training ---------------------------------------------------------

SentenceEncoderParams init_sentence_encoder(const TpgnConfig& config, std::uint64_t seed) {
    config.validate();
    const std::size_t d = config.d, d2 = d * d;
    SentenceEncoderParams enc;
    auto gates = [](const Shape& s) { return Gates<Tensor>{Tensor(s), Tensor(s), Tensor(s), Tensor(s)}; };
    enc.Wx = gates({d2, d});
    enc.Wh = gates({d2, d2});
    enc.b = gates({d2});
    std::mt19937_64 rng(seed ^ 0x5e17e9ce00ull);
    std::normal_distribution<double> normal(0.0, 1.0);
    for_each_encoder_weight(
        [&](const std::string& name, Tensor& t) {
            if (name.starts_with("enc_b")) return;
            const double sd = 0.1 / std::sqrt(static_cast<double>(t.dim(1)));
            for (double& x : t.data()) x = sd * normal(rng);
        },
        enc);
    return enc;
}

ad::Var encode_sentence(const SentenceEncoderWeights<ad::Var>& enc, ad::Var E_gate,
                        std::span<const WordId> words) {
    ad::Tape& tape = *E_gate.tape();
    const Tensor zero = Tensor::zeros_like(enc.b.f.value());
    ad::Var h = tape.constant(zero);
    ad::Var c = tape.constant(zero);
    for (WordId word : words) {
        const ad::Var x = ad::column(E_gate, word);
        auto pre = [&](ad::Var Wx, ad::Var Wh, ad::Var b) {
            return (ad::matvec(Wx, x) + ad::matvec(Wh, h)) + b;
        };
        const ad::Var f = ad::logistic(pre(enc.Wx.f, enc.Wh.f, enc.b.f));
        const ad::Var i = ad::logistic(pre(enc.Wx.i, enc.Wh.i, enc.b.i));
        const ad::Var o = ad::logistic(pre(enc.Wx.o, enc.Wh.o, enc.b.o));
        const ad::Var g = ad::tanh(pre(enc.Wx.c, enc.Wh.c, enc.b.c));
        c = ad::hadamard(f, c) + ad::hadamard(i, g);
        h = ad::hadamard(o, ad::tanh(c));
    }
    return h;
}

Tensor sentence_initial_state(const TpgnParams& params, const SentenceEncoderParams& encoder,
                              const TpgnConfig& config, std::span<const WordId> words) {
    ad::Tape tape(false);
    const TpgnVars w = bind_params(tape, params);
    SentenceEncoderWeights<ad::Var> ev;
    for_each_encoder_weight([&](const std::string&, const Tensor& t, ad::Var& v) { v = tape.leaf(t); },
                            encoder, ev);
    return ad::reshape(encode_sentence(ev, w.E_gate, words), {config.d, config.d}).value();
}

double pretrain_loss(const TpgnParams& params, const SentenceEncoderParams& encoder,
                     const TpgnConfig& config, std::span<const WordId> target, TpgnParams* grads,
                     SentenceEncoderParams* encoder_grads) {
    validate_target(config, target);
    const bool want_grads = grads != nullptr || encoder_grads != nullptr;
    ad::Tape tape(want_grads);
    const TpgnVars w = bind_params(tape, params);
    SentenceEncoderWeights<ad::Var> ev;
    for_each_encoder_weight([&](const std::string&, const Tensor& t, ad::Var& v) { v = tape.leaf(t); },
                            encoder, ev);
    // the encoder reads the words of the sentence, without the end token
    const auto words = target.first(target.size() - 1);
    const ad::Var z = encode_sentence(ev, w.E_gate, words);
    const ad::Var S0 = ad::reshape(z, {config.d, config.d});
    const ad::Var loss =
        graph::sequence_loss(w, graph::encoder_state_from(w, S0), config.start_id, target);
    if (want_grads) {
        tape.backward(loss);
        if (grads) *grads = collect_grads(tape, w);
        if (encoder_grads)
            for_each_encoder_weight(
                [&](const std::string&, const ad::Var& v, Tensor& g) { g = tape.grad(v); }, ev,
                *encoder_grads);
    }
    return loss.value().item();
}

EpochResult pretrain_epoch(TpgnParams& params, SentenceEncoderParams& encoder,
                           const TpgnConfig& config,
                           std::span<const std::vector<WordId>> sentences, const TrainConfig& train,
                           std::size_t epoch) {
    train.validate();
    TPGN_REQUIRE(!sentences.empty(), "pre-training needs at least one sentence");
    const auto start = std::chrono::steady_clock::now();
    const auto order = shuffled_order(sentences.size(), train.seed ^ 0x9e3779b97f4a7c15ull, epoch);

    double loss_sum = 0.0;
    std::size_t pos = 0;
    while (pos < order.size()) {
        const std::size_t end = std::min(order.size(), pos + train.batch_size);
        TpgnParams g_sum = zeros_like(params);
        SentenceEncoderParams e_sum;
        for_each_encoder_weight(
            [](const std::string&, const Tensor& p, Tensor& o) { o = Tensor::zeros_like(p); },
            encoder, e_sum);
        for (std::size_t k = pos; k < end; ++k) {
            TpgnParams g;
            SentenceEncoderParams eg;
            const double loss = pretrain_loss(params, encoder, config, sentences[order[k]], &g, &eg);
            require_finite(loss, "pre-training sentence #" + std::to_string(order[k]) + " (epoch " +
                                     std::to_string(epoch) + ")");
            loss_sum += loss;
            accumulate(g_sum, g);
            for_each_encoder_weight(
                [](const std::string&, Tensor& a, const Tensor& b) {
                    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
                },
                e_sum, eg);
        }
        const double inv = 1.0 / static_cast<double>(end - pos);
        double sq = 0.0;
        for_each_weight(
            [&](const std::string& name, Tensor& t) {
                for (double& x : t.data()) x *= inv;
                if (train.train_embeddings || !is_embedding(name))
                    for (double x : t.data()) sq += x * x;
            },
            g_sum);
        for_each_encoder_weight(
            [&](const std::string&, Tensor& t) {
                for (double& x : t.data()) {
                    x *= inv;
                    sq += x * x;
                }
            },
            e_sum);
        const double norm = std::sqrt(sq);
        const double factor = norm > train.clip_norm ? train.clip_norm / norm : 1.0;
        sgd_step(params, g_sum, train.learning_rate * factor, train.train_embeddings);
        for_each_encoder_weight(
            [&](const std::string&, Tensor& p, const Tensor& g) {
                for (std::size_t i = 0; i < p.size(); ++i) p[i] -= train.learning_rate * factor * g[i];
            },
            encoder, e_sum);
        pos = end;
    }
    return EpochResult{epoch, loss_sum / static_cast<double>(sentences.size()), seconds_since(start)};
}

std::vector<EpochResult> pretrain(TpgnParams& params, SentenceEncoderParams& encoder,
                                  const TpgnConfig& config,
                                  std::span<const std::vector<WordId>> sentences,
                                  const TrainConfig& train) {
    std::vector<EpochResult> log;
    for (std::size_t e = 1; e <= train.epochs; ++e)
        log.push_back(pretrain_epoch(params, encoder, config, sentences, train, e));
    return log;
}

}  // namespace tpgn
