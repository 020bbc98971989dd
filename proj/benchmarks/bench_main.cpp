#include <benchmark/benchmark.h>

#include <random>

#include "tpgn/corpus.hpp"
#include "tpgn/model.hpp"
#include "tpgn/tensor_ops.hpp"
#include "tpgn/training.hpp"

using namespace tpgn;

namespace {

Tensor random_tensor(const Shape& shape, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Tensor t(shape);
    for (double& x : t.data()) x = n(rng);
    return t;
}

TpgnConfig config_for(std::size_t d) {
    TpgnConfig c;
    c.d = d;
    c.vocab = Vocabulary(Grammar::standard()).size();
    return c;
}

}  // namespace

static void BM_Contract4(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    const Tensor U = random_tensor({d, d, d, d}, 1);
    const Tensor M = random_tensor({d, d}, 2);
    for (auto _ : state) benchmark::DoNotOptimize(ops::contract4(U, M));
}
BENCHMARK(BM_Contract4)->Arg(6)->Arg(25);

static void BM_EncoderStep(benchmark::State& state) {
    const TpgnConfig c = config_for(static_cast<std::size_t>(state.range(0)));
    const TpgnParams p = init_params(c, 1);
    const EncoderState prev{random_tensor({c.d, c.d}, 3), random_tensor({c.d, c.d}, 4)};
    const Tensor p_prev = random_tensor({c.d}, 5);
    for (auto _ : state) benchmark::DoNotOptimize(encoder_step(p, prev, p_prev, 5));
}
BENCHMARK(BM_EncoderStep)->Arg(6)->Arg(25);

static void BM_CaptionLossBackward(benchmark::State& state) {
    const TpgnConfig c = config_for(static_cast<std::size_t>(state.range(0)));
    const TpgnParams p = init_params(c, 1);
    const Vocabulary vocab(Grammar::standard());
    const CorpusEntry e = make_entry(sample_scene(0), c.feature_dim);
    const auto target = vocab.encode(e.captions.front());
    const Tensor v_bar({c.feature_dim});
    for (auto _ : state) {
        CaptionLoss loss(p, c, e.features, v_bar, target);
        benchmark::DoNotOptimize(loss.gradients());
    }
}
BENCHMARK(BM_CaptionLossBackward)->Arg(4)->Arg(6);

static void BM_GenerateCaption(benchmark::State& state) {
    const TpgnConfig c = config_for(6);
    const TpgnParams p = init_params(c, 1);
    const CorpusEntry e = make_entry(sample_scene(0), c.feature_dim);
    const Tensor v_bar({c.feature_dim});
    for (auto _ : state) benchmark::DoNotOptimize(generate_caption(p, c, e.features, v_bar));
}
BENCHMARK(BM_GenerateCaption);

BENCHMARK_MAIN();
