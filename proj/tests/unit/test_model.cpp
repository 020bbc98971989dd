#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tpgn/errors.hpp"
#include "tpgn/model.hpp"
#include "tpgn/tensor_ops.hpp"

using namespace tpgn;

namespace {

TpgnConfig small_config(std::size_t d = 2, std::size_t V = 7, std::size_t dv = 5) {
    TpgnConfig c;
    c.d = d;
    c.vocab = V;
    c.feature_dim = dv;
    c.max_len = 6;
    return c;
}

std::vector<double> as_vec(const Tensor& t) { return t.storage(); }

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("config validation") {
    TpgnConfig c = small_config();
    CHECK_NOTHROW(c.validate());
    c.d = 1;
    CHECK_THROWS_AS(c.validate(), ContractViolation);
    c = small_config(2, 3);
    CHECK_THROWS_AS(c.validate(), ContractViolation);
    c = small_config();
    c.end_id = c.start_id;
    CHECK_THROWS_AS(c.validate(), ContractViolation);
    c = small_config();
    c.max_len = 0;
    CHECK_THROWS_AS(c.validate(), ContractViolation);
}

TEST_CASE("initialization: zero-mean embeddings, zero biases, seeded") {
    const TpgnConfig c = small_config(4, 12, 9);
    const TpgnParams p = init_params(c, 3);
    for (const Tensor* E : {&p.E_gate, &p.E_out})
        for (std::size_t r = 0; r < E->dim(0); ++r) {
            double s = 0.0;
            for (std::size_t w = 0; w < E->dim(1); ++w) s += E->at(r, w);
            CHECK(std::abs(s) < 1e-12);
        }
    for_each_weight(
        [&](const std::string& name, const Tensor& t) {
            if (name.starts_with("b")) CHECK(max_abs(t) == 0.0);
        },
        p);
    const TpgnParams q = init_params(c, 3);
    for_each_weight([](const std::string&, const Tensor& a, const Tensor& b) { CHECK(a == b); }, p, q);
    CHECK_FALSE(init_params(c, 4).W1.f == p.W1.f);
    CHECK(p.E_out.shape() == Shape{16, 12});
    CHECK(p.E_gate.shape() == Shape{4, 12});
}

TEST_CASE("init_sentence_state") {
    const TpgnConfig c = small_config(3, 7, 5);
    std::mt19937_64 rng(9);
    TpgnParams p = oracle::random_params(c, 9);
    const Tensor v = oracle::random_tensor({5}, rng), v_bar = oracle::random_tensor({5}, rng);

    CHECK(max_abs(init_sentence_state(p, v, v).S_hat) == 0.0);
    const auto s = init_sentence_state(p, v, v_bar);
    CHECK(max_abs_diff(s.S_hat, oracle::contract3(p.C_s, ops::sub(v, v_bar))) < 1e-15);
    CHECK(max_abs(s.c1) == 0.0);
    p.C_s.fill(0.0);
    CHECK(max_abs(init_sentence_state(p, v, v_bar).S_hat) == 0.0);
    CHECK_THROWS_AS(init_sentence_state(p, v, Tensor({4})), ContractViolation);
}

TEST_CASE("encoder step: zero-parameter closed form") {
    const TpgnConfig c = small_config(3);
    const TpgnParams p = zero_params(c);
    std::mt19937_64 rng(1);
    const EncoderState prev{oracle::random_tensor({3, 3}, rng), oracle::random_tensor({3, 3}, rng)};
    const auto next = encoder_step(p, prev, oracle::random_tensor({3}, rng), 2);
    for (std::size_t k = 0; k < 9; ++k) {
        CHECK(next.c1[k] == doctest::Approx(0.5 * prev.c1[k]).epsilon(1e-15));
        CHECK(next.S_hat[k] == doctest::Approx(0.5 * std::tanh(0.5 * prev.c1[k])).epsilon(1e-15));
    }
}

TEST_CASE("encoder step matches the scalar-loop transcription") {
    const TpgnConfig c = small_config(2);
    const TpgnParams p = oracle::random_params(c, 13);
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const EncoderState prev{oracle::random_tensor({2, 2}, rng, 0.5), oracle::random_tensor({2, 2}, rng)};
        const Tensor p_prev = oracle::random_tensor({2}, rng, 0.5);
        const std::size_t word = rng() % c.vocab;
        const auto got = encoder_step(p, prev, p_prev, word);
        const auto want = oracle::encoder_step(p, as_vec(prev.S_hat), as_vec(prev.c1), as_vec(p_prev), word);
        CHECK(max_diff(got.S_hat.storage(), want.S_hat) < 1e-12);
        CHECK(max_diff(got.c1.storage(), want.c1) < 1e-12);
    }
    CHECK_THROWS_AS(encoder_step(p, EncoderState{Tensor({2, 2}), Tensor({2, 2})}, Tensor({2}), c.vocab),
                    ContractViolation);
}

TEST_CASE("unbinder step: zero params, oracle, bounds") {
    const TpgnConfig c = small_config(2);
    std::mt19937_64 rng(17);
    const UnbinderState prev{oracle::random_tensor({2}, rng), oracle::random_tensor({2}, rng)};
    const auto zero = unbinder_step(zero_params(c), prev, oracle::random_tensor({2, 2}, rng), 1);
    for (std::size_t k = 0; k < 2; ++k)
        CHECK(zero.p[k] == doctest::Approx(0.5 * std::tanh(0.5 * prev.c2[k])).epsilon(1e-15));

    const TpgnParams p = oracle::random_params(c, 17);
    for (int trial = 0; trial < 50; ++trial) {
        const UnbinderState s{oracle::random_tensor({2}, rng, 0.5), oracle::random_tensor({2}, rng)};
        const Tensor S = oracle::random_tensor({2, 2}, rng, 0.5);
        const std::size_t word = rng() % c.vocab;
        const auto got = unbinder_step(p, s, S, word);
        const auto want = oracle::unbinder_step(p, as_vec(s.p), as_vec(s.c2), as_vec(S), word);
        CHECK(max_diff(got.p.storage(), want.p) < 1e-12);
        CHECK(max_diff(got.c2.storage(), want.c2) < 1e-12);
    }
    CHECK_THROWS_AS(unbinder_step(p, prev, Tensor({2, 2}), 99), ContractViolation);
}

TEST_CASE("state entries stay inside (-1, 1) over 1000 random steps") {
    const TpgnConfig c = small_config(3, 9);
    const TpgnParams p = oracle::random_params(c, 5, 2.0);  // large weights push the gates hard
    std::mt19937_64 rng(5);
    EncoderState enc{oracle::random_tensor({3, 3}, rng), Tensor({3, 3})};
    UnbinderState unb{Tensor({3}), Tensor({3})};
    for (int t = 0; t < 1000; ++t) {
        const std::size_t word = rng() % c.vocab;
        const auto e = encoder_step(p, enc, unb.p, word);
        const auto u = unbinder_step(p, unb, enc.S_hat, word);
        REQUIRE(e.S_hat.all_finite());
        for (double x : e.S_hat.data()) REQUIRE(std::abs(x) < 1.0);
        for (double x : u.p.data()) REQUIRE(std::abs(x) < 1.0);
        const Tensor uv = unbinding_vector(p, u.p);
        for (double x : uv.data()) REQUIRE(std::abs(x) < 1.0);
        enc = e;
        unb = u;
    }
}

TEST_CASE("unbinding vector") {
    const TpgnConfig c = small_config(3);
    TpgnParams p = oracle::random_params(c, 21);
    TpgnParams q = p;
    q.b_u.fill(0.0);
    CHECK(max_abs(unbinding_vector(q, Tensor({3}))) == 0.0);
    q = p;
    q.W_u.fill(0.0);
    CHECK(unbinding_vector(q, Tensor::vector({1, 2, 3})) == ops::tanh(p.b_u));
    std::mt19937_64 rng(21);
    const Tensor pv = oracle::random_tensor({3}, rng);
    const Tensor want = ops::tanh(ops::add(oracle::matvec(p.W_u, pv), p.b_u));
    CHECK(max_abs_diff(unbinding_vector(p, pv), want) < 1e-15);
}

TEST_CASE("unbind filler is the block-diagonal product") {
    std::mt19937_64 rng(3);
    const Tensor u = oracle::random_tensor({9}, rng);
    Tensor I({3, 3});
    for (std::size_t i = 0; i < 3; ++i) I.at(i, i) = 1.0;
    CHECK(unbind_filler(I, u) == u);
    CHECK(unbind_filler(Tensor::matrix(2, 2, {1, 2, 3, 4}), Tensor::vector({1, 0, 0, 1})) ==
          Tensor::vector({1, 3, 2, 4}));
    const Tensor S = oracle::random_tensor({3, 3}, rng);
    CHECK(max_abs_diff(unbind_filler(S, u), oracle::block_diag_materialized(S, u)) < 1e-12);
}

TEST_CASE("decode word") {
    const TpgnConfig c = small_config(2, 8);
    TpgnParams p = oracle::random_params(c, 4);
    const auto uniform = decode_word(p, Tensor({4}));
    for (double x : uniform.probs.data()) CHECK(x == doctest::Approx(1.0 / 8).epsilon(1e-15));

    std::mt19937_64 rng(4);
    const Tensor f = oracle::random_tensor({4}, rng);
    const auto got = decode_word(p, f);
    Tensor want({8});
    for (std::size_t w = 0; w < 8; ++w)
        for (std::size_t r = 0; r < 4; ++r) want[w] += p.E_out.at(r, w) * f[r];
    CHECK(max_abs_diff(got.logits, want) < 1e-15);
    double s = 0.0;
    for (double x : got.probs.data()) s += x;
    CHECK(std::abs(s - 1.0) < 1e-12);

    // column 5 = 50 f / |f|^2, the other columns orthogonal to f
    const Tensor g = Tensor::vector({1, -1, 0, 0});
    Tensor E({4, 8});
    for (std::size_t w = 0; w < 8; ++w) E.at(2, w) = E.at(3, w) = 1.0;
    for (std::size_t r = 0; r < 4; ++r) E.at(r, 5) = 50.0 * g[r] / 2.0;
    p.E_out = E;
    const auto aligned = decode_word(p, g);
    CHECK(aligned.logits[5] == doctest::Approx(50.0));
    CHECK(aligned.probs[5] > 0.99);
}

TEST_CASE("greedy generation") {
    TpgnConfig c = small_config(3, 9, 4);
    const TpgnParams p = oracle::random_params(c, 6, 1.0);
    std::mt19937_64 rng(6);
    const Tensor v = oracle::random_tensor({4}, rng), v_bar = oracle::random_tensor({4}, rng);

    const auto a = generate_caption(p, c, v, v_bar);
    const auto b = generate_caption(p, c, v, v_bar);
    REQUIRE(a.steps.size() == b.steps.size());
    for (std::size_t t = 0; t < a.steps.size(); ++t) {
        CHECK(a.steps[t].S_hat == b.steps[t].S_hat);
        CHECK(a.steps[t].u == b.steps[t].u);
        CHECK(a.steps[t].f == b.steps[t].f);
        CHECK(a.steps[t].logits == b.steps[t].logits);
        CHECK(a.steps[t].word == b.steps[t].word);
    }
    CHECK(a.steps.size() <= c.max_len);
    if (a.steps.size() < c.max_len) CHECK(a.words().back() == c.end_id);

    // each step emits the argmax of its logits and f = S_hat u
    for (const auto& s : a.steps) {
        std::size_t best = 0;
        for (std::size_t w = 1; w < s.logits.size(); ++w)
            if (s.logits[w] > s.logits[best]) best = w;
        CHECK(s.word == best);
        CHECK(max_abs_diff(s.f, oracle::block_diag_materialized(s.S_hat, s.u)) < 1e-12);
    }

    c.max_len = 1;
    CHECK(generate_caption(p, c, v, v_bar).steps.size() == 1);
}

TEST_CASE("argmax ties go to the lowest word id") {
    TpgnConfig c = small_config(2, 6, 3);
    c.max_len = 3;
    const TpgnParams p = zero_params(c);  // every logit is exactly zero
    const auto trace = generate_caption(p, c, Tensor({3}), Tensor({3}));
    for (const auto& s : trace.steps) CHECK(s.word == 0);
    CHECK(trace.steps.size() == 3);
}

TEST_CASE("greedy trace follows the decoding recurrence step by step") {
    const TpgnConfig c = small_config(2, 7, 3);
    const TpgnParams p = oracle::random_params(c, 44, 0.8);
    std::mt19937_64 rng(44);
    const Tensor v = oracle::random_tensor({3}, rng), v_bar = Tensor({3});
    const auto trace = generate_caption(p, c, v, v_bar);
    EncoderState enc = init_sentence_state(p, v, v_bar);
    UnbinderState unb{Tensor({2}), Tensor({2})};
    WordId prev = c.start_id;
    for (const auto& s : trace.steps) {
        const auto e = encoder_step(p, enc, unb.p, prev);
        const auto u = unbinder_step(p, unb, enc.S_hat, prev);
        CHECK(e.S_hat == s.S_hat);
        CHECK(u.p == s.p);
        CHECK(unbinding_vector(p, u.p) == s.u);
        enc = e;
        unb = u;
        prev = s.word;
    }
}
