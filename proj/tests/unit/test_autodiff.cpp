#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tpgn/autodiff.hpp"
#include "tpgn/errors.hpp"
#include "tpgn/tensor_ops.hpp"

using namespace tpgn;

TEST_CASE("gradient of a sum of squares") {
    ad::Tape tape;
    const ad::Var x = tape.leaf(Tensor::vector({1, 2, 3}));
    const ad::Var loss = ad::sum_squares(x);
    CHECK(loss.value().item() == 14.0);
    tape.backward(loss);
    CHECK(tape.grad(x) == Tensor::vector({2, 4, 6}));
}

TEST_CASE("softmax cross-entropy gradient is softmax minus one-hot") {
    ad::Tape tape;
    const Tensor z = Tensor::vector({0.3, -1.2, 2.0});
    const ad::Var logits = tape.leaf(z);
    const ad::Var loss = ad::softmax_cross_entropy(logits, 1);
    const Tensor p = ops::softmax(z);
    CHECK(std::abs(loss.value().item() + std::log(p[1])) < 1e-14);
    tape.backward(loss);
    Tensor want = p;
    want[1] -= 1.0;
    CHECK(max_abs_diff(tape.grad(logits), want) < 1e-15);
}

TEST_CASE("backward rejects non-scalar losses and inference tapes") {
    ad::Tape tape;
    const ad::Var x = tape.leaf(Tensor::vector({1, 2}));
    CHECK_THROWS_AS(tape.backward(x), ContractViolation);
    ad::Tape inference(false);
    const ad::Var y = inference.leaf(Tensor::vector({1, 2}));
    CHECK_THROWS_AS(inference.backward(ad::sum_squares(y)), ContractViolation);
}

TEST_CASE("unreached leaves get zero gradient; constants get none") {
    ad::Tape tape;
    const ad::Var a = tape.leaf(Tensor::vector({1, 2}));
    const ad::Var b = tape.leaf(Tensor::vector({5, 5}));
    const ad::Var c = tape.constant(Tensor::vector({3, 4}));
    const ad::Var loss = ad::sum_squares(ad::hadamard(a, c));
    tape.backward(loss);
    CHECK(tape.grad(b) == Tensor::vector({0, 0}));
    CHECK(tape.grad(a) == Tensor::vector({2 * 1 * 9, 2 * 2 * 16}));
    CHECK_FALSE(tape.requires_grad(c.id()));
}

namespace {

// Central-difference check of a scalar function of one leaf tensor.
template <class Build>
double max_rel_error(const Tensor& x0, Build&& build) {
    ad::Tape tape;
    const ad::Var x = tape.leaf(x0);
    const ad::Var loss = build(x);
    tape.backward(loss);
    const Tensor g = tape.grad(x);
    double worst = 0.0;
    Tensor probe = x0;
    for (std::size_t k = 0; k < x0.size(); ++k) {
        auto eval = [&](double value) {
            probe[k] = value;
            ad::Tape t(false);
            return build(t.leaf(probe)).value().item();
        };
        const double num = (eval(x0[k] + 1e-5) - eval(x0[k] - 1e-5)) / 2e-5;
        probe[k] = x0[k];
        if (std::abs(num) < 1e-8 && std::abs(g[k]) < 1e-8) continue;
        worst = std::max(worst, std::abs(num - g[k]) / std::max(std::abs(num), std::abs(g[k])));
    }
    return worst;
}

}  // namespace

TEST_CASE("every primitive passes a finite-difference check") {
    std::mt19937_64 rng(77);
    const Tensor T = oracle::random_tensor({3, 3, 4}, rng);
    const Tensor U = oracle::random_tensor({3, 3, 3, 3}, rng);
    const Tensor M = oracle::random_tensor({3, 3}, rng);
    const Tensor R = oracle::random_tensor({9, 5}, rng);
    const Tensor v4 = oracle::random_tensor({4}, rng);
    const Tensor v3 = oracle::random_tensor({3}, rng);
    const Tensor v9 = oracle::random_tensor({9}, rng);

    auto weights = [&](ad::Var out) {
        // fixed random linear functional plus a quadratic term keeps every entry's gradient distinct
        ad::Tape& tape = *out.tape();
        std::mt19937_64 wr(out.value().size());
        const ad::Var w = tape.constant(oracle::random_tensor(out.value().shape(), wr));
        return ad::sum_squares(out + w);
    };

    CHECK(max_rel_error(T, [&](ad::Var x) { return weights(ad::contract3(x, x.tape()->constant(v4))); }) < 1e-6);
    CHECK(max_rel_error(v4, [&](ad::Var x) { return weights(ad::contract3(x.tape()->constant(T), x)); }) < 1e-6);
    CHECK(max_rel_error(U, [&](ad::Var x) { return weights(ad::contract4(x, x.tape()->constant(M))); }) < 1e-6);
    CHECK(max_rel_error(M, [&](ad::Var x) { return weights(ad::contract4(x.tape()->constant(U), x)); }) < 1e-6);
    CHECK(max_rel_error(M, [&](ad::Var x) { return weights(ad::matvec(x, x.tape()->constant(v3))); }) < 1e-6);
    CHECK(max_rel_error(v3, [&](ad::Var x) { return weights(ad::matvec(x.tape()->constant(M), x)); }) < 1e-6);
    CHECK(max_rel_error(R, [&](ad::Var x) { return weights(ad::matvec_transposed(x, x.tape()->constant(v9))); }) < 1e-6);
    CHECK(max_rel_error(v9, [&](ad::Var x) { return weights(ad::matvec_transposed(x.tape()->constant(R), x)); }) < 1e-6);
    CHECK(max_rel_error(R, [&](ad::Var x) { return weights(ad::column(x, 2)); }) < 1e-6);
    CHECK(max_rel_error(M, [&](ad::Var x) { return weights(ad::block_diag_matvec(x, x.tape()->constant(v9))); }) < 1e-6);
    CHECK(max_rel_error(v9, [&](ad::Var x) { return weights(ad::block_diag_matvec(x.tape()->constant(M), x)); }) < 1e-6);
    CHECK(max_rel_error(v3, [&](ad::Var x) { return weights(ad::outer(x, x.tape()->constant(v4))); }) < 1e-6);
    CHECK(max_rel_error(v4, [&](ad::Var x) { return weights(ad::outer(x.tape()->constant(v3), x)); }) < 1e-6);
    CHECK(max_rel_error(M, [&](ad::Var x) { return weights(ad::logistic(x)); }) < 1e-6);
    CHECK(max_rel_error(M, [&](ad::Var x) { return weights(ad::tanh(x)); }) < 1e-6);
    CHECK(max_rel_error(M, [&](ad::Var x) { return weights(ad::hadamard(x, ad::tanh(x))); }) < 1e-6);
    CHECK(max_rel_error(M, [&](ad::Var x) { return weights(ad::sub(ad::scale(x, 3.0), ad::logistic(x))); }) < 1e-6);
    CHECK(max_rel_error(v9, [&](ad::Var x) { return weights(ad::reshape(x, {3, 3})); }) < 1e-6);
    CHECK(max_rel_error(v9, [&](ad::Var x) { return ad::softmax_cross_entropy(x, 4); }) < 1e-6);
}

TEST_CASE("a variable used twice accumulates both contributions") {
    ad::Tape tape;
    const ad::Var x = tape.leaf(Tensor::vector({2.0}));
    const ad::Var y = ad::hadamard(x, x) + ad::scale(x, 3.0);
    tape.backward(ad::sum_squares(y));
    // d/dx (x^2 + 3x)^2 = 2 (x^2 + 3x)(2x + 3) = 2 * 10 * 7
    CHECK(tape.grad(x)[0] == doctest::Approx(140.0).epsilon(1e-14));
}

TEST_CASE("replaying the tape reproduces every value bit-identically") {
    std::mt19937_64 rng(12);
    ad::Tape tape;
    const ad::Var U = tape.leaf(oracle::random_tensor({2, 2, 2, 2}, rng));
    const ad::Var M = tape.leaf(oracle::random_tensor({2, 2}, rng));
    const ad::Var h = ad::tanh(ad::contract4(U, M));
    const ad::Var loss = ad::softmax_cross_entropy(ad::reshape(ad::logistic(h), {4}), 1);
    CHECK(tape.replay_matches());
    tape.backward(loss);
    CHECK(tape.replay_matches());
}
