#pragma once

#include "tpgn/tensor.hpp"

namespace tpgn::ops {

/// result[i][j] = sum_k T[i][j][k] * v[k]. T has shape (a, b, m), v has length m.
Tensor contract3(const Tensor& T, const Tensor& v);

/// result[i][j] = sum_{k,l} U[i][j][k][l] * M[k][l].
Tensor contract4(const Tensor& U, const Tensor& M);

/// result[i][j] = f[i] * r[j].
Tensor outer(const Tensor& f, const Tensor& r);

/// M (a, b) times v (b).
Tensor matvec(const Tensor& M, const Tensor& v);

/// M^T v for M (a, b) and v (a); result has length b.
Tensor matvec_transposed(const Tensor& M, const Tensor& v);

/// Column `index` of a matrix, i.e. M times the one-hot vector e_index.
Tensor column(const Tensor& M, std::size_t index);

/// Applies the d x d block S to each of the d consecutive length-d chunks
/// of u. Equivalent to multiplying u by the d^2 x d^2 block-diagonal
/// matrix with d copies of S on its diagonal, without building it.
Tensor block_diag_matvec(const Tensor& S, const Tensor& u);

enum class Unary { logistic, tanh };
enum class Binary { hadamard, add, sub };

Tensor elementwise(Unary kind, const Tensor& x);
Tensor elementwise(Binary kind, const Tensor& a, const Tensor& b);

inline Tensor logistic(const Tensor& x) { return elementwise(Unary::logistic, x); }
inline Tensor tanh(const Tensor& x) { return elementwise(Unary::tanh, x); }
inline Tensor hadamard(const Tensor& a, const Tensor& b) { return elementwise(Binary::hadamard, a, b); }
inline Tensor add(const Tensor& a, const Tensor& b) { return elementwise(Binary::add, a, b); }
inline Tensor sub(const Tensor& a, const Tensor& b) { return elementwise(Binary::sub, a, b); }

Tensor scale(const Tensor& x, double alpha);

double logistic(double x);

/// Numerically stable softmax (max-subtracted).
Tensor softmax(const Tensor& z);

}  // namespace tpgn::ops
