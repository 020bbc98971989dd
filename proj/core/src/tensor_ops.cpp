#include "tpgn/tensor_ops.hpp"

#include <algorithm>
#include <cmath>

#include "tpgn/errors.hpp"

namespace tpgn::ops {

namespace {
void require_rank(const Tensor& t, std::size_t rank, const char* op) {
    TPGN_REQUIRE(t.rank() == rank, std::string(op) + ": expected rank " + std::to_string(rank) +
                                       ", got shape " + shape_string(t.shape()));
}
}  // namespace

Tensor contract3(const Tensor& T, const Tensor& v) {
    require_rank(T, 3, "contract3");
    require_rank(v, 1, "contract3");
    const std::size_t a = T.dim(0), b = T.dim(1), m = T.dim(2);
    TPGN_REQUIRE(v.dim(0) == m, "contract3: last dim of T " + shape_string(T.shape()) +
                                    " does not match vector length " + std::to_string(v.dim(0)));
    Tensor out({a, b});
    const double* t = T.data().data();
    const double* x = v.data().data();
    for (std::size_t ij = 0; ij < a * b; ++ij) {
        const double* row = t + ij * m;
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) s += row[k] * x[k];
        out[ij] = s;
    }
    return out;
}

Tensor contract4(const Tensor& U, const Tensor& M) {
    require_rank(U, 4, "contract4");
    require_rank(M, 2, "contract4");
    TPGN_REQUIRE(U.dim(2) == M.dim(0) && U.dim(3) == M.dim(1),
                 "contract4: trailing dims of U " + shape_string(U.shape()) + " do not match M " +
                     shape_string(M.shape()));
    const std::size_t a = U.dim(0), b = U.dim(1), kl = M.size();
    Tensor out({a, b});
    const double* u = U.data().data();
    const double* m = M.data().data();
    for (std::size_t ij = 0; ij < a * b; ++ij) {
        const double* row = u + ij * kl;
        double s = 0.0;
        for (std::size_t q = 0; q < kl; ++q) s += row[q] * m[q];
        out[ij] = s;
    }
    return out;
}

Tensor outer(const Tensor& f, const Tensor& r) {
    require_rank(f, 1, "outer");
    require_rank(r, 1, "outer");
    Tensor out({f.dim(0), r.dim(0)});
    for (std::size_t i = 0; i < f.dim(0); ++i)
        for (std::size_t j = 0; j < r.dim(0); ++j) out.at(i, j) = f[i] * r[j];
    return out;
}

Tensor matvec(const Tensor& M, const Tensor& v) {
    require_rank(M, 2, "matvec");
    require_rank(v, 1, "matvec");
    TPGN_REQUIRE(M.dim(1) == v.dim(0), "matvec: " + shape_string(M.shape()) + " times " +
                                           shape_string(v.shape()));
    const std::size_t rows = M.dim(0), cols = M.dim(1);
    Tensor out({rows});
    for (std::size_t i = 0; i < rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols; ++j) s += M.at(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

Tensor matvec_transposed(const Tensor& M, const Tensor& v) {
    require_rank(M, 2, "matvec_transposed");
    require_rank(v, 1, "matvec_transposed");
    TPGN_REQUIRE(M.dim(0) == v.dim(0), "matvec_transposed: " + shape_string(M.shape()) +
                                           "^T times " + shape_string(v.shape()));
    const std::size_t rows = M.dim(0), cols = M.dim(1);
    Tensor out({cols});
    for (std::size_t j = 0; j < cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows; ++i) s += M.at(i, j) * v[i];
        out[j] = s;
    }
    return out;
}

Tensor column(const Tensor& M, std::size_t index) {
    require_rank(M, 2, "column");
    TPGN_REQUIRE(index < M.dim(1), "column index " + std::to_string(index) + " out of range for " +
                                       shape_string(M.shape()));
    Tensor out({M.dim(0)});
    for (std::size_t i = 0; i < M.dim(0); ++i) out[i] = M.at(i, index);
    return out;
}

Tensor block_diag_matvec(const Tensor& S, const Tensor& u) {
    require_rank(S, 2, "block_diag_matvec");
    require_rank(u, 1, "block_diag_matvec");
    const std::size_t d = S.dim(0);
    TPGN_REQUIRE(S.dim(1) == d, "block_diag_matvec: block must be square");
    TPGN_REQUIRE(u.dim(0) == d * d, "block_diag_matvec: vector length " + std::to_string(u.dim(0)) +
                                        " != d^2 = " + std::to_string(d * d));
    Tensor out({d * d});
    for (std::size_t chunk = 0; chunk < d; ++chunk) {
        const std::size_t base = chunk * d;
        for (std::size_t i = 0; i < d; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += S.at(i, j) * u[base + j];
            out[base + i] = s;
        }
    }
    return out;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Tensor elementwise(Unary kind, const Tensor& x) {
    Tensor out = x;
    auto data = out.data();
    switch (kind) {
        case Unary::logistic:
            for (double& v : data) v = logistic(v);
            break;
        case Unary::tanh:
            for (double& v : data) v = std::tanh(v);
            break;
    }
    return out;
}

Tensor elementwise(Binary kind, const Tensor& a, const Tensor& b) {
    TPGN_REQUIRE(a.shape() == b.shape(), "elementwise: shape mismatch " + shape_string(a.shape()) +
                                             " vs " + shape_string(b.shape()));
    Tensor out = a;
    switch (kind) {
        case Binary::hadamard:
            for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
            break;
        case Binary::add:
            for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
            break;
        case Binary::sub:
            for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
            break;
    }
    return out;
}

Tensor scale(const Tensor& x, double alpha) {
    Tensor out = x;
    for (double& v : out.data()) v *= alpha;
    return out;
}

Tensor softmax(const Tensor& z) {
    require_rank(z, 1, "softmax");
    const double m = *std::max_element(z.data().begin(), z.data().end());
    Tensor out = z;
    double total = 0.0;
    for (double& v : out.data()) {
        v = std::exp(v - m);
        total += v;
    }
    for (double& v : out.data()) v /= total;
    return out;
}

}  // namespace tpgn::ops
