#include "tpgn/tpr.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "tpgn/errors.hpp"
#include "tpgn/tensor_ops.hpp"

namespace tpgn::tpr {

std::optional<Tensor> inverse(const Tensor& square) {
    TPGN_REQUIRE(square.rank() == 2 && square.dim(0) == square.dim(1), "inverse needs a square matrix");
    const std::size_t n = square.dim(0);
    Tensor a = square;
    Tensor inv({n, n});
    for (std::size_t i = 0; i < n; ++i) inv.at(i, i) = 1.0;

    const double tol = max_abs(square) * static_cast<double>(n) * 1e-13;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a.at(r, col)) > std::abs(a.at(pivot, col))) pivot = r;
        if (!(std::abs(a.at(pivot, col)) > tol)) return std::nullopt;
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(a.at(pivot, c), a.at(col, c));
                std::swap(inv.at(pivot, c), inv.at(col, c));
            }
        }
        const double p = a.at(col, col);
        for (std::size_t c = 0; c < n; ++c) {
            a.at(col, c) /= p;
            inv.at(col, c) /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = a.at(r, col);
            if (factor == 0.0) continue;
            for (std::size_t c = 0; c < n; ++c) {
                a.at(r, c) -= factor * a.at(col, c);
                inv.at(r, c) -= factor * inv.at(col, c);
            }
        }
    }
    return inv;
}

Tensor pseudo_inverse_dual(const Tensor& roles) {
    TPGN_REQUIRE(roles.rank() == 2, "role matrix must be 2-D");
    const std::size_t d = roles.dim(0), n = roles.dim(1);
    Eigen::MatrixXd rt(n, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < n; ++k) rt(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = roles.at(i, k);
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(rt);
    Tensor out({n, d});
    for (std::size_t k = 0; k < n; ++k) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        e(static_cast<Eigen::Index>(k)) = 1.0;
        const Eigen::VectorXd u = cod.solve(e);
        for (std::size_t i = 0; i < d; ++i) out.at(k, i) = u(static_cast<Eigen::Index>(i));
    }
    return out;
}

DualBasis dual_basis(const Tensor& roles) {
    TPGN_REQUIRE(roles.rank() == 2, "role matrix must be 2-D, got " + shape_string(roles.shape()));
    if (roles.dim(0) == roles.dim(1)) {
        if (auto inv = inverse(roles)) return DualBasis{std::move(*inv), false};
    }
    return DualBasis{pseudo_inverse_dual(roles), true};
}

RoleBasis::RoleBasis(Tensor roles) : roles_(std::move(roles)), duals_(dual_basis(roles_)) {}

Tensor RoleBasis::role(std::size_t k) const { return ops::column(roles_, k); }

Tensor RoleBasis::unbinding_vector(std::size_t k) const {
    TPGN_REQUIRE(k < count(), "role index out of range");
    Tensor u({dim()});
    for (std::size_t i = 0; i < dim(); ++i) u[i] = duals_.unbinding.at(k, i);
    return u;
}

FillerTable::FillerTable(Tensor fillers) : fillers_(std::move(fillers)) {
    TPGN_REQUIRE(fillers_.rank() == 2, "filler table must be 2-D");
}

Tensor FillerTable::filler(std::size_t symbol) const { return ops::column(fillers_, symbol); }

std::size_t FillerTable::nearest(const Tensor& v) const {
    TPGN_REQUIRE(v.rank() == 1 && v.size() == dim(), "filler query has wrong length");
    std::vector<double> norms(count());
    double largest = 0.0;
    for (std::size_t s = 0; s < count(); ++s) {
        double sq = 0.0;
        for (std::size_t i = 0; i < dim(); ++i) sq += fillers_.at(i, s) * fillers_.at(i, s);
        norms[s] = std::sqrt(sq);
        largest = std::max(largest, norms[s]);
    }
    const double vnorm = l2_norm(v.data());
    if (vnorm <= 1e-9 * std::max(largest, 1.0)) {
        return static_cast<std::size_t>(std::min_element(norms.begin(), norms.end()) - norms.begin());
    }
    std::size_t best = 0;
    double best_cos = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < count(); ++s) {
        double dp = 0.0;
        for (std::size_t i = 0; i < dim(); ++i) dp += fillers_.at(i, s) * v[i];
        const double c = norms[s] > 0.0 ? dp / (norms[s] * vnorm) : 0.0;
        if (c > best_cos) {
            best_cos = c;
            best = s;
        }
    }
    return best;
}

Tpr operator+(const Tpr& a, const Tpr& b) { return Tpr{ops::add(a.matrix, b.matrix)}; }

Tpr bind(const Tensor& filler, const Tensor& role) { return Tpr{ops::outer(filler, role)}; }

Tpr superpose(std::span<const Binding> bindings, const FillerTable& fillers, const RoleBasis& roles) {
    std::vector<Binding> sorted(bindings.begin(), bindings.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const Binding& a, const Binding& b) { return a.role < b.role; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        TPGN_REQUIRE(sorted[i].role < roles.count(), "role index out of range");
        TPGN_REQUIRE(sorted[i].symbol < fillers.count(), "symbol not in filler table");
        TPGN_REQUIRE(i == 0 || sorted[i].role != sorted[i - 1].role,
                     "role " + std::to_string(sorted[i].role) + " bound to more than one filler");
    }
    Tensor S({fillers.dim(), roles.dim()});
    for (const Binding& b : sorted) {
        for (std::size_t i = 0; i < fillers.dim(); ++i)
            for (std::size_t j = 0; j < roles.dim(); ++j)
                S.at(i, j) += fillers.fillers().at(i, b.symbol) * roles.roles().at(j, b.role);
    }
    return Tpr{std::move(S)};
}

Tpr encode_string(std::span<const std::size_t> symbols, const FillerTable& fillers,
                  const RoleBasis& roles) {
    std::vector<Binding> bindings;
    bindings.reserve(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) bindings.push_back({symbols[i], i});
    return superpose(bindings, fillers, roles);
}

Tensor unbind(const Tpr& tpr, const Tensor& unbinding_vector) {
    return ops::matvec(tpr.matrix, unbinding_vector);
}

std::vector<std::size_t> decode_string(const Tpr& tpr, const RoleBasis& roles,
                                       const FillerTable& fillers, std::size_t length) {
    TPGN_REQUIRE(length <= roles.count(), "decode length exceeds number of roles");
    std::vector<std::size_t> out;
    out.reserve(length);
    for (std::size_t k = 0; k < length; ++k)
        out.push_back(fillers.nearest(unbind(tpr, roles.unbinding_vector(k))));
    return out;
}

}  // namespace tpgn::tpr
