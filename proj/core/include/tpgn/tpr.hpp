#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tpgn/tensor.hpp"

namespace tpgn::tpr {

/// Result of computing unbinding vectors for a set of role vectors.
struct DualBasis {
    Tensor unbinding;                 ///< (n_roles, d_R); row k is u_k
    bool used_pseudo_inverse = false; ///< true unless R was square and invertible
};

/// Exact inverse of a square matrix by Gauss-Jordan elimination with
/// partial pivoting. Returns nullopt if a pivot falls below the relative
/// singularity tolerance.
std::optional<Tensor> inverse(const Tensor& square);

/// Least-squares duals: row k minimizes ||R^T u - e_k|| (minimum-norm
/// solution), so U = pinv(R).
Tensor pseudo_inverse_dual(const Tensor& roles);

/// Unbinding vectors for the role vectors stored as columns of `roles`
/// (shape (d_R, n)). Square invertible R gives R^-1; everything else
/// (non-square, rank-deficient) falls through to the pseudo-inverse.
DualBasis dual_basis(const Tensor& roles);

/// Role vectors (columns of R) together with their unbinding vectors
/// (rows of U).
class RoleBasis {
public:
    explicit RoleBasis(Tensor roles);

    const Tensor& roles() const noexcept { return roles_; }
    const Tensor& unbinding() const noexcept { return duals_.unbinding; }
    bool used_pseudo_inverse() const noexcept { return duals_.used_pseudo_inverse; }
    std::size_t dim() const noexcept { return roles_.dim(0); }
    std::size_t count() const noexcept { return roles_.dim(1); }

    Tensor role(std::size_t k) const;
    Tensor unbinding_vector(std::size_t k) const;

private:
    Tensor roles_;
    DualBasis duals_;
};

/// Filler vectors, one column per alphabet symbol.
class FillerTable {
public:
    explicit FillerTable(Tensor fillers);

    const Tensor& fillers() const noexcept { return fillers_; }
    std::size_t dim() const noexcept { return fillers_.dim(0); }
    std::size_t count() const noexcept { return fillers_.dim(1); }
    Tensor filler(std::size_t symbol) const;

    /// Symbol whose filler has the largest cosine with `v`, lowest index on
    /// ties. A (numerically) zero `v` has no direction; it maps to the
    /// symbol whose filler is nearest the origin.
    std::size_t nearest(const Tensor& v) const;

private:
    Tensor fillers_;
};

/// A (d_F, d_R) matrix holding a superposition of filler/role bindings.
struct Tpr {
    Tensor matrix;

    friend Tpr operator+(const Tpr& a, const Tpr& b);
};

struct Binding {
    std::size_t symbol;
    std::size_t role;
};

Tpr bind(const Tensor& filler, const Tensor& role);

/// Sum of f_symbol r_role^T over the binding set. Bindings are summed in
/// ascending role order, so the list order never affects the result.
Tpr superpose(std::span<const Binding> bindings, const FillerTable& fillers, const RoleBasis& roles);

/// Positional encoding of a symbol string: symbol i bound to role i.
Tpr encode_string(std::span<const std::size_t> symbols, const FillerTable& fillers,
                  const RoleBasis& roles);

/// S u: recovers the filler bound to the role dual to u.
Tensor unbind(const Tpr& tpr, const Tensor& unbinding_vector);

/// Serial readout: position k decodes unbind(S, u_k) to its nearest filler.
std::vector<std::size_t> decode_string(const Tpr& tpr, const RoleBasis& roles,
                                       const FillerTable& fillers, std::size_t length);

}  // namespace tpgn::tpr
