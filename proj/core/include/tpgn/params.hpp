#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "tpgn/tensor.hpp"

namespace tpgn {

using WordId = std::size_t;

/// Sizes of a TPGN instance. The defaults are the desk-scale setting; the
/// original large-scale setting is d = 25, vocab = 8791, feature_dim = 2048.
struct TpgnConfig {
    std::size_t d = 6;             ///< core dimension: S_hat is d x d, p is d, u and f are d^2
    std::size_t vocab = 0;         ///< V
    std::size_t feature_dim = 96;  ///< d_v
    std::size_t max_len = 12;      ///< T_max, counting the end token
    WordId start_id = 0;
    WordId end_id = 1;

    /// Throws ContractViolation unless d >= 2, vocab >= 4, max_len >= 1,
    /// start_id != end_id and both ids are inside the vocabulary.
    void validate() const;

    friend bool operator==(const TpgnConfig&, const TpgnConfig&) = default;
};

/// The four gate-shaped copies (forget, input, output, cell candidate)
/// of an LSTM weight.
template <class T>
struct Gates {
    T f, i, o, c;
};

/// Every learnable tensor of the generator.
///
/// Encoder subnet (matrix state): W1 and D1 are (d, d, d), U1 is
/// (d, d, d, d), b1 is (d, d); C_s is (d, d, feature_dim) and maps the
/// centred scene features to the initial state. Unbinding subnet (vector
/// state): w2 is (d), D2 and U2 are (d, d), b2 is (d). W_u (d^2, d) with
/// bias b_u (d^2) produces the unbinding vector. E_gate (d, V) embeds the
/// previous word for the gate equations; E_out (d^2, V) is the output
/// embedding, and the lexical decoder uses E_out^T directly.
template <class T>
struct TpgnWeights {
    Gates<T> W1, D1, U1, b1;
    T C_s;
    Gates<T> w2, D2, U2, b2;
    T W_u, b_u;
    T E_gate, E_out;
};

using TpgnParams = TpgnWeights<Tensor>;

#define TPGN_VISIT_GATES(name)                \
    fn(#name "_f", weights.name.f...);        \
    fn(#name "_i", weights.name.i...);        \
    fn(#name "_o", weights.name.o...);        \
    fn(#name "_c", weights.name.c...)

/// Calls fn(name, field_of_each_argument...) for every tensor slot, in a
/// fixed order. Works across TpgnWeights instantiations, so it also zips
/// parameters with their gradients or tape variables.
template <class F, class... W>
void for_each_weight(F&& fn, W&&... weights) {
    TPGN_VISIT_GATES(W1);
    TPGN_VISIT_GATES(D1);
    TPGN_VISIT_GATES(U1);
    TPGN_VISIT_GATES(b1);
    fn("C_s", weights.C_s...);
    TPGN_VISIT_GATES(w2);
    TPGN_VISIT_GATES(D2);
    TPGN_VISIT_GATES(U2);
    TPGN_VISIT_GATES(b2);
    fn("W_u", weights.W_u...);
    fn("b_u", weights.b_u...);
    fn("E_gate", weights.E_gate...);
    fn("E_out", weights.E_out...);
}

#undef TPGN_VISIT_GATES

inline bool is_embedding(const std::string& name) { return name == "E_gate" || name == "E_out"; }

/// All-zero parameters with the shapes implied by `config`.
TpgnParams zero_params(const TpgnConfig& config);

/// Seeded Gaussian weights with standard deviation 0.1 / sqrt(fan_in),
/// zero biases, and zero-mean Gaussian embeddings (each embedding row is
/// centred over the vocabulary).
TpgnParams init_params(const TpgnConfig& config, std::uint64_t seed, double embedding_scale = 1.0);

/// Fan-in used for initialization of the named tensor (0 for biases).
std::size_t fan_in(const std::string& name, const TpgnConfig& config);

std::size_t parameter_count(const TpgnParams& params);
bool all_finite(const TpgnParams& params);

}  // namespace tpgn
