#include "tpgn/params.hpp"

#include <cmath>
#include <random>

#include "tpgn/errors.hpp"

namespace tpgn {

void TpgnConfig::validate() const {
    TPGN_REQUIRE(d >= 2, "config: d must be at least 2");
    TPGN_REQUIRE(vocab >= 4, "config: vocabulary must have at least 4 words");
    TPGN_REQUIRE(feature_dim >= 1, "config: feature_dim must be positive");
    TPGN_REQUIRE(max_len >= 1, "config: max_len must be at least 1");
    TPGN_REQUIRE(start_id != end_id, "config: start and end ids must differ");
    TPGN_REQUIRE(start_id < vocab && end_id < vocab, "config: start/end ids outside vocabulary");
}

TpgnParams zero_params(const TpgnConfig& config) {
    config.validate();
    const std::size_t d = config.d, d2 = d * d, V = config.vocab;
    auto gates = [](const Shape& s) { return Gates<Tensor>{Tensor(s), Tensor(s), Tensor(s), Tensor(s)}; };
    TpgnParams p;
    p.W1 = gates({d, d, d});
    p.D1 = gates({d, d, d});
    p.U1 = gates({d, d, d, d});
    p.b1 = gates({d, d});
    p.C_s = Tensor({d, d, config.feature_dim});
    p.w2 = gates({d});
    p.D2 = gates({d, d});
    p.U2 = gates({d, d});
    p.b2 = gates({d});
    p.W_u = Tensor({d2, d});
    p.b_u = Tensor({d2});
    p.E_gate = Tensor({d, V});
    p.E_out = Tensor({d2, V});
    return p;
}

std::size_t fan_in(const std::string& name, const TpgnConfig& config) {
    const std::size_t d = config.d;
    if (name.starts_with("b")) return 0;
    if (name.starts_with("U1")) return d * d;
    if (name == "C_s") return config.feature_dim;
    if (name.starts_with("E_")) return 0;
    return d;  // W1, D1, w2, D2, U2, W_u all contract over a length-d input
}

TpgnParams init_params(const TpgnConfig& config, std::uint64_t seed, double embedding_scale) {
    TpgnParams p = zero_params(config);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for_each_weight(
        [&](const std::string& name, Tensor& t) {
            if (is_embedding(name)) {
                for (double& x : t.data()) x = embedding_scale * normal(rng);
                // centre each row over the vocabulary so every embedding
                // coordinate has zero mean across words
                const std::size_t rows = t.dim(0), cols = t.dim(1);
                for (std::size_t i = 0; i < rows; ++i) {
                    double mean = 0.0;
                    for (std::size_t j = 0; j < cols; ++j) mean += t.at(i, j);
                    mean /= static_cast<double>(cols);
                    for (std::size_t j = 0; j < cols; ++j) t.at(i, j) -= mean;
                }
                return;
            }
            const std::size_t fi = fan_in(name, config);
            if (fi == 0) return;
            const double sd = 0.1 / std::sqrt(static_cast<double>(fi));
            for (double& x : t.data()) x = sd * normal(rng);
        },
        p);
    return p;
}

std::size_t parameter_count(const TpgnParams& params) {
    std::size_t n = 0;
    for_each_weight([&](const std::string&, const Tensor& t) { n += t.size(); }, params);
    return n;
}

bool all_finite(const TpgnParams& params) {
    bool ok = true;
    for_each_weight([&](const std::string&, const Tensor& t) { ok = ok && t.all_finite(); }, params);
    return ok;
}

}  // namespace tpgn
