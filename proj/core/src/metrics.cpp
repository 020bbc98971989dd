#include "tpgn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "tpgn/errors.hpp"

namespace tpgn {

ParsedCaption parse_caption_tuples(std::string_view caption, const Grammar& grammar) {
    ParsedCaption out;
    out.tokens = tokenize(caption);

    std::optional<std::string> pending_adj;
    std::optional<std::string> pending_prep;
    std::optional<std::string> prev_noun;

    auto drop_adj = [&] {
        if (pending_adj) out.diagnostics.push_back("dangling adjective '" + *pending_adj + "'");
        pending_adj.reset();
    };

    for (const auto& tok : out.tokens) {
        const auto pos = grammar.pos_of(tok);
        if (!pos) {
            out.diagnostics.push_back("unknown token '" + tok + "'");
            continue;
        }
        switch (*pos) {
            case Pos::det:
                drop_adj();
                break;
            case Pos::adj:
                drop_adj();
                pending_adj = tok;
                break;
            case Pos::verb:
                drop_adj();
                break;
            case Pos::prep:
                drop_adj();
                if (!prev_noun) {
                    out.diagnostics.push_back("dangling preposition '" + tok + "'");
                } else {
                    if (pending_prep) out.diagnostics.push_back("dangling preposition '" + *pending_prep + "'");
                    pending_prep = tok;
                }
                break;
            case Pos::noun:
                out.tuples.insert({tok});
                if (pending_adj) out.tuples.insert({tok, *pending_adj});
                if (pending_prep && prev_noun) out.tuples.insert({*prev_noun, *pending_prep, tok});
                pending_adj.reset();
                pending_prep.reset();
                prev_noun = tok;
                break;
        }
    }
    drop_adj();
    if (pending_prep) out.diagnostics.push_back("dangling preposition '" + *pending_prep + "'");
    return out;
}

Score spice_lite(const SceneGraph& candidate, const SceneGraph& gold) {
    TPGN_REQUIRE(!gold.empty(), "spice_lite: gold tuple set is empty");
    std::size_t common = 0;
    for (const auto& t : candidate) common += gold.count(t);
    Score s;
    s.precision = candidate.empty() ? 0.0 : static_cast<double>(common) / static_cast<double>(candidate.size());
    s.recall = static_cast<double>(common) / static_cast<double>(gold.size());
    s.f1 = (s.precision + s.recall) > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    return s;
}

Score spice_lite(std::string_view caption, const SceneGraph& gold) {
    return spice_lite(parse_caption_tuples(caption).tuples, gold);
}

namespace {

constexpr double kSmoothing = 1e-9;

using Ngram = std::vector<std::string>;

std::map<Ngram, std::size_t> ngram_counts(std::span<const std::string> words, int n) {
    std::map<Ngram, std::size_t> counts;
    const auto un = static_cast<std::size_t>(n);
    if (words.size() < un) return counts;
    for (std::size_t i = 0; i + un <= words.size(); ++i) ++counts[Ngram(words.begin() + i, words.begin() + i + un)];
    return counts;
}

// (clipped matches, candidate n-gram total) for one order
std::pair<double, double> clipped_matches(std::span<const std::string> candidate,
                                          std::span<const std::vector<std::string>> references, int n) {
    const auto cand = ngram_counts(candidate, n);
    std::map<Ngram, std::size_t> max_ref;
    for (const auto& ref : references)
        for (const auto& [g, c] : ngram_counts(ref, n)) max_ref[g] = std::max(max_ref[g], c);
    double matched = 0.0, total = 0.0;
    for (const auto& [g, c] : cand) {
        total += static_cast<double>(c);
        const auto it = max_ref.find(g);
        if (it != max_ref.end()) matched += static_cast<double>(std::min(c, it->second));
    }
    return {matched, total};
}

std::size_t closest_reference_length(std::size_t c, std::span<const std::vector<std::string>> references) {
    std::size_t best = references.front().size();
    for (const auto& ref : references) {
        const auto diff = [&](std::size_t r) { return r > c ? r - c : c - r; };
        if (diff(ref.size()) < diff(best) || (diff(ref.size()) == diff(best) && ref.size() < best))
            best = ref.size();
    }
    return best;
}

double combine(std::span<const double> matches, std::span<const double> totals, double c, double r, int n) {
    if (c <= 0.0) return 0.0;
    double log_sum = 0.0;
    int orders = 0;
    for (int k = 0; k < n; ++k) {
        // an order longer than the candidate has no n-grams and is left out
        if (totals[k] <= 0.0) continue;
        const double m = matches[k] > 0.0 ? matches[k] : kSmoothing;
        log_sum += std::log(m / totals[k]);
        ++orders;
    }
    if (orders == 0) return 0.0;
    const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
    return bp * std::exp(log_sum / orders);
}

std::vector<std::vector<std::string>> tokenize_all(std::span<const std::string> texts) {
    std::vector<std::vector<std::string>> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(tokenize(t));
    return out;
}

}  // namespace

double bleu_n(std::span<const std::string> candidate, std::span<const std::vector<std::string>> references,
              int n) {
    TPGN_REQUIRE(n >= 1 && n <= 4, "BLEU order must be 1..4");
    TPGN_REQUIRE(!references.empty(), "BLEU needs at least one reference");
    if (candidate.empty()) return 0.0;
    std::vector<double> matches(static_cast<std::size_t>(n)), totals(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        const auto [m, t] = clipped_matches(candidate, references, k);
        matches[static_cast<std::size_t>(k - 1)] = m;
        totals[static_cast<std::size_t>(k - 1)] = t;
    }
    const double c = static_cast<double>(candidate.size());
    const double r = static_cast<double>(closest_reference_length(candidate.size(), references));
    return combine(matches, totals, c, r, n);
}

double bleu_n(std::string_view candidate, std::span<const std::string> references, int n) {
    const auto cand = tokenize(candidate);
    const auto refs = tokenize_all(references);
    return bleu_n(cand, refs, n);
}

CorpusBleu::CorpusBleu(int max_n)
    : max_n_(max_n), matches_(static_cast<std::size_t>(max_n)), totals_(static_cast<std::size_t>(max_n)) {
    TPGN_REQUIRE(max_n >= 1 && max_n <= 4, "BLEU order must be 1..4");
}

void CorpusBleu::add(std::span<const std::string> candidate, std::span<const std::vector<std::string>> references) {
    TPGN_REQUIRE(!references.empty(), "BLEU needs at least one reference");
    for (int k = 1; k <= max_n_; ++k) {
        const auto [m, t] = clipped_matches(candidate, references, k);
        matches_[static_cast<std::size_t>(k - 1)] += m;
        totals_[static_cast<std::size_t>(k - 1)] += t;
    }
    candidate_length_ += static_cast<double>(candidate.size());
    reference_length_ += static_cast<double>(closest_reference_length(candidate.size(), references));
    ++segments_;
}

void CorpusBleu::add(std::string_view candidate, std::span<const std::string> references) {
    const auto cand = tokenize(candidate);
    const auto refs = tokenize_all(references);
    add(cand, refs);
}

double CorpusBleu::score(int n) const {
    TPGN_REQUIRE(n >= 1 && n <= max_n_, "BLEU order out of range");
    return combine(matches_, totals_, candidate_length_, reference_length_, n);
}

}  // namespace tpgn
