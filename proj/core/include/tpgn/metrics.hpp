#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tpgn/grammar.hpp"
#include "tpgn/scene.hpp"

namespace tpgn {

struct ParsedCaption {
    std::vector<std::string> tokens;
    SceneGraph tuples;
    /// Tokens that took part in no proposition: out-of-lexicon words and
    /// dangling lexicon words (an adjective or preposition with no noun).
    std::vector<std::string> diagnostics;
};

/// Rule-based parse of a caption into propositions, following the scene
/// template DET ADJ? NOUN VERB? (PREP DET ADJ? NOUN)*. Each noun yields
/// (noun); a preceding adjective yields (noun, adj); a preposition
/// between two nouns yields (noun1, prep, noun2). Never throws.
ParsedCaption parse_caption_tuples(std::string_view caption, const Grammar& grammar = Grammar::standard());

struct Score {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Tuple F-score with exact matching and set semantics. An empty candidate
/// set has precision 0. Throws ContractViolation on an empty gold set.
Score spice_lite(const SceneGraph& candidate, const SceneGraph& gold);

/// Convenience: parse `caption` and score against `gold`.
Score spice_lite(std::string_view caption, const SceneGraph& gold);

/// Sentence BLEU-n: clipped n-gram precisions for orders 1..n combined by
/// geometric mean, times the brevity penalty exp(1 - r/c) when the
/// candidate length c does not exceed the closest reference length r. An
/// order with no matching n-gram contributes a count of 1e-9 instead of 0.
/// An empty candidate scores 0.
double bleu_n(std::span<const std::string> candidate, std::span<const std::vector<std::string>> references,
              int n);
double bleu_n(std::string_view candidate, std::span<const std::string> references, int n);

/// Corpus BLEU-n: clipped counts and lengths summed over all segments
/// before combining, the usual aggregation for caption benchmarks.
class CorpusBleu {
public:
    explicit CorpusBleu(int max_n = 4);

    void add(std::span<const std::string> candidate, std::span<const std::vector<std::string>> references);
    void add(std::string_view candidate, std::span<const std::string> references);

    double score(int n) const;
    std::size_t segments() const noexcept { return segments_; }

private:
    int max_n_;
    std::vector<double> matches_, totals_;
    double candidate_length_ = 0.0, reference_length_ = 0.0;
    std::size_t segments_ = 0;
};

}  // namespace tpgn
