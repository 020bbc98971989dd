#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tpgn/params.hpp"

namespace tpgn {

enum class Pos { det, adj, noun, verb, prep };

constexpr std::array<Pos, 5> kAllPos{Pos::det, Pos::adj, Pos::noun, Pos::verb, Pos::prep};

std::string_view pos_name(Pos pos);

/// Closed lexicon and caption template of the synthetic scene world.
///
/// Captions follow DET ADJ? NOUN VERB? (PREP DET ADJ? NOUN)*, one
/// PREP-phrase per spatial relation. Every word belongs to exactly one
/// part of speech.
class Grammar {
public:
    static const Grammar& standard();

    const std::vector<std::string>& determiners() const { return determiners_; }
    const std::vector<std::string>& attributes() const { return attributes_; }
    const std::vector<std::string>& nouns() const { return nouns_; }
    const std::vector<std::string>& prepositions() const { return prepositions_; }
    const std::vector<std::string>& verbs() const { return verbs_; }

    /// Posture verb used with a noun in verb-bearing caption variants.
    const std::string& posture_of(std::size_t noun) const;

    std::optional<Pos> pos_of(std::string_view word) const;

private:
    Grammar();

    std::vector<std::string> determiners_, attributes_, nouns_, prepositions_, verbs_;
    std::vector<std::size_t> posture_;
    std::unordered_map<std::string, Pos> pos_;
};

/// Word <-> id mapping. Ids 0..2 are <start>, <end>, <unk>; lexicon words
/// follow in grammar order (determiners, attributes, nouns, prepositions,
/// verbs).
class Vocabulary {
public:
    static constexpr WordId kStart = 0;
    static constexpr WordId kEnd = 1;
    static constexpr WordId kUnknown = 2;

    explicit Vocabulary(const Grammar& grammar);
    explicit Vocabulary(std::vector<std::string> words);

    std::size_t size() const noexcept { return words_.size(); }
    const std::string& word(WordId id) const;
    WordId id(std::string_view word) const;
    const std::vector<std::string>& words() const noexcept { return words_; }

    /// Lower-cased tokens of `text` mapped to ids, followed by the end token.
    std::vector<WordId> encode(std::string_view text) const;
    /// Space-joined words, stopping at (and excluding) the end token.
    std::string decode(const std::vector<WordId>& ids) const;

private:
    std::vector<std::string> words_;
    std::unordered_map<std::string, WordId> index_;
};

/// Lower-cases and splits on whitespace; punctuation is dropped.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace tpgn
