#include "tpgn/grammar.hpp"

#include <cctype>

#include "tpgn/errors.hpp"

namespace tpgn {

std::string_view pos_name(Pos pos) {
    switch (pos) {
        case Pos::det: return "DET";
        case Pos::adj: return "ADJ";
        case Pos::noun: return "NOUN";
        case Pos::verb: return "VERB";
        case Pos::prep: return "PREP";
    }
    return "?";
}

const Grammar& Grammar::standard() {
    static const Grammar g;
    return g;
}

Grammar::Grammar()
    : determiners_{"a", "the"},
      attributes_{"red", "blue", "green", "yellow", "black", "white"},
      nouns_{"cat",    "dog",    "bird",  "horse", "man",  "woman", "boy", "girl",
             "circle", "square", "chair", "table", "tree", "car", "lamp"},
      prepositions_{"above", "below", "on", "beside", "near"},
      verbs_{"sitting", "standing", "lying"},
      // sitting / standing / lying, per noun in the order above
      posture_{0, 2, 0, 1, 1, 0, 1, 0, 2, 0, 1, 1, 1, 0, 1} {
    auto add = [&](const std::vector<std::string>& words, Pos pos) {
        for (const auto& w : words) pos_.emplace(w, pos);
    };
    add(determiners_, Pos::det);
    add(attributes_, Pos::adj);
    add(nouns_, Pos::noun);
    add(prepositions_, Pos::prep);
    add(verbs_, Pos::verb);
}

const std::string& Grammar::posture_of(std::size_t noun) const {
    TPGN_REQUIRE(noun < nouns_.size(), "noun index out of range");
    return verbs_[posture_[noun]];
}

std::optional<Pos> Grammar::pos_of(std::string_view word) const {
    const auto it = pos_.find(std::string(word));
    if (it == pos_.end()) return std::nullopt;
    return it->second;
}

Vocabulary::Vocabulary(const Grammar& grammar) {
    std::vector<std::string> words{"<start>", "<end>", "<unk>"};
    for (const auto* list : {&grammar.determiners(), &grammar.attributes(), &grammar.nouns(),
                             &grammar.prepositions(), &grammar.verbs()})
        words.insert(words.end(), list->begin(), list->end());
    *this = Vocabulary(std::move(words));
}

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
    TPGN_REQUIRE(words_.size() >= 3 && words_[kStart] == "<start>" && words_[kEnd] == "<end>" &&
                     words_[kUnknown] == "<unk>",
                 "vocabulary must begin with <start>, <end>, <unk>");
    for (WordId i = 0; i < words_.size(); ++i) {
        const bool inserted = index_.emplace(words_[i], i).second;
        TPGN_REQUIRE(inserted, "duplicate vocabulary word '" + words_[i] + "'");
    }
}

const std::string& Vocabulary::word(WordId id) const {
    TPGN_REQUIRE(id < words_.size(), "word id out of range");
    return words_[id];
}

WordId Vocabulary::id(std::string_view word) const {
    const auto it = index_.find(std::string(word));
    return it == index_.end() ? kUnknown : it->second;
}

std::vector<WordId> Vocabulary::encode(std::string_view text) const {
    std::vector<WordId> ids;
    for (const auto& tok : tokenize(text)) ids.push_back(id(tok));
    ids.push_back(kEnd);
    return ids;
}

std::string Vocabulary::decode(const std::vector<WordId>& ids) const {
    std::string out;
    for (WordId id : ids) {
        if (id == kEnd) break;
        if (!out.empty()) out += ' ';
        out += word(id);
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) out.push_back(std::move(cur));
        cur.clear();
    };
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isspace(c)) {
            flush();
        } else if (std::isalnum(c) || ch == '<' || ch == '>' || ch == '_' || ch == '-') {
            cur.push_back(static_cast<char>(std::tolower(c)));
        }
    }
    flush();
    return out;
}

}  // namespace tpgn
