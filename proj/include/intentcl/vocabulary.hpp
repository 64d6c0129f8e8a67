#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "intentcl/corpus.hpp"
#include "intentcl/sequencer.hpp"

namespace intentcl {

/// Lowercased word tokens: maximal runs of ASCII alphanumerics or non-ASCII
/// bytes. Everything else separates words.
std::vector<std::string> word_tokens(std::string_view text);

class Vocabulary {
public:
    static constexpr int kPad = 0;
    static constexpr int kUnk = 1;
    static constexpr int kSep = 2;
    static constexpr int kPlh = 3;
    static constexpr int kReserved = 4;

    Vocabulary();

    /// Restores a vocabulary from its full id-ordered token list.
    static Vocabulary from_tokens(std::vector<std::string> tokens);

    int add(const std::string& word);
    int id(std::string_view word) const;  // kUnk when absent
    bool contains(std::string_view word) const;
    const std::string& token(int id) const { return tokens_.at(id); }
    int size() const { return static_cast<int>(tokens_.size()); }
    const std::vector<std::string>& tokens() const { return tokens_; }

    bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, int> index_;
};

/// Words with count >= min_count, in first-appearance order. Tokens of
/// `always_include` are kept regardless of count.
Vocabulary build_vocab(std::span<const std::string> texts, std::span<const std::string> always_include,
                       int min_count = 1);

/// Utterances and label surfaces of every dataset.
Vocabulary build_vocab(std::span<const Dataset> corpora, int min_count = 1);

struct TokenSpan {
    int begin = 0;
    int end = 0;  // half-open

    int size() const { return end - begin; }
    bool operator==(const TokenSpan&) const = default;
};

struct TokenizedSequence {
    std::vector<int> token_ids;
    TokenSpan utterance_span;
    std::vector<TokenSpan> slot_spans;  // rendered (slot_order) positions
    std::vector<bool> placeholder;      // per rendered position
    std::optional<int> gold_slot;
    SequencePlan plan;

    int k() const { return static_cast<int>(slot_spans.size()); }
};

/// Layout: utterance words, then per slot position one SEP followed by the
/// label words (a single PLH for placeholder slots).
TokenizedSequence tokenize(const SequencePlan& plan, std::span<const IntentLabel> labels, const Vocabulary& vocab);

}  // namespace intentcl
