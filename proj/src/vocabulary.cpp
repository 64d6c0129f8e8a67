#include "intentcl/vocabulary.hpp"

#include <cctype>
#include <map>

#include "intentcl/errors.hpp"

namespace intentcl {

std::vector<std::string> word_tokens(std::string_view text) {
    std::vector<std::string> words;
    std::string cur;
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        if (c >= 0x80 || std::isalnum(c)) {
            cur += static_cast<char>(c < 0x80 ? std::tolower(c) : c);
        } else if (!cur.empty()) {
            words.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) words.push_back(std::move(cur));
    return words;
}

Vocabulary::Vocabulary() {
    for (const char* t : {"<pad>", "<unk>", "<sep>", "<plh>"}) add(t);
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
    static const char* reserved[] = {"<pad>", "<unk>", "<sep>", "<plh>"};
    if (tokens.size() < kReserved) throw DataError("vocabulary is missing reserved tokens");
    for (int i = 0; i < kReserved; ++i)
        if (tokens[i] != reserved[i]) throw DataError("vocabulary reserved token mismatch at id " + std::to_string(i));
    Vocabulary v;
    for (std::size_t i = kReserved; i < tokens.size(); ++i) {
        if (v.contains(tokens[i])) throw DataError("duplicate vocabulary token '" + tokens[i] + "'");
        v.add(tokens[i]);
    }
    return v;
}

int Vocabulary::add(const std::string& word) {
    auto [it, inserted] = index_.emplace(word, static_cast<int>(tokens_.size()));
    if (inserted) tokens_.push_back(word);
    return it->second;
}

int Vocabulary::id(std::string_view word) const {
    auto it = index_.find(std::string(word));
    return it == index_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(std::string_view word) const { return index_.count(std::string(word)) > 0; }

Vocabulary build_vocab(std::span<const std::string> texts, std::span<const std::string> always_include,
                       int min_count) {
    if (texts.empty() && always_include.empty()) throw DataError("build_vocab: no corpora given");
    std::vector<std::string> order;
    std::map<std::string, int> counts;
    for (const auto& t : texts) {
        for (auto& w : word_tokens(t)) {
            if (counts[w]++ == 0) order.push_back(std::move(w));
        }
    }
    Vocabulary vocab;
    for (const auto& s : always_include)
        for (const auto& w : word_tokens(s)) vocab.add(w);
    for (const auto& w : order)
        if (counts[w] >= min_count) vocab.add(w);
    if (vocab.size() == Vocabulary::kReserved) throw DataError("build_vocab: resulting vocabulary is empty");
    return vocab;
}

Vocabulary build_vocab(std::span<const Dataset> corpora, int min_count) {
    if (corpora.empty()) throw DataError("build_vocab: no corpora given");
    std::vector<std::string> texts, surfaces;
    for (const auto& d : corpora) {
        for (const auto& ex : d.examples) texts.push_back(ex.text);
        for (const auto& l : d.labels) surfaces.push_back(l.surface);
    }
    return build_vocab(texts, surfaces, min_count);
}

TokenizedSequence tokenize(const SequencePlan& plan, std::span<const IntentLabel> labels, const Vocabulary& vocab) {
    TokenizedSequence seq;
    seq.plan = plan;
    for (const auto& w : word_tokens(plan.utterance.text)) seq.token_ids.push_back(vocab.id(w));
    if (seq.token_ids.empty()) throw DataError("utterance '" + plan.utterance.text + "' has no word tokens");
    seq.utterance_span = {0, static_cast<int>(seq.token_ids.size())};

    const int k = plan.group.k();
    seq.slot_spans.reserve(k);
    seq.placeholder.reserve(k);
    for (int p = 0; p < k; ++p) {
        seq.token_ids.push_back(Vocabulary::kSep);
        const int begin = static_cast<int>(seq.token_ids.size());
        const int slot = plan.slot_at(p);
        if (slot == kPlaceholder) {
            seq.token_ids.push_back(Vocabulary::kPlh);
        } else {
            if (slot < 0 || slot >= static_cast<int>(labels.size()) || labels[slot].id != slot)
                throw DataError("slot refers to unknown intent id " + std::to_string(slot));
            for (const auto& w : word_tokens(labels[slot].surface)) seq.token_ids.push_back(vocab.id(w));
            if (static_cast<int>(seq.token_ids.size()) == begin)
                throw DataError("label '" + labels[slot].raw_name + "' has no word tokens");
        }
        seq.slot_spans.push_back({begin, static_cast<int>(seq.token_ids.size())});
        seq.placeholder.push_back(slot == kPlaceholder);
    }
    seq.gold_slot = plan.gold_slot;
    return seq;
}

}  // namespace intentcl
