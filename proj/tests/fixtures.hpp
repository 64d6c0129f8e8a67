#pragma once

#include <string>
#include <vector>

#include "intentcl/corpus.hpp"
#include "intentcl/sequencer.hpp"
#include "intentcl/vocabulary.hpp"

namespace fixtures {

using namespace intentcl;

inline std::vector<IntentLabel> labels(std::initializer_list<const char*> surfaces) {
    std::vector<IntentLabel> out;
    int id = 0;
    for (const char* s : surfaces) out.push_back({id++, s, s});
    return out;
}

inline Vocabulary vocab_for(const std::vector<IntentLabel>& ls, const std::vector<std::string>& texts) {
    std::vector<std::string> surfaces;
    for (const auto& l : ls) surfaces.push_back(l.surface);
    return build_vocab(texts, surfaces);
}

// Tokenized sequences (canonical order) for one utterance over every group.
inline std::vector<TokenizedSequence> sequences(const std::string& text, int gold, const std::vector<IntentLabel>& ls,
                                                int k, const Vocabulary& vocab) {
    auto groups = partition_intents(ls, k);
    std::vector<TokenizedSequence> out;
    for (const auto& plan : build_plans({text, gold, std::nullopt}, groups)) out.push_back(tokenize(plan, ls, vocab));
    return out;
}

}  // namespace fixtures
