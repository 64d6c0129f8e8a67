#pragma once

#include <cstdint>
#include <vector>

#include "intentcl/corpus.hpp"
#include "intentcl/pretrain.hpp"

namespace intentcl {

struct SyntheticTask {
    Dataset train;  // `shots` utterances per intent
    Dataset test;   // `test_per_intent` utterances per intent
};

/// Intent i has the surface "topic <i>a <i>b"; each utterance is that surface
/// plus `noise_tokens` filler words at random positions.
SyntheticTask generate_synthetic(int n_intents, int shots, int noise_tokens, std::uint64_t seed,
                                 int test_per_intent = 20);

/// A lexicon of concepts, each with two interchangeable words (w<c>, v<c>).
/// Paraphrase pairs render the same concepts with opposite words. The
/// zero-shot task labels intent i as "w<2i> w<2i+1>" while its utterances use
/// only the v-words, so surface overlap with the label is nil and only a
/// learned word equivalence transfers. No paraphrase sentence contains both
/// concepts of any intent.
struct ParaphraseWorld {
    std::vector<ParaphrasePair> pairs;
    Dataset zero_shot_test;
};

ParaphraseWorld generate_paraphrase_world(int n_pairs, int n_intents, int noise_tokens, std::uint64_t seed,
                                          int test_per_intent = 20);

}  // namespace intentcl
