#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "intentcl/model.hpp"
#include "intentcl/sequencer.hpp"
#include "intentcl/vocabulary.hpp"

namespace intentcl {

struct ScoredIntent {
    int intent_id = 0;
    double score = 0;
};

/// Ranking of every real intent for one utterance; scores non-increasing,
/// ties broken by lower intent id.
struct Prediction {
    int index = 0;  // utterance position in its dataset
    std::string text;
    int gold = kPlaceholder;  // kPlaceholder when unknown
    std::vector<ScoredIntent> ranking;

    int predicted() const { return ranking.front().intent_id; }
    int rank_of(int intent_id) const;  // -1 when absent
};

/// Scores each real slot by cos(h_U, h_j) within its own sequence and ranks
/// globally across the plans. Placeholders are never candidates.
Prediction rank_plans(const ModelParams<double>& params, const Vocabulary& vocab, std::span<const SequencePlan> plans,
                      std::span<const IntentLabel> labels);

/// Canonical-order plans over the space's fixed grouping.
Prediction predict(const ModelParams<double>& params, const Vocabulary& vocab, const std::string& text,
                   const LabelSpace& space);

Prediction predict(const ModelParams<double>& params, const Vocabulary& vocab, const std::string& text,
                   std::span<const IntentLabel> labels, int k);

std::vector<Prediction> predict_dataset(const ModelParams<double>& params, const Vocabulary& vocab,
                                        const Dataset& data, int k);

/// Top-1 accuracy in percent.
double accuracy(std::span<const Prediction> predictions);

}  // namespace intentcl
