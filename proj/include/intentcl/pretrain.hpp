#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "intentcl/corpus.hpp"
#include "intentcl/sequencer.hpp"

namespace intentcl {

struct ParaphrasePair {
    std::string anchor;
    std::string paraphrase;
};

struct PretrainInstance {
    std::string anchor;
    std::string gold;
    std::vector<std::string> negatives;

    int t() const { return static_cast<int>(negatives.size()); }
};

/// `anchor<TAB>paraphrase` per line, UTF-8, no header. Pairs whose sides are
/// identical are skipped.
std::vector<ParaphrasePair> load_paraphrase_pairs(const std::filesystem::path& path);
void write_paraphrase_pairs(std::span<const ParaphrasePair> pairs, const std::filesystem::path& path);

std::size_t word_count(std::string_view s);  // whitespace-delimited
std::size_t char_count(std::string_view s);  // UTF-8 code points, spaces included

/// Keeps a pair iff both sides have <= max_words words and <= max_chars characters.
std::vector<ParaphrasePair> filter_pairs(std::span<const ParaphrasePair> pairs, std::size_t max_words = 10,
                                         std::size_t max_chars = 40);

struct RankedSentence {
    std::size_t index = 0;
    double score = 0;
};

/// Similarity ranking over a fixed sentence corpus. Any scorer can back the
/// negative miner through this interface.
class SentenceRanker {
public:
    virtual ~SentenceRanker() = default;
    virtual const std::vector<std::string>& sentences() const = 0;

    /// Up to t sentences by non-increasing similarity, ties in corpus order.
    /// Sentences identical to the query, and those `skip` rejects, are left out.
    virtual std::vector<RankedSentence> top_t(std::string_view query, std::size_t t,
                                              const std::function<bool(std::size_t)>& skip = {}) const = 0;
};

/// Cosine similarity of tf-idf vectors, idf = ln((1 + N) / (1 + df)) + 1.
class TfidfIndex final : public SentenceRanker {
public:
    explicit TfidfIndex(std::vector<std::string> sentences);

    const std::vector<std::string>& sentences() const override { return sentences_; }
    std::vector<RankedSentence> top_t(std::string_view query, std::size_t t,
                                      const std::function<bool(std::size_t)>& skip = {}) const override;
    double similarity(std::string_view a, std::string_view b) const;

private:
    using SparseVec = std::vector<std::pair<int, double>>;  // sorted by term, unit norm
    SparseVec vectorize(std::string_view text) const;

    std::vector<std::string> sentences_;
    std::unordered_map<std::string, int> term_ids_;
    std::vector<double> idf_;
    std::vector<std::vector<std::pair<std::size_t, double>>> postings_;
};

/// Throws when t >= number of sentences, or fewer than two sentences.
TfidfIndex build_similarity_index(std::vector<std::string> sentences);

struct ParaphraseSet {
    std::vector<PretrainInstance> instances;
    std::vector<PlannedExample> examples;  // m plans per instance
};

/// Each pair yields two anchors. Gold = the paraphrase; negatives = the
/// t = n_target - 1 most similar other sentences of the corpus. The n_target
/// candidates are placed in a seeded order and grouped k at a time.
ParaphraseSet build_paraphrase_instances(std::span<const ParaphrasePair> pairs, int n_target, int k,
                                         std::uint64_t seed = 0, const SentenceRanker* ranker = nullptr);

/// OOD pretraining plans: the union inventory grouped exactly as for fine-tuning.
std::vector<PlannedExample> build_ood_pretrain(const Dataset& ood, int k);

/// Audit dump of paraphrase instances with their grouping.
void write_pretrain_jsonl(const ParaphraseSet& set, const std::filesystem::path& path);

}  // namespace intentcl
