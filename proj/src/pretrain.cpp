#include "intentcl/pretrain.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "intentcl/errors.hpp"
#include "intentcl/random.hpp"
#include "intentcl/vocabulary.hpp"

namespace intentcl {

std::vector<ParaphrasePair> load_paraphrase_pairs(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open paraphrase file " + path.string());
    std::vector<ParaphrasePair> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected two tab-separated columns");
        ParaphrasePair p{line.substr(0, tab), line.substr(tab + 1)};
        if (word_tokens(p.anchor).empty() || word_tokens(p.paraphrase).empty())
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": empty sentence");
        if (p.anchor == p.paraphrase) continue;
        pairs.push_back(std::move(p));
    }
    if (pairs.empty()) throw DataError(path.string() + ": no paraphrase pairs");
    return pairs;
}

void write_paraphrase_pairs(std::span<const ParaphrasePair> pairs, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& p : pairs) out << p.anchor << '\t' << p.paraphrase << '\n';
}

std::size_t word_count(std::string_view s) {
    std::size_t n = 0;
    bool in_word = false;
    for (char c : s) {
        bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
        if (!space && !in_word) ++n;
        in_word = !space;
    }
    return n;
}

std::size_t char_count(std::string_view s) {
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::vector<ParaphrasePair> filter_pairs(std::span<const ParaphrasePair> pairs, std::size_t max_words,
                                         std::size_t max_chars) {
    if (max_words < 1 || max_chars < 1) throw UsageError("filter caps must be positive");
    auto fits = [&](const std::string& s) { return word_count(s) <= max_words && char_count(s) <= max_chars; };
    std::vector<ParaphrasePair> kept;
    for (const auto& p : pairs)
        if (fits(p.anchor) && fits(p.paraphrase)) kept.push_back(p);
    return kept;
}

TfidfIndex::TfidfIndex(std::vector<std::string> sentences) : sentences_(std::move(sentences)) {
    std::vector<std::map<int, int>> counts(sentences_.size());
    std::vector<int> df;
    for (std::size_t d = 0; d < sentences_.size(); ++d) {
        for (const auto& w : word_tokens(sentences_[d])) {
            auto [it, inserted] = term_ids_.emplace(w, static_cast<int>(df.size()));
            if (inserted) df.push_back(0);
            if (counts[d][it->second]++ == 0) ++df[it->second];
        }
    }
    const double n = static_cast<double>(sentences_.size());
    idf_.resize(df.size());
    for (std::size_t t = 0; t < df.size(); ++t) idf_[t] = std::log((1 + n) / (1 + df[t])) + 1;

    postings_.resize(df.size());
    for (std::size_t d = 0; d < sentences_.size(); ++d) {
        double norm = 0;
        for (auto [term, c] : counts[d]) norm += std::pow(c * idf_[term], 2);
        norm = std::sqrt(norm);
        if (norm == 0) continue;
        for (auto [term, c] : counts[d]) postings_[term].push_back({d, c * idf_[term] / norm});
    }
}

TfidfIndex::SparseVec TfidfIndex::vectorize(std::string_view text) const {
    std::map<int, int> counts;
    for (const auto& w : word_tokens(text))
        if (auto it = term_ids_.find(w); it != term_ids_.end()) ++counts[it->second];
    SparseVec v;
    double norm = 0;
    for (auto [term, c] : counts) {
        v.push_back({term, c * idf_[term]});
        norm += v.back().second * v.back().second;
    }
    norm = std::sqrt(norm);
    for (auto& [term, w] : v) w = norm > 0 ? w / norm : 0;
    return v;
}

double TfidfIndex::similarity(std::string_view a, std::string_view b) const {
    auto va = vectorize(a), vb = vectorize(b);
    double dot = 0;
    std::size_t i = 0, j = 0;
    while (i < va.size() && j < vb.size()) {
        if (va[i].first < vb[j].first) ++i;
        else if (va[i].first > vb[j].first) ++j;
        else dot += va[i++].second * vb[j++].second;
    }
    return dot;
}

std::vector<RankedSentence> TfidfIndex::top_t(std::string_view query, std::size_t t,
                                              const std::function<bool(std::size_t)>& skip) const {
    if (t >= sentences_.size())
        throw UsageError("top_t: t = " + std::to_string(t) + " must be below the corpus size " +
                         std::to_string(sentences_.size()));
    auto excluded = [&](std::size_t d) { return sentences_[d] == query || (skip && skip(d)); };

    // Accumulate dot products through the postings of the query terms.
    std::map<std::size_t, double> touched;
    for (auto [term, w] : vectorize(query))
        for (auto [doc, dw] : postings_[term]) touched[doc] += w * dw;

    std::vector<RankedSentence> ranked;
    for (auto [doc, score] : touched)
        if (score > 0 && !excluded(doc)) ranked.push_back({doc, score});
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedSentence& a, const RankedSentence& b) { return a.score > b.score; });
    if (ranked.size() > t) ranked.resize(t);
    // Zero-similarity sentences fill the remainder in corpus order.
    for (std::size_t d = 0; d < sentences_.size() && ranked.size() < t; ++d) {
        auto it = touched.find(d);
        if ((it == touched.end() || it->second <= 0) && !excluded(d)) ranked.push_back({d, 0.0});
    }
    return ranked;
}

TfidfIndex build_similarity_index(std::vector<std::string> sentences) {
    if (sentences.size() < 2) throw UsageError("similarity index needs at least two sentences");
    return TfidfIndex(std::move(sentences));
}

ParaphraseSet build_paraphrase_instances(std::span<const ParaphrasePair> pairs, int n_target, int k,
                                         std::uint64_t seed, const SentenceRanker* ranker) {
    if (n_target < 2) throw UsageError("paraphrase pretraining needs n_target >= 2");
    if (k < 1) throw UsageError("k must be positive");
    if (pairs.empty()) throw DataError("no paraphrase pairs");
    const auto t = static_cast<std::size_t>(n_target - 1);

    std::optional<TfidfIndex> own;
    if (!ranker) {
        std::vector<std::string> pool;
        std::set<std::string> seen;
        for (const auto& p : pairs)
            for (const auto* s : {&p.anchor, &p.paraphrase})
                if (seen.insert(*s).second) pool.push_back(*s);
        if (pool.size() < t + 2)
            throw DataError("paraphrase corpus has " + std::to_string(pool.size()) + " distinct sentences; " +
                            std::to_string(t) + " negatives per anchor need at least " + std::to_string(t + 2));
        own.emplace(std::move(pool));
        ranker = &*own;
    }
    const auto& corpus = ranker->sentences();

    ParaphraseSet out;
    std::uint64_t instance_no = 0;
    for (const auto& p : pairs) {
        for (int side = 0; side < 2; ++side, ++instance_no) {
            const std::string& anchor = side == 0 ? p.anchor : p.paraphrase;
            const std::string& gold = side == 0 ? p.paraphrase : p.anchor;
            std::set<std::string> taken{anchor, gold};
            PretrainInstance inst{anchor, gold, {}};
            auto skip = [&](std::size_t d) { return taken.count(corpus[d]) > 0; };
            // Corpus duplicates are skipped lazily, so ask for a few extra.
            std::size_t want = std::min(corpus.size() - 1, t + 2);
            for (;;) {
                inst.negatives.clear();
                std::set<std::string> uniq;
                for (const auto& r : ranker->top_t(anchor, want, skip)) {
                    if (uniq.insert(corpus[r.index]).second) inst.negatives.push_back(corpus[r.index]);
                    if (inst.negatives.size() == t) break;
                }
                if (inst.negatives.size() == t || want == corpus.size() - 1) break;
                want = std::min(corpus.size() - 1, want * 2);
            }
            if (inst.negatives.size() < t)
                throw DataError("insufficient corpus: anchor '" + anchor + "' has only " +
                                std::to_string(inst.negatives.size()) + " of " + std::to_string(t) + " negatives");

            std::vector<std::string> candidates;
            candidates.reserve(n_target);
            candidates.push_back(gold);
            candidates.insert(candidates.end(), inst.negatives.begin(), inst.negatives.end());
            Rng rng(derive_seed(seed, {0x9a4a, instance_no}));
            rng.shuffle(std::span(candidates));

            std::vector<IntentLabel> labels;
            int gold_id = -1;
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                if (candidates[c] == gold) gold_id = static_cast<int>(c);
                labels.push_back({static_cast<int>(c), candidates[c], candidates[c]});
            }
            auto space = make_label_space(std::move(labels), k);
            LabeledUtterance u{anchor, gold_id, std::nullopt};
            out.examples.push_back({space, build_plans(u, space->groups)});
            out.instances.push_back(std::move(inst));
        }
    }
    return out;
}

std::vector<PlannedExample> build_ood_pretrain(const Dataset& ood, int k) {
    if (ood.examples.empty()) throw DataError("OOD dataset is empty");
    return plan_dataset(ood, k);
}

void write_pretrain_jsonl(const ParaphraseSet& set, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (std::size_t i = 0; i < set.instances.size(); ++i) {
        const auto& inst = set.instances[i];
        const auto& ex = set.examples[i];
        nlohmann::json groups = nlohmann::json::array();
        int gold_group = -1;
        for (const auto& plan : ex.plans) {
            nlohmann::json g = nlohmann::json::array();
            for (int slot : plan.group.slots) g.push_back(slot == kPlaceholder ? "<plh>" : ex.space->labels[slot].raw_name);
            groups.push_back(std::move(g));
            if (plan.has_gold) gold_group = plan.group.index;
        }
        nlohmann::json rec = {{"anchor", inst.anchor}, {"gold", inst.gold},          {"negatives", inst.negatives},
                              {"t", inst.t()},         {"groups", std::move(groups)}, {"gold_group", gold_group}};
        out << rec.dump() << '\n';
    }
}

}  // namespace intentcl
