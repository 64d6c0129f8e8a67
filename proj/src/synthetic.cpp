#include "intentcl/synthetic.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <string>

#include "intentcl/errors.hpp"
#include "intentcl/random.hpp"

namespace intentcl {

namespace {

constexpr std::array<const char*, 30> kFillers = {
    "please", "could", "you", "the",  "my",   "now",    "today",   "just",   "want",   "to",
    "a",      "for",   "me",  "i",    "need", "help",   "with",    "it",     "this",   "that",
    "some",   "any",   "again", "quickly", "thanks", "hey", "so", "really", "maybe", "also"};

std::string join(const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

// Inserts filler words at random positions.
std::string render(std::vector<std::string> words, int noise_tokens, Rng& rng) {
    for (int i = 0; i < noise_tokens; ++i) {
        std::string filler = kFillers[rng.uniform_index(kFillers.size())];
        auto pos = static_cast<std::ptrdiff_t>(rng.uniform_index(words.size() + 1));
        words.insert(words.begin() + pos, std::move(filler));
    }
    return join(words);
}

}  // namespace

SyntheticTask generate_synthetic(int n_intents, int shots, int noise_tokens, std::uint64_t seed,
                                 int test_per_intent) {
    if (n_intents < 2) throw UsageError("synthetic task needs at least two intents");
    if (shots < 0 || noise_tokens < 0 || test_per_intent < 1) throw UsageError("invalid synthetic task sizes");

    std::vector<IntentLabel> labels;
    std::vector<std::vector<std::string>> surface_words;
    for (int i = 0; i < n_intents; ++i) {
        const auto id = std::to_string(i);
        std::string raw = "topic_" + id + "a_" + id + "b";
        labels.push_back({i, raw, normalize_label(raw)});
        surface_words.push_back({"topic", id + "a", id + "b"});
    }

    SyntheticTask task;
    task.train.name = "synthetic-train";
    task.test.name = "synthetic-test";
    task.train.labels = task.test.labels = labels;
    Rng rng(derive_seed(seed, {0x5717}));
    for (int i = 0; i < n_intents; ++i)
        for (int s = 0; s < shots; ++s) task.train.examples.push_back({render(surface_words[i], noise_tokens, rng), i, std::nullopt});
    for (int i = 0; i < n_intents; ++i)
        for (int s = 0; s < test_per_intent; ++s)
            task.test.examples.push_back({render(surface_words[i], noise_tokens, rng), i, std::nullopt});
    return task;
}

ParaphraseWorld generate_paraphrase_world(int n_pairs, int n_intents, int noise_tokens, std::uint64_t seed,
                                          int test_per_intent) {
    if (n_pairs < 1 || n_intents < 2 || noise_tokens < 0 || test_per_intent < 1)
        throw UsageError("invalid paraphrase world sizes");
    const int n_concepts = 2 * n_intents;
    auto word = [](int concept_id, bool alt) { return std::string(alt ? "v" : "w") + std::to_string(concept_id); };

    ParaphraseWorld world;
    Rng rng(derive_seed(seed, {0xa1a5}));
    for (int p = 0; p < n_pairs; ++p) {
        // 2 or 3 distinct concepts, never both halves of one intent.
        std::vector<int> concepts;
        const int size = 2 + static_cast<int>(rng.uniform_index(2));
        while (static_cast<int>(concepts.size()) < size) {
            int c = static_cast<int>(rng.uniform_index(n_concepts));
            int partner = c ^ 1;
            if (std::find(concepts.begin(), concepts.end(), c) != concepts.end()) continue;
            if (std::find(concepts.begin(), concepts.end(), partner) != concepts.end()) continue;
            concepts.push_back(c);
        }
        std::vector<std::string> a, b;
        for (int c : concepts) {
            bool alt = rng.uniform_index(2) == 1;
            a.push_back(word(c, alt));
            b.push_back(word(c, !alt));
        }
        rng.shuffle(std::span(b));
        world.pairs.push_back({render(a, static_cast<int>(rng.uniform_index(3)), rng),
                               render(b, static_cast<int>(rng.uniform_index(3)), rng)});
    }

    auto& test = world.zero_shot_test;
    test.name = "zero-shot-test";
    for (int i = 0; i < n_intents; ++i) {
        std::string raw = word(2 * i, false) + "_" + word(2 * i + 1, false);
        test.labels.push_back({i, raw, normalize_label(raw)});
    }
    for (int i = 0; i < n_intents; ++i)
        for (int s = 0; s < test_per_intent; ++s)
            test.examples.push_back({render({word(2 * i, true), word(2 * i + 1, true)}, noise_tokens, rng), i, std::nullopt});
    return world;
}

}  // namespace intentcl
