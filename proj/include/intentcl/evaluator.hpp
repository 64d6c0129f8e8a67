#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "intentcl/checkpoint.hpp"
#include "intentcl/inference.hpp"
#include "intentcl/trainer.hpp"

namespace intentcl {

struct EvalReport {
    std::string mode;  // "few-shot" or "zero-shot"
    std::vector<std::uint64_t> seeds;
    std::vector<double> run_accuracy;  // percent
    double mean = 0;
    double stddev = 0;  // population
    std::vector<std::string> intent_names;
    std::vector<double> per_intent_accuracy;  // pooled over runs
};

/// Mean / population std / per-intent accuracy from per-run predictions.
EvalReport summarize_runs(std::string mode, std::span<const std::uint64_t> seeds,
                          std::span<const std::vector<Prediction>> runs, std::span<const IntentLabel> labels);

struct EvalTask {
    Dataset train_pool;          // few-shot samples are drawn from here
    std::optional<Dataset> dev;  // same label inventory as train_pool
    Dataset test;                // same label inventory as train_pool
};

enum class EvalMode { few_shot, zero_shot };

struct EvalOptions {
    EvalMode mode = EvalMode::few_shot;
    int shots = 5;
    std::vector<std::uint64_t> seeds{1, 2, 3};
    const Checkpoint* init = nullptr;  // warm start, or the model under zero-shot evaluation
};

/// Few-shot: per seed, sample -> train -> test. Zero-shot: no training; the
/// given checkpoint (or a seeded untrained model when absent) is scored in
/// canonical group order.
EvalReport evaluate_runs(const EvalTask& task, const TrainConfig& cfg, const EvalOptions& opt,
                         std::vector<std::vector<Prediction>>* predictions = nullptr);

struct TopkMiss {
    int miss_count = 0;
    int recovered_count = 0;
};

/// Misses: utterances whose gold ranks outside the filter's top k_top.
/// Recovered: misses this model still predicts correctly at rank 0.
TopkMiss topk_miss(std::span<const Prediction> predictions, std::span<const Prediction> filter, int k_top);

/// Rankings of a tf-idf label filter (utterance vs label surface text).
std::vector<Prediction> tfidf_label_filter(const Dataset& data);

struct SweepRow {
    int k = 0;
    int m = 0;
    int padding = 0;
    std::optional<double> dev_accuracy;
};

/// Arithmetic columns only.
std::vector<SweepRow> sweep_k_table(int n, std::span<const int> k_values);

/// Trains once per k with a shared seed and scores the dev split.
std::vector<SweepRow> sweep_k(const Dataset& train_data, const Dataset& dev_data, const Vocabulary& vocab,
                              const TrainConfig& cfg, std::span<const int> k_values);

nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(std::span<const SweepRow> rows);
nlohmann::json to_json(const Prediction& p, std::span<const IntentLabel> labels, int top = 5);
std::string to_text(const EvalReport& report);
std::string to_text(std::span<const SweepRow> rows);

}  // namespace intentcl
