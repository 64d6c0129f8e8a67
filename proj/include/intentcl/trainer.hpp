#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "intentcl/corpus.hpp"
#include "intentcl/model.hpp"
#include "intentcl/objective.hpp"
#include "intentcl/sequencer.hpp"
#include "intentcl/vocabulary.hpp"

namespace intentcl {

enum class Optimizer { sgd, adam };
enum class Selection { dev_accuracy, train_loss };

Optimizer parse_optimizer(const std::string& s);
Selection parse_selection(const std::string& s);
const char* to_string(Optimizer o);
const char* to_string(Selection s);

struct TrainConfig {
    int k = 0;  // 0: choose_k over [k_min, k_max]
    int k_min = 20;
    int k_max = 35;
    double tau = 0.1;
    bool include_placeholders = false;
    int batch_size = 8;
    double learning_rate = 1e-2;
    int epochs = 10;
    std::uint64_t seed = 0;
    int shuffles_per_sequence = 0;  // 0: k
    Optimizer optimizer = Optimizer::adam;
    Selection selection = Selection::dev_accuracy;
    int min_dev_size = 10;  // smaller dev sets fall back to train loss

    int d_emb = 64;
    int d_hidden = 64;
    int d_out = 64;
    int depth = 2;
    bool attention = false;
    double init_scale = 0.1;

    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;

    LossConfig loss() const { return {tau, include_placeholders}; }
    ModelShape shape(int vocab_size) const {
        return ModelShape::make(vocab_size, d_emb, d_hidden, d_out, depth, attention);
    }
    int resolve_k(int n) const { return k > 0 ? k : choose_k(n, k_min, k_max); }
    void validate() const;
};

struct EpochRecord {
    int epoch = 0;
    double train_loss = 0;
    double metric = 0;
    Selection selection = Selection::train_loss;
    int steps = 0;
};

struct TrainReport {
    int k = 0;
    Selection selection = Selection::train_loss;
    double initial_loss = 0;  // canonical plans, initial parameters
    double final_loss = 0;    // canonical plans, returned parameters
    std::vector<double> epoch_loss;
    std::vector<double> epoch_metric;
    int best_epoch = -1;  // -1 when no epoch ran
};

struct TrainResult {
    ModelParams<double> params;
    TrainReport report;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Adam (or plain SGD) over a parameter set.
class OptimizerState {
public:
    OptimizerState(const ModelParams<double>& like, const TrainConfig& cfg);
    void step(ModelParams<double>& params, const ModelParams<double>& grad);
    long steps() const { return t_; }

private:
    Optimizer kind_;
    double lr_, beta1_, beta2_, eps_;
    ModelParams<double> m_, v_;
    long t_ = 0;
};

/// Mini-batch training over pre-planned examples. Each epoch expands every
/// plan into shuffled variants, shuffles the pool and steps the optimizer.
/// The best epoch under the selection rule is returned. `dev` is scored with
/// `dev_k` groups; selection falls back to train loss when it is absent or
/// smaller than cfg.min_dev_size.
TrainResult train_planned(std::span<const PlannedExample> items, const Vocabulary& vocab, const TrainConfig& cfg,
                          const ModelParams<double>* init = nullptr, const Dataset* dev = nullptr, int dev_k = 0,
                          const EpochCallback& on_epoch = {});

/// Fine-tuning entry point over an intent dataset.
TrainResult train(const Dataset& train_data, const Dataset* dev_data, const Vocabulary& vocab, const TrainConfig& cfg,
                  const ModelParams<double>* init = nullptr, const EpochCallback& on_epoch = {});

/// Mean loss of the canonical (unshuffled) plans.
double planned_loss(const ModelParams<double>& params, std::span<const PlannedExample> items, const Vocabulary& vocab,
                    const LossConfig& cfg);

}  // namespace intentcl
